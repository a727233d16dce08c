#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "famapf/parallel.hpp"
#include "famapf/paths.hpp"
#include "famapf/trajectories.hpp"
#include "famapf/world.hpp"

namespace famapf {

enum class MovementType { random, directed, speed };
enum class UAConnectivity { eight, four };

std::string to_string(MovementType m);
MovementType parse_movement_type(const std::string& s);

enum class AreaRole { start, goal };

// Inclusive cell rectangle [x0, x1] x [y0, y1].
struct UAArea {
  std::string name;
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  AreaRole role = AreaRole::start;
  double weight = 1.0;
  double speed_multiplier = 1.0;
  // Start areas only: goal areas paired with this start; empty means any goal area.
  std::vector<std::string> goals;

  bool contains(Vertex v) const { return v.x >= x0 && v.x <= x1 && v.y >= y0 && v.y <= y1; }
};

struct UAConfig {
  MovementType movement_type = MovementType::random;
  std::vector<UAArea> areas;
  double base_speed = 1.0;  // m/s
  UAConnectivity connectivity = UAConnectivity::eight;
  std::uint64_t seed = 0;

  // Throws std::invalid_argument when an area leaves the map, has no passable cell, has a
  // non-positive multiplier or weight, or a directed regime lacks start or goal areas.
  void validate(const GridMap& map) const;
};

UAConfig ua_config_from_json(const nlohmann::json& j);
nlohmann::json ua_config_to_json(const UAConfig& c);
UAConfig load_ua_config(const std::filesystem::path& path);

// Piecewise-linear motion; the UA exists from the first to the last waypoint.
struct UATrajectory {
  int id = 0;
  int spawn_time = 0;
  std::vector<TrajectorySample> waypoints;  // absolute times, seconds

  double t_begin() const { return waypoints.front().t; }
  double t_end() const { return waypoints.back().t; }
  Point at(double t) const;
};

// Shortest grid path (diagonals cost sqrt 2 and may not cut blocked corners) through cell
// centers at constant speed, starting at time t0. Throws std::invalid_argument for blocked
// endpoints or non-positive speed, std::runtime_error when the goal is unreachable.
UATrajectory plan_ua_path(const GridMap& map, Vertex start, Vertex goal, double speed,
                          UAConnectivity connectivity = UAConnectivity::eight, double t0 = 0.0);

inline constexpr int kDefaultDatasetSize = 10000;
inline constexpr int kOneshotUACount = 100;

std::vector<UATrajectory> generate_dataset(const GridMap& map, const UAConfig& cfg,
                                           int n = kDefaultDatasetSize);

enum class StreamMode { oneshot, lifelong };

StreamMode parse_stream_mode(const std::string& s);

// oneshot: kOneshotUACount UAs at t = 0; lifelong: one UA per timestep 0..sim_time-1.
std::vector<UATrajectory> generate_stream(const GridMap& map, const UAConfig& cfg, StreamMode mode,
                                          int sim_time);

TrajectoryDataset to_dataset(std::span<const UATrajectory> uas);
std::vector<UATrajectory> from_dataset(const TrajectoryDataset& d);

// A moving disc centre: piecewise-linear samples, existing between the first and last.
struct Track {
  int id = 0;
  std::vector<TrajectorySample> samples;
};

// MAPF agents move between cell centres at one cell per timestep and rest after their path
// ends; tracks run from time 0 to t_end.
std::vector<Track> agent_tracks(const GridMap& map, std::span<const TimedPath> paths, int t_end);
std::vector<Track> ua_tracks(std::span<const UATrajectory> uas);

inline constexpr double kDefaultRadius = 0.3;

struct UAConflict {
  int agent = 0;
  int ua = 0;
  double time = 0.0;          // start of the contact episode
  double min_distance = 0.0;  // closest approach within the episode
};

struct ConflictReport {
  long total = 0;
  std::vector<long> per_timestep;          // episodes by the timestep they start in
  std::vector<long> overlap_per_timestep;  // pairs in contact at some point of [t, t + 1)
  std::vector<UAConflict> conflicts;       // sorted by time, agent, ua
};

// A conflict episode is a maximal time span during which the distance between an agent and a
// UA stays below radius_agent + radius_ua; brief returns to exactly the threshold do not
// split an episode.
ConflictReport count_conflicts(std::span<const Track> agents, std::span<const Track> uas,
                               double radius_agent = kDefaultRadius,
                               double radius_ua = kDefaultRadius,
                               Execution exec = Execution::parallel);

}  // namespace famapf
