#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "famapf/world.hpp"

namespace famapf {

struct TrajectorySample {
  double t = 0.0;  // seconds
  double x = 0.0;  // meters, map frame
  double y = 0.0;
};

struct Trajectory {
  std::string id;
  std::vector<TrajectorySample> samples;

  // Single-sample trajectories are kept in the dataset but yield no velocities.
  bool usable_for_velocities() const { return samples.size() >= 2; }
};

using TrajectoryDataset = std::vector<Trajectory>;

// CSV with header `traj_id,t,x,y`. Rows of one id must have strictly increasing t; the
// result is ordered by id (numerically when both ids are integers).
TrajectoryDataset parse_trajectory_csv(std::string_view text);
TrajectoryDataset load_trajectories(const std::filesystem::path& path);
std::string to_trajectory_csv(const TrajectoryDataset& dataset);

// Angle wrapped into [0, 2pi).
double wrap_angle(double theta);
// Signed difference a - b wrapped into (-pi, pi].
double angle_diff(double a, double b);

struct VelocitySample {
  double theta = 0.0;  // [0, 2pi), 0 = +x, pi/2 = "Up" (-y)
  double rho = 0.0;    // m/s
};

struct VelocityObservation {
  Point pos;
  VelocitySample u;
};

inline constexpr double kDefaultResampleDt = 1.0;

// Linear resampling at spacing dt from the first sample, then forward differences. Each
// observation is anchored at the start of its segment. A zero-length segment gives (0, 0).
std::vector<VelocityObservation> extract_velocities(const Trajectory& traj,
                                                    double dt = kDefaultResampleDt);

struct CellObservations {
  int width = 0;
  int height = 0;
  std::vector<std::vector<VelocitySample>> cells;  // indexed by y * width + x
  std::int64_t dropped = 0;  // outside the map extent or on a blocked cell

  int gamma(int idx) const { return static_cast<int>(cells[static_cast<std::size_t>(idx)].size()); }
  std::int64_t total() const;
};

CellObservations bin_observations(std::span<const VelocityObservation> obs, const GridMap& map);
CellObservations bin_observations(const TrajectoryDataset& dataset, const GridMap& map,
                                  double dt = kDefaultResampleDt);

}  // namespace famapf
