#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "famapf/cbs.hpp"
#include "famapf/cliffmap.hpp"
#include "famapf/lifelong.hpp"
#include "famapf/uasim.hpp"

namespace famapf::cli {

// Bad or missing configuration; mapped to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Variant { baseline, flow_aware };

std::string to_string(Variant v);
Variant parse_variant(const std::string& s);

enum class ExperimentMode { lifelong, oneshot };

struct ExperimentConfig {
  std::vector<std::filesystem::path> maps;
  ExperimentMode mode = ExperimentMode::lifelong;
  std::vector<Variant> variants{Variant::baseline, Variant::flow_aware};
  std::vector<std::uint64_t> seeds{1};
  int agents = 20;
  double omega1 = 1.5;
  double step_cost = 1.0;
  LowLevelKind low_level = LowLevelKind::sipp;
  SimulationConfig sim;
  double oneshot_time_limit_s = 5.0;
  std::optional<std::filesystem::path> scen;  // oneshot; random tasks from the seed otherwise
  UAConfig ua;
  // Motion model for the flow-aware variant: a CliffMap file, a trajectory CSV to fit, or a
  // dataset generated from `ua` with this many trajectories.
  std::optional<std::filesystem::path> cliffmap;
  std::optional<std::filesystem::path> trajectories;
  int dataset_size = kDefaultDatasetSize;
  FitConfig fit;
  double radius_agent = kDefaultRadius;
  double radius_ua = kDefaultRadius;
  int jobs = 0;  // 0 = all cores
  std::filesystem::path output_dir = "bench";

  // Throws ConfigError for missing files or inconsistent values.
  void validate() const;
};

ExperimentConfig experiment_from_json(const nlohmann::json& j);

struct RunRow {
  std::string map;
  Variant variant = Variant::baseline;
  std::uint64_t seed = 0;
  bool ok = true;
  std::string error;
  bool solved = false;  // oneshot: solved within the limit; lifelong: no failed iteration
  double throughput = 0.0;
  int completed = 0;
  double cost = 0.0;  // oneshot sum of costs
  long ua_conflicts = 0;
  double ua_conflicts_per_timestep = 0.0;
  int failed_iterations = 0;
  double runtime_s = 0.0;  // timing: mean iteration runtime (lifelong) or solve time (oneshot)
};

struct Aggregate {
  std::string map;
  Variant variant = Variant::baseline;
  int runs = 0;
  double solved_rate = 0.0;
  double throughput_mean = 0.0, throughput_std = 0.0;
  double conflicts_mean = 0.0, conflicts_std = 0.0;
  double runtime_mean = 0.0, runtime_std = 0.0;
};

struct Report {
  std::vector<RunRow> rows;
  std::vector<Aggregate> aggregates;
};

// Guidance graph for one map and variant; the flow-aware CliffMap comes from the config.
GuidanceGraph make_guidance(const GridMap& map, Variant v, const ExperimentConfig& cfg);
CliffMap make_cliffmap(const GridMap& map, const ExperimentConfig& cfg);

RunRow run_lifelong(const GridMap& map, const GuidanceGraph& gg, Variant v, std::uint64_t seed,
                    const ExperimentConfig& cfg);
RunRow run_oneshot(const GridMap& map, const GuidanceGraph& gg, Variant v, std::uint64_t seed,
                   const ExperimentConfig& cfg);

// maps x variants x seeds, run concurrently, rows in that order.
Report run_experiment(const ExperimentConfig& cfg);
std::vector<Aggregate> aggregate(const std::vector<RunRow>& rows);

// Non-timing columns only, so reruns give identical bytes.
std::string report_csv(const Report& r);
std::string timing_csv(const Report& r);
nlohmann::json report_json(const Report& r);

}  // namespace famapf::cli
