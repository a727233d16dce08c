#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "famapf/parallel.hpp"
#include "famapf/swgmm.hpp"
#include "famapf/trajectories.hpp"
#include "famapf/world.hpp"

namespace famapf {

struct CliffCell {
  int gamma = 0;                // observations binned to the cell
  std::optional<SWGMM> model;   // absent when gamma < min_observations or the fit failed
};

// Per-vertex motion model, indexed like the grid (y * width + x).
struct CliffMap {
  int width = 0;
  int height = 0;
  double resolution = 1.0;
  std::string map_name;
  std::vector<CliffCell> cells;
  FitConfig fit_config;
  std::string dataset_hash;
  double coverage = 0.0;  // modelled cells / passable cells

  static CliffMap empty(const GridMap& map);

  const CliffCell& at(int idx) const { return cells[static_cast<std::size_t>(idx)]; }
  int modeled_cells() const;
};

inline constexpr int kCliffSchemaVersion = 1;

struct CliffBuildReport {
  int fitted = 0;
  int failed = 0;
  int below_threshold = 0;  // cells with 0 < gamma < min_observations
};

// Fits one SWGMM per cell with gamma >= min_observations. Each cell uses its own seed
// derived from (cfg.seed, cell index), so serial and parallel runs agree bit for bit.
CliffMap build_cliffmap(const GridMap& map, const CellObservations& binned, const FitConfig& cfg,
                        Execution exec = Execution::parallel, CliffBuildReport* report = nullptr);

// FNV-1a over the binned observations; identifies the dataset a map was fitted from.
std::string hash_observations(const CellObservations& binned);

nlohmann::json fit_config_to_json(const FitConfig& c);
// Missing keys keep their defaults.
FitConfig fit_config_from_json(const nlohmann::json& j);

nlohmann::json cliffmap_to_json(const CliffMap& m);
// Throws std::invalid_argument on schema-version mismatch, out-of-range cells, invalid
// mixtures (weights, non-SPD covariance) or a model on a cell with gamma < 1.
CliffMap cliffmap_from_json(const nlohmann::json& doc);

std::string save_cliffmap(const CliffMap& m);
CliffMap load_cliffmap(std::string_view document);

}  // namespace famapf
