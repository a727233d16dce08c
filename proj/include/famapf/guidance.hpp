#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "famapf/cliffmap.hpp"
#include "famapf/swgmm.hpp"
#include "famapf/world.hpp"

namespace famapf {

// Velocity an action corresponds to when compared against the motion model. Agents move one
// cell per timestep, i.e. 1 m/s.
struct ActionVelocity {
  double theta = 0.0;
  double rho = 0.0;
};

// Right (0,1), Up (pi/2,1), Left (pi,1), Down (3pi/2,1). Wait has no heading and throws
// std::invalid_argument.
ActionVelocity action_velocity(Action a);

// How ln(gamma) combines with the weighted Mahalanobis sum.
enum class LogGrouping {
  scale_sum,       // ln(gamma) * sum_j beta_j d_j
  log_of_product,  // max(0, ln(gamma * sum_j beta_j d_j)), for experimentation only
};

struct FlowCostConfig {
  LogGrouping grouping = LogGrouping::scale_sum;
};

// Mahalanobis distance between one component and an action velocity. The heading residual is
// the shortest unsigned angle between the two headings.
double component_distance(const SWND& d, ActionVelocity a);

// Sum_j beta_j * component_distance(j, a).
double mixture_distance(const SWGMM& model, ActionVelocity a);

// Unnormalised flow cost of a move action. gamma <= 0 yields 0.
double flow_cost_raw(Action a, const SWGMM& model, int gamma, const FlowCostConfig& cfg = {});
double flow_cost_raw(ActionVelocity a, const SWGMM& model, int gamma,
                     const FlowCostConfig& cfg = {});

// Mean of the four move costs evaluated with zero speed.
double wait_cost(const SWGMM& model, int gamma, const FlowCostConfig& cfg = {});

// Min-max scaling to [0,1]; all-equal input maps to zeros.
std::vector<double> normalize_costs(std::span<const double> raw);

// Directed, weighted transition structure over the passable cells of a grid. Every (v, a)
// admitted by neighbors() has exactly one edge; weight = step_cost + normalised flow cost of
// the source vertex.
class GuidanceGraph {
 public:
  // Uniform graph: every edge costs step_cost.
  GuidanceGraph(const GridMap& map, double step_cost);

  const GridMap& map() const { return map_; }
  int size() const { return map_.size(); }
  double step_cost() const { return step_cost_; }

  // -1 when the action is not available at v.
  int target(int v, Action a) const {
    return targets_[static_cast<std::size_t>(v)][static_cast<std::size_t>(action_index(a))];
  }
  bool has_edge(int v, Action a) const { return target(v, a) >= 0; }
  double weight(int v, Action a) const {
    return weights_[static_cast<std::size_t>(v)][static_cast<std::size_t>(action_index(a))];
  }
  double flow_cost(int v, Action a) const { return weight(v, a) - step_cost_; }
  double raw_flow_cost(int v, Action a) const {
    return raw_[static_cast<std::size_t>(v)][static_cast<std::size_t>(action_index(a))];
  }

  // Largest realised (omega_e - g_s) / g_s over all edges.
  double max_flow_ratio() const;
  // True when every edge weight equals the step cost.
  bool is_uniform() const;

 private:
  friend GuidanceGraph build_guidance_graph(const GridMap&, const CliffMap&, double,
                                            const FlowCostConfig&);

  GridMap map_;
  double step_cost_;
  std::vector<std::array<int, 5>> targets_;
  std::vector<std::array<double, 5>> weights_;
  std::vector<std::array<double, 5>> raw_;
};

// Cells without a model contribute a raw flow cost of 0 before normalisation. Throws
// std::invalid_argument when step_cost <= 0 or the CliffMap does not match the map.
GuidanceGraph build_guidance_graph(const GridMap& map, const CliffMap& cliff, double step_cost,
                                   const FlowCostConfig& cfg = {});

struct GuidanceRow {
  int x;
  int y;
  Action action;
  double omega;
};

std::vector<GuidanceRow> guidance_rows(const GuidanceGraph& gg);
std::string guidance_csv(const GuidanceGraph& gg);
nlohmann::json guidance_json(const GuidanceGraph& gg);

}  // namespace famapf
