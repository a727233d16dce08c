#include "famapf/guidance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace famapf {

ActionVelocity action_velocity(Action a) {
  constexpr double pi = std::numbers::pi;
  switch (a) {
    case Action::Right: return {0.0, 1.0};
    case Action::Up: return {pi / 2.0, 1.0};
    case Action::Left: return {pi, 1.0};
    case Action::Down: return {3.0 * pi / 2.0, 1.0};
    case Action::Wait: break;
  }
  throw std::invalid_argument("wait action has no heading");
}

double component_distance(const SWND& d, ActionVelocity a) {
  const double dtheta = std::abs(angle_diff(d.mu_theta, a.theta));
  const double drho = d.mu_rho - a.rho;
  return std::sqrt(d.sigma.mahalanobis_sq(dtheta, drho));
}

double mixture_distance(const SWGMM& model, ActionVelocity a) {
  double sum = 0.0;
  for (const auto& c : model.components) sum += c.beta * component_distance(c.dist, a);
  return sum;
}

double flow_cost_raw(ActionVelocity a, const SWGMM& model, int gamma, const FlowCostConfig& cfg) {
  if (gamma <= 0) return 0.0;
  const double dist = mixture_distance(model, a);
  switch (cfg.grouping) {
    case LogGrouping::scale_sum:
      return std::log(static_cast<double>(gamma)) * dist;
    case LogGrouping::log_of_product:
      return dist > 0.0 ? std::max(0.0, std::log(gamma * dist)) : 0.0;
  }
  return 0.0;
}

double flow_cost_raw(Action a, const SWGMM& model, int gamma, const FlowCostConfig& cfg) {
  return flow_cost_raw(action_velocity(a), model, gamma, cfg);
}

double wait_cost(const SWGMM& model, int gamma, const FlowCostConfig& cfg) {
  double sum = 0.0;
  for (Action a : kMoveActions) {
    ActionVelocity v = action_velocity(a);
    v.rho = 0.0;
    sum += flow_cost_raw(v, model, gamma, cfg);
  }
  return sum / 4.0;
}

std::vector<double> normalize_costs(std::span<const double> raw) {
  std::vector<double> out(raw.size(), 0.0);
  if (raw.empty()) return out;
  const auto [lo, hi] = std::minmax_element(raw.begin(), raw.end());
  const double range = *hi - *lo;
  if (!(range > 0.0)) return out;
  for (std::size_t i = 0; i < raw.size(); ++i) out[i] = (raw[i] - *lo) / range;
  // guard the endpoints against rounding so min is exactly 0 and max exactly 1
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] == *hi) out[i] = 1.0;
    if (raw[i] == *lo) out[i] = 0.0;
  }
  return out;
}

GuidanceGraph::GuidanceGraph(const GridMap& map, double step_cost)
    : map_(map), step_cost_(step_cost) {
  if (!(step_cost > 0.0)) throw std::invalid_argument("step cost must be positive");
  const auto n = static_cast<std::size_t>(map.size());
  targets_.assign(n, {-1, -1, -1, -1, -1});
  weights_.assign(n, {0, 0, 0, 0, 0});
  raw_.assign(n, {0, 0, 0, 0, 0});
  for (int v = 0; v < map.size(); ++v) {
    if (!map.passable(v)) continue;
    for (const auto& tr : neighbors(map, map.vertex(v))) {
      const auto ai = static_cast<std::size_t>(action_index(tr.action));
      targets_[static_cast<std::size_t>(v)][ai] = map.index(tr.target);
      weights_[static_cast<std::size_t>(v)][ai] = step_cost;
    }
  }
}

double GuidanceGraph::max_flow_ratio() const {
  double best = 0.0;
  for (int v = 0; v < size(); ++v) {
    for (Action a : kAllActions) {
      if (has_edge(v, a)) best = std::max(best, (weight(v, a) - step_cost_) / step_cost_);
    }
  }
  return best;
}

bool GuidanceGraph::is_uniform() const {
  for (int v = 0; v < size(); ++v) {
    for (Action a : kAllActions) {
      if (has_edge(v, a) && weight(v, a) != step_cost_) return false;
    }
  }
  return true;
}

GuidanceGraph build_guidance_graph(const GridMap& map, const CliffMap& cliff, double step_cost,
                                   const FlowCostConfig& cfg) {
  GuidanceGraph gg(map, step_cost);
  if (cliff.width != map.width() || cliff.height != map.height()) {
    throw std::invalid_argument("CliffMap dimensions do not match the map");
  }

  // Pool every transition of the map (moves and waits) for one global min-max.
  std::vector<double> pool;
  std::vector<std::pair<int, int>> slots;  // (vertex, action index)
  for (int v = 0; v < map.size(); ++v) {
    if (!map.passable(v)) continue;
    const CliffCell& cell = cliff.at(v);
    for (Action a : kAllActions) {
      if (!gg.has_edge(v, a)) continue;
      double raw = 0.0;
      if (cell.model && cell.gamma > 0) {
        raw = a == Action::Wait ? wait_cost(*cell.model, cell.gamma, cfg)
                                : flow_cost_raw(a, *cell.model, cell.gamma, cfg);
      }
      gg.raw_[static_cast<std::size_t>(v)][static_cast<std::size_t>(action_index(a))] = raw;
      pool.push_back(raw);
      slots.emplace_back(v, action_index(a));
    }
  }
  const auto norm = normalize_costs(pool);
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const auto [v, ai] = slots[i];
    gg.weights_[static_cast<std::size_t>(v)][static_cast<std::size_t>(ai)] = step_cost + norm[i];
  }
  return gg;
}

std::vector<GuidanceRow> guidance_rows(const GuidanceGraph& gg) {
  std::vector<GuidanceRow> rows;
  for (int v = 0; v < gg.size(); ++v) {
    const Vertex p = gg.map().vertex(v);
    for (Action a : kAllActions) {
      if (gg.has_edge(v, a)) rows.push_back({p.x, p.y, a, gg.weight(v, a)});
    }
  }
  return rows;
}

std::string guidance_csv(const GuidanceGraph& gg) {
  std::ostringstream out;
  out.precision(17);
  out << "x,y,action,omega\n";
  for (const auto& r : guidance_rows(gg)) {
    out << r.x << ',' << r.y << ',' << to_string(r.action) << ',' << r.omega << '\n';
  }
  return out.str();
}

nlohmann::json guidance_json(const GuidanceGraph& gg) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : guidance_rows(gg)) {
    rows.push_back({{"x", r.x}, {"y", r.y}, {"action", to_string(r.action)}, {"omega", r.omega}});
  }
  return {{"map_name", gg.map().name()},
          {"width", gg.map().width()},
          {"height", gg.map().height()},
          {"step_cost", gg.step_cost()},
          {"edges", rows}};
}

}  // namespace famapf
