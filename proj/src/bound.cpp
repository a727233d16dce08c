#include "famapf/bound.hpp"

#include <stdexcept>

namespace famapf {

BoundReport verify_suboptimality_bound(const Solution& solution, double omega1, double omega2,
                                       const std::vector<double>& shortest_lengths) {
  if (omega1 < 1.0) throw std::invalid_argument("omega1 must be at least 1");
  if (shortest_lengths.size() < solution.paths.size()) {
    throw std::invalid_argument("missing shortest length for agent " +
                                std::to_string(shortest_lengths.size()));
  }
  const double factor = omega1 + omega1 * omega2;
  BoundReport r;
  for (std::size_t i = 0; i < solution.paths.size(); ++i) {
    AgentBound a;
    a.cost = solution.paths[i].cost;
    a.shortest = shortest_lengths[i];
    a.bound = factor * a.shortest;
    a.slack = a.bound - a.cost;
    r.total_cost += a.cost;
    r.total_bound += a.bound;
    r.agents.push_back(a);
  }
  r.slack = r.total_bound - r.total_cost;
  r.holds = r.total_cost <= r.total_bound + 1e-9 * (1.0 + r.total_bound);
  return r;
}

}  // namespace famapf
