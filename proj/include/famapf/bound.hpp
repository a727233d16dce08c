#pragma once

#include <vector>

#include "famapf/paths.hpp"

namespace famapf {

struct AgentBound {
  double cost = 0.0;         // sum of omega_e along the path
  double shortest = 0.0;     // unit-step reference length
  double bound = 0.0;        // (omega1 + omega1 * omega2) * shortest
  double slack = 0.0;        // bound - cost
};

struct BoundReport {
  std::vector<AgentBound> agents;
  double total_cost = 0.0;
  double total_bound = 0.0;
  double slack = 0.0;
  bool holds = false;  // total_cost <= total_bound
};

// Checks sum of costs <= (omega1 + omega1 * omega2) * sum of shortest unit lengths. The
// reference lengths are per agent, in path order. Throws std::invalid_argument on a missing
// entry or omega1 < 1.
BoundReport verify_suboptimality_bound(const Solution& solution, double omega1, double omega2,
                                       const std::vector<double>& shortest_lengths);

}  // namespace famapf
