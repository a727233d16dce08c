#pragma once

#include <optional>
#include <span>
#include <vector>

#include "famapf/paths.hpp"

namespace famapf {

// All pairwise vertex and edge conflicts between paths sharing time origin 0. Agents rest at
// their last vertex after their path ends. With a horizon, only times t <= horizon are
// checked. Sorted by time, then vertex before edge, then agent pair. Agent ids are indices
// into `paths`.
std::vector<AgentConflict> detect_conflicts(std::span<const TimedPath> paths,
                                            std::optional<int> horizon = std::nullopt);

// Earliest conflict in the same order, if any.
std::optional<AgentConflict> first_conflict(std::span<const TimedPath> paths,
                                            std::optional<int> horizon = std::nullopt);

}  // namespace famapf
