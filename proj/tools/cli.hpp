#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "famapf/paths.hpp"
#include "famapf/uasim.hpp"
#include "famapf/world.hpp"

namespace famapf::cli {

inline constexpr const char* kOutputRootEnv = "FAMAPF_OUTPUT_ROOT";

// Runs one subcommand; args exclude the program name. Returns the process exit code:
// 0 success, 1 runtime failure, 2 configuration or parse error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

nlohmann::json solution_to_json(const GridMap& map, const Solution& s, const std::string& status);
std::vector<TimedPath> paths_from_solution_json(const nlohmann::json& j, const GridMap& map);
nlohmann::json conflict_report_json(const ConflictReport& r, double radius_agent, double radius_ua);

}  // namespace famapf::cli
