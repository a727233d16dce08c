#include "famapf/uasim.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <json.hpp>
#include <queue>
#include <stdexcept>

#include "famapf/rng.hpp"

namespace famapf {

std::string to_string(MovementType m) {
  switch (m) {
    case MovementType::random: return "random";
    case MovementType::directed: return "directed";
    case MovementType::speed: return "speed";
  }
  return "random";
}

MovementType parse_movement_type(const std::string& s) {
  if (s == "random") return MovementType::random;
  if (s == "directed") return MovementType::directed;
  if (s == "speed") return MovementType::speed;
  throw std::invalid_argument("unknown movement_type '" + s + "'");
}

StreamMode parse_stream_mode(const std::string& s) {
  if (s == "oneshot") return StreamMode::oneshot;
  if (s == "lifelong") return StreamMode::lifelong;
  throw std::invalid_argument("unknown stream mode '" + s + "'");
}

void UAConfig::validate(const GridMap& map) const {
  if (!(base_speed > 0.0)) throw std::invalid_argument("base_speed must be positive");
  bool any_start = false;
  bool any_goal = false;
  for (const UAArea& a : areas) {
    if (a.x0 > a.x1 || a.y0 > a.y1 || a.x0 < 0 || a.y0 < 0 || a.x1 >= map.width() ||
        a.y1 >= map.height()) {
      throw std::invalid_argument("area '" + a.name + "' is outside the map");
    }
    if (!(a.speed_multiplier > 0.0)) {
      throw std::invalid_argument("area '" + a.name + "' needs a positive speed multiplier");
    }
    if (!(a.weight > 0.0)) throw std::invalid_argument("area '" + a.name + "' needs a positive weight");
    bool passable = false;
    for (int y = a.y0; y <= a.y1 && !passable; ++y) {
      for (int x = a.x0; x <= a.x1 && !passable; ++x) passable = map.passable(Vertex{x, y});
    }
    if (!passable) throw std::invalid_argument("area '" + a.name + "' has no passable cell");
    (a.role == AreaRole::start ? any_start : any_goal) = true;
    for (const std::string& g : a.goals) {
      const bool known = std::any_of(areas.begin(), areas.end(), [&](const UAArea& b) {
        return b.role == AreaRole::goal && b.name == g;
      });
      if (!known) throw std::invalid_argument("area '" + a.name + "' pairs unknown goal area '" + g + "'");
    }
  }
  if (movement_type != MovementType::random && (!any_start || !any_goal)) {
    throw std::invalid_argument(to_string(movement_type) + " regime needs start and goal areas");
  }
}

UAConfig ua_config_from_json(const nlohmann::json& j) {
  try {
    UAConfig c;
    c.movement_type = parse_movement_type(j.value("movement_type", std::string("random")));
    c.base_speed = j.value("base_speed", 1.0);
    c.seed = j.value("seed", std::uint64_t{0});
    const std::string conn = j.value("connectivity", std::string("eight"));
    if (conn == "eight") {
      c.connectivity = UAConnectivity::eight;
    } else if (conn == "four") {
      c.connectivity = UAConnectivity::four;
    } else {
      throw std::invalid_argument("unknown connectivity '" + conn + "'");
    }
    for (const auto& a : j.value("areas", nlohmann::json::array())) {
      UAArea area;
      area.name = a.at("name").get<std::string>();
      area.x0 = a.at("x0").get<int>();
      area.y0 = a.at("y0").get<int>();
      area.x1 = a.at("x1").get<int>();
      area.y1 = a.at("y1").get<int>();
      const std::string role = a.at("role").get<std::string>();
      if (role != "start" && role != "goal") {
        throw std::invalid_argument("area role must be start or goal, got '" + role + "'");
      }
      area.role = role == "start" ? AreaRole::start : AreaRole::goal;
      area.weight = a.value("weight", 1.0);
      area.speed_multiplier = a.value("speed_multiplier", 1.0);
      area.goals = a.value("goals", std::vector<std::string>{});
      c.areas.push_back(std::move(area));
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad UA config: ") + e.what());
  }
}

nlohmann::json ua_config_to_json(const UAConfig& c) {
  nlohmann::json areas = nlohmann::json::array();
  for (const UAArea& a : c.areas) {
    nlohmann::json j{{"name", a.name},   {"x0", a.x0},
                     {"y0", a.y0},       {"x1", a.x1},
                     {"y1", a.y1},       {"role", a.role == AreaRole::start ? "start" : "goal"},
                     {"weight", a.weight}, {"speed_multiplier", a.speed_multiplier}};
    if (!a.goals.empty()) j["goals"] = a.goals;
    areas.push_back(std::move(j));
  }
  return {{"movement_type", to_string(c.movement_type)},
          {"base_speed", c.base_speed},
          {"connectivity", c.connectivity == UAConnectivity::eight ? "eight" : "four"},
          {"seed", c.seed},
          {"areas", areas}};
}

UAConfig load_ua_config(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
  return ua_config_from_json(j);
}

Point UATrajectory::at(double t) const {
  if (t <= waypoints.front().t) return {waypoints.front().x, waypoints.front().y};
  if (t >= waypoints.back().t) return {waypoints.back().x, waypoints.back().y};
  const auto it = std::upper_bound(waypoints.begin(), waypoints.end(), t,
                                   [](double v, const TrajectorySample& s) { return v < s.t; });
  const TrajectorySample& b = *it;
  const TrajectorySample& a = *(it - 1);
  const double s = (t - a.t) / (b.t - a.t);
  return {a.x + s * (b.x - a.x), a.y + s * (b.y - a.y)};
}

UATrajectory plan_ua_path(const GridMap& map, Vertex start, Vertex goal, double speed,
                          UAConnectivity connectivity, double t0) {
  if (!map.passable(start) || !map.passable(goal)) {
    throw std::invalid_argument("UA start and goal must be passable");
  }
  if (!(speed > 0.0)) throw std::invalid_argument("UA speed must be positive");
  static constexpr int kDx[8] = {1, 0, -1, 0, 1, -1, -1, 1};
  static constexpr int kDy[8] = {0, -1, 0, 1, -1, -1, 1, 1};
  const int moves = connectivity == UAConnectivity::eight ? 8 : 4;
  const int s = map.index(start);
  const int g = map.index(goal);
  std::vector<double> dist(static_cast<std::size_t>(map.size()), std::numeric_limits<double>::infinity());
  std::vector<int> parent(static_cast<std::size_t>(map.size()), -1);
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  dist[static_cast<std::size_t>(s)] = 0.0;
  open.emplace(0.0, s);
  while (!open.empty()) {
    const auto [d, v] = open.top();
    open.pop();
    if (d > dist[static_cast<std::size_t>(v)]) continue;
    if (v == g) break;
    const Vertex pv = map.vertex(v);
    for (int m = 0; m < moves; ++m) {
      const Vertex pu{pv.x + kDx[m], pv.y + kDy[m]};
      if (!map.passable(pu)) continue;
      const bool diagonal = kDx[m] != 0 && kDy[m] != 0;
      if (diagonal && (!map.passable(Vertex{pv.x + kDx[m], pv.y}) ||
                       !map.passable(Vertex{pv.x, pv.y + kDy[m]}))) {
        continue;
      }
      const int u = map.index(pu);
      const double nd = d + (diagonal ? std::sqrt(2.0) : 1.0);
      if (nd < dist[static_cast<std::size_t>(u)]) {
        dist[static_cast<std::size_t>(u)] = nd;
        parent[static_cast<std::size_t>(u)] = v;
        open.emplace(nd, u);
      }
    }
  }
  if (dist[static_cast<std::size_t>(g)] == std::numeric_limits<double>::infinity()) {
    throw std::runtime_error("UA goal is unreachable");
  }
  std::vector<int> cells;
  for (int v = g; v != -1; v = parent[static_cast<std::size_t>(v)]) cells.push_back(v);
  std::reverse(cells.begin(), cells.end());
  UATrajectory traj;
  double elapsed = 0.0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const Point c = vertex_to_world(map, map.vertex(cells[i]));
    if (i > 0) {
      const TrajectorySample& prev = traj.waypoints.back();
      elapsed += std::hypot(c.x - prev.x, c.y - prev.y) / speed;
    }
    traj.waypoints.push_back({t0 + elapsed, c.x, c.y});
  }
  return traj;
}

namespace {

std::vector<int> component_labels(const GridMap& map) {
  std::vector<int> label(static_cast<std::size_t>(map.size()), -1);
  int next = 0;
  for (int v : map.passable_indices()) {
    if (label[static_cast<std::size_t>(v)] >= 0) continue;
    std::vector<int> stack{v};
    label[static_cast<std::size_t>(v)] = next;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (const Transition& tr : neighbors(map, map.vertex(u))) {
        const int w = map.index(tr.target);
        if (label[static_cast<std::size_t>(w)] < 0) {
          label[static_cast<std::size_t>(w)] = next;
          stack.push_back(w);
        }
      }
    }
    ++next;
  }
  return label;
}

std::vector<int> area_cells(const GridMap& map, const UAArea& a) {
  std::vector<int> out;
  for (int y = a.y0; y <= a.y1; ++y) {
    for (int x = a.x0; x <= a.x1; ++x) {
      if (map.passable(Vertex{x, y})) out.push_back(map.index(Vertex{x, y}));
    }
  }
  return out;
}

class Sampler {
 public:
  Sampler(const GridMap& map, const UAConfig& cfg)
      : map_(map), cfg_(cfg), labels_(component_labels(map)), cells_(map.passable_indices()) {
    cfg.validate(map);
    for (std::size_t i = 0; i < cfg.areas.size(); ++i) {
      area_cells_.push_back(area_cells(map, cfg.areas[i]));
      (cfg.areas[i].role == AreaRole::start ? starts_ : goals_).push_back(static_cast<int>(i));
    }
  }

  UATrajectory draw(Rng& rng, double t0) {
    for (int attempt = 0; attempt < 10000; ++attempt) {
      int s = 0;
      int g = 0;
      double speed = cfg_.base_speed;
      if (cfg_.movement_type == MovementType::random) {
        s = pick(rng, cells_);
        g = pick(rng, cells_);
      } else {
        const int sa = pick_area(rng, starts_);
        const UAArea& start_area = cfg_.areas[static_cast<std::size_t>(sa)];
        std::vector<int> candidates;
        for (int ga : goals_) {
          const auto& names = start_area.goals;
          if (names.empty() ||
              std::find(names.begin(), names.end(), cfg_.areas[static_cast<std::size_t>(ga)].name) !=
                  names.end()) {
            candidates.push_back(ga);
          }
        }
        const int ga = pick_area(rng, candidates);
        s = pick(rng, area_cells_[static_cast<std::size_t>(sa)]);
        g = pick(rng, area_cells_[static_cast<std::size_t>(ga)]);
        speed *= start_area.speed_multiplier;
      }
      if (s == g || labels_[static_cast<std::size_t>(s)] != labels_[static_cast<std::size_t>(g)]) continue;
      return plan_ua_path(map_, map_.vertex(s), map_.vertex(g), speed, cfg_.connectivity, t0);
    }
    throw std::runtime_error("could not sample a reachable UA start/goal pair");
  }

 private:
  static int pick(Rng& rng, const std::vector<int>& v) {
    return v[static_cast<std::size_t>(rng.below(static_cast<int>(v.size())))];
  }
  int pick_area(Rng& rng, const std::vector<int>& ids) const {
    std::vector<double> w;
    for (int i : ids) w.push_back(cfg_.areas[static_cast<std::size_t>(i)].weight);
    const int k = rng.weighted(w);
    if (k < 0) throw std::invalid_argument("no area available to sample from");
    return ids[static_cast<std::size_t>(k)];
  }

  const GridMap& map_;
  const UAConfig& cfg_;
  std::vector<int> labels_;
  std::vector<int> cells_;
  std::vector<std::vector<int>> area_cells_;
  std::vector<int> starts_;
  std::vector<int> goals_;
};

}  // namespace

std::vector<UATrajectory> generate_dataset(const GridMap& map, const UAConfig& cfg, int n) {
  if (n < 1) throw std::invalid_argument("dataset size must be at least 1");
  Sampler sampler(map, cfg);
  Rng rng(cfg.seed, 0xDA7A);
  std::vector<UATrajectory> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    out.push_back(sampler.draw(rng, 0.0));
    out.back().id = i;
  }
  return out;
}

std::vector<UATrajectory> generate_stream(const GridMap& map, const UAConfig& cfg, StreamMode mode,
                                          int sim_time) {
  Sampler sampler(map, cfg);
  Rng rng(cfg.seed, 0x57EA);
  std::vector<UATrajectory> out;
  const int count = mode == StreamMode::oneshot ? kOneshotUACount : std::max(0, sim_time);
  for (int i = 0; i < count; ++i) {
    const int spawn = mode == StreamMode::oneshot ? 0 : i;
    out.push_back(sampler.draw(rng, spawn));
    out.back().id = i;
    out.back().spawn_time = spawn;
  }
  return out;
}

TrajectoryDataset to_dataset(std::span<const UATrajectory> uas) {
  TrajectoryDataset d;
  for (const UATrajectory& u : uas) d.push_back({std::to_string(u.id), u.waypoints});
  return d;
}

std::vector<UATrajectory> from_dataset(const TrajectoryDataset& d) {
  std::vector<UATrajectory> out;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i].samples.empty()) continue;
    UATrajectory u;
    try {
      u.id = std::stoi(d[i].id);
    } catch (const std::exception&) {
      u.id = static_cast<int>(i);
    }
    u.waypoints = d[i].samples;
    u.spawn_time = static_cast<int>(std::floor(u.waypoints.front().t));
    out.push_back(std::move(u));
  }
  return out;
}

}  // namespace famapf
