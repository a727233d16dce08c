#include "famapf/cliffmap.hpp"

#include <cstdint>
#include <cstring>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "famapf/rng.hpp"

namespace famapf {

namespace {

std::optional<SWGMM> fit_cell(const std::vector<VelocitySample>& obs, const FitConfig& cfg,
                              int idx, bool& failed) {
  failed = false;
  if (static_cast<int>(obs.size()) < cfg.min_observations || obs.empty()) return std::nullopt;
  FitConfig cell_cfg = cfg;
  cell_cfg.seed = Rng::mix(cfg.seed, static_cast<std::uint64_t>(idx));
  try {
    auto g = fit_swgmm(obs, cell_cfg);
    if (!g) failed = true;
    return g;
  } catch (const std::exception&) {
    failed = true;
    return std::nullopt;
  }
}

}  // namespace

nlohmann::json fit_config_to_json(const FitConfig& c) {
  return {{"min_observations", c.min_observations}, {"max_components", c.max_components},
          {"min_variance", c.min_variance},         {"max_iterations", c.max_iterations},
          {"tolerance", c.tolerance},               {"winding_terms", c.winding_terms},
          {"seed", c.seed}};
}

FitConfig fit_config_from_json(const nlohmann::json& j) {
  FitConfig c;
  c.min_observations = j.value("min_observations", c.min_observations);
  c.max_components = j.value("max_components", c.max_components);
  c.min_variance = j.value("min_variance", c.min_variance);
  c.max_iterations = j.value("max_iterations", c.max_iterations);
  c.tolerance = j.value("tolerance", c.tolerance);
  c.winding_terms = j.value("winding_terms", c.winding_terms);
  c.seed = j.value("seed", c.seed);
  return c;
}

CliffMap CliffMap::empty(const GridMap& map) {
  CliffMap m;
  m.width = map.width();
  m.height = map.height();
  m.resolution = map.resolution();
  m.map_name = map.name();
  m.cells.resize(static_cast<std::size_t>(map.size()));
  return m;
}

int CliffMap::modeled_cells() const {
  int n = 0;
  for (const auto& c : cells) n += c.model ? 1 : 0;
  return n;
}

std::string hash_observations(const CellObservations& binned) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 0x100000001b3ULL;
    }
  };
  feed(&binned.width, sizeof binned.width);
  feed(&binned.height, sizeof binned.height);
  for (const auto& cell : binned.cells) {
    const auto n = static_cast<std::uint64_t>(cell.size());
    feed(&n, sizeof n);
    for (const auto& u : cell) {
      feed(&u.theta, sizeof u.theta);
      feed(&u.rho, sizeof u.rho);
    }
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

CliffMap build_cliffmap(const GridMap& map, const CellObservations& binned, const FitConfig& cfg,
                        Execution exec, CliffBuildReport* report) {
  if (binned.width != map.width() || binned.height != map.height()) {
    throw std::invalid_argument("binned observations do not match the map dimensions");
  }
  CliffMap m = CliffMap::empty(map);
  m.fit_config = cfg;
  m.dataset_hash = hash_observations(binned);

  const int n = map.size();
  std::vector<std::uint8_t> failed(static_cast<std::size_t>(n), 0);
  auto body = [&](int idx) {
    auto& cell = m.cells[static_cast<std::size_t>(idx)];
    const auto& obs = binned.cells[static_cast<std::size_t>(idx)];
    cell.gamma = static_cast<int>(obs.size());
    bool f = false;
    cell.model = fit_cell(obs, cfg, idx, f);
    failed[static_cast<std::size_t>(idx)] = f ? 1 : 0;
  };
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 4)
    for (int idx = 0; idx < n; ++idx) body(idx);
  } else {
    for (int idx = 0; idx < n; ++idx) body(idx);
  }

  CliffBuildReport r;
  for (int idx = 0; idx < n; ++idx) {
    const auto& cell = m.cells[static_cast<std::size_t>(idx)];
    if (cell.model) ++r.fitted;
    if (failed[static_cast<std::size_t>(idx)]) ++r.failed;
    if (cell.gamma > 0 && cell.gamma < cfg.min_observations) ++r.below_threshold;
  }
  m.coverage = static_cast<double>(r.fitted) / map.passable_count();
  if (report) *report = r;
  return m;
}

nlohmann::json cliffmap_to_json(const CliffMap& m) {
  nlohmann::json cells = nlohmann::json::array();
  for (int idx = 0; idx < static_cast<int>(m.cells.size()); ++idx) {
    const auto& c = m.cells[static_cast<std::size_t>(idx)];
    if (c.gamma == 0 && !c.model) continue;
    nlohmann::json comps = nlohmann::json::array();
    if (c.model) {
      for (const auto& k : c.model->components) {
        comps.push_back({{"beta", k.beta},
                         {"mu_theta", k.dist.mu_theta},
                         {"mu_rho", k.dist.mu_rho},
                         {"sigma", {k.dist.sigma.s11, k.dist.sigma.s12, k.dist.sigma.s22}}});
      }
    }
    cells.push_back({{"x", idx % m.width}, {"y", idx / m.width}, {"gamma", c.gamma},
                     {"components", comps}});
  }
  return {{"schema_version", kCliffSchemaVersion},
          {"map_name", m.map_name},
          {"width", m.width},
          {"height", m.height},
          {"resolution", m.resolution},
          {"cells", cells},
          {"fit_config", fit_config_to_json(m.fit_config)},
          {"dataset_hash", m.dataset_hash},
          {"coverage", m.coverage}};
}

CliffMap cliffmap_from_json(const nlohmann::json& doc) {
  try {
    const int version = doc.at("schema_version").get<int>();
    if (version != kCliffSchemaVersion) {
      throw std::invalid_argument("unsupported CliffMap schema_version " + std::to_string(version));
    }
    CliffMap m;
    m.width = doc.at("width").get<int>();
    m.height = doc.at("height").get<int>();
    if (m.width < 1 || m.height < 1) throw std::invalid_argument("CliffMap dimensions must be positive");
    m.resolution = doc.value("resolution", 1.0);
    m.map_name = doc.value("map_name", std::string{});
    m.dataset_hash = doc.value("dataset_hash", std::string{});
    m.coverage = doc.value("coverage", 0.0);
    if (doc.contains("fit_config")) m.fit_config = fit_config_from_json(doc.at("fit_config"));
    m.cells.resize(static_cast<std::size_t>(m.width) * m.height);
    for (const auto& jc : doc.at("cells")) {
      const int x = jc.at("x").get<int>();
      const int y = jc.at("y").get<int>();
      if (x < 0 || y < 0 || x >= m.width || y >= m.height) {
        throw std::invalid_argument("CliffMap cell outside map bounds");
      }
      auto& cell = m.cells[static_cast<std::size_t>(y) * m.width + x];
      cell.gamma = jc.at("gamma").get<int>();
      if (cell.gamma < 0) throw std::invalid_argument("negative gamma");
      const auto& comps = jc.at("components");
      if (comps.empty()) continue;
      if (cell.gamma < 1) throw std::invalid_argument("model on a cell with gamma < 1");
      SWGMM g;
      for (const auto& k : comps) {
        MixtureComponent mc;
        mc.beta = k.at("beta").get<double>();
        mc.dist.mu_theta = k.at("mu_theta").get<double>();
        mc.dist.mu_rho = k.at("mu_rho").get<double>();
        const auto& s = k.at("sigma");
        if (s.size() != 3) throw std::invalid_argument("sigma must be [s11, s12, s22]");
        mc.dist.sigma = {s[0].get<double>(), s[1].get<double>(), s[2].get<double>()};
        g.components.push_back(mc);
      }
      g.validate();
      cell.model = std::move(g);
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed CliffMap document: ") + e.what());
  }
}

std::string save_cliffmap(const CliffMap& m) { return cliffmap_to_json(m).dump(1) + "\n"; }

CliffMap load_cliffmap(std::string_view document) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(document);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("CliffMap is not valid JSON: ") + e.what());
  }
  return cliffmap_from_json(doc);
}

}  // namespace famapf
