#include "famapf/world.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace famapf {

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    pos = end + 1;
  }
  return lines;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

int parse_int(std::string_view s, int line, int column, const char* what) {
  s = trim(s);
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ParseError(std::string("expected integer ") + what + ", got '" + std::string(s) + "'",
                     line, column);
  }
  return value;
}

// "key value" header line.
int header_value(const std::vector<std::string_view>& lines, std::size_t i, std::string_view key) {
  const int line_no = static_cast<int>(i) + 1;
  if (i >= lines.size()) throw ParseError("missing '" + std::string(key) + "' header", line_no, 1);
  std::string_view line = trim(lines[i]);
  if (line.substr(0, key.size()) != key || line.size() <= key.size() ||
      (line[key.size()] != ' ' && line[key.size()] != '\t')) {
    throw ParseError("expected '" + std::string(key) + " <n>', got '" + std::string(line) + "'",
                     line_no, 1);
  }
  return parse_int(line.substr(key.size()), line_no, static_cast<int>(key.size()) + 2,
                   key.data());
}

}  // namespace

std::string_view to_string(Action a) {
  switch (a) {
    case Action::Right: return "right";
    case Action::Up: return "up";
    case Action::Left: return "left";
    case Action::Down: return "down";
    case Action::Wait: return "wait";
  }
  return "?";
}

std::optional<Action> parse_action(std::string_view name) {
  for (Action a : kAllActions) {
    if (to_string(a) == name) return a;
  }
  return std::nullopt;
}

Action reverse(Action a) {
  switch (a) {
    case Action::Right: return Action::Left;
    case Action::Up: return Action::Down;
    case Action::Left: return Action::Right;
    case Action::Down: return Action::Up;
    case Action::Wait: return Action::Wait;
  }
  return Action::Wait;
}

Vertex step(Vertex v, Action a) {
  switch (a) {
    case Action::Right: return {v.x + 1, v.y};
    case Action::Up: return {v.x, v.y - 1};
    case Action::Left: return {v.x - 1, v.y};
    case Action::Down: return {v.x, v.y + 1};
    case Action::Wait: return v;
  }
  return v;
}

ParseError::ParseError(const std::string& what, int line, int column)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ", column " +
                                        std::to_string(column) + ": " + what
                                  : what),
      line_(line),
      column_(column) {}

GridMap::GridMap(int width, int height, std::vector<std::uint8_t> passable, std::string name)
    : width_(width), height_(height), passable_(std::move(passable)), name_(std::move(name)) {
  if (width_ < 1 || height_ < 1) throw std::invalid_argument("map dimensions must be positive");
  if (passable_.size() != static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_)) {
    throw std::invalid_argument("passability matrix does not match map dimensions");
  }
  for (auto p : passable_) passable_count_ += p != 0 ? 1 : 0;
  if (passable_count_ == 0) throw std::invalid_argument("no passable cells");
}

std::vector<int> GridMap::passable_indices() const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(passable_count_));
  for (int i = 0; i < size(); ++i) {
    if (passable(i)) out.push_back(i);
  }
  return out;
}

GridMap parse_map(std::string_view text, std::string name) {
  const auto lines = split_lines(text);
  if (lines.empty() || trim(lines[0]) != "type octile") {
    throw ParseError("expected 'type octile' header", 1, 1);
  }
  const int height = header_value(lines, 1, "height");
  const int width = header_value(lines, 2, "width");
  if (height < 1 || width < 1) throw ParseError("map dimensions must be positive", 2, 1);
  if (lines.size() < 4 || trim(lines[3]) != "map") throw ParseError("expected 'map' line", 4, 1);

  std::vector<std::uint8_t> passable(static_cast<std::size_t>(width) * height, 0);
  for (int y = 0; y < height; ++y) {
    const std::size_t li = 4 + static_cast<std::size_t>(y);
    const int line_no = static_cast<int>(li) + 1;
    if (li >= lines.size()) {
      throw ParseError("map body has " + std::to_string(y) + " rows, header says " +
                           std::to_string(height),
                       line_no, 1);
    }
    const std::string_view row = lines[li];
    if (static_cast<int>(row.size()) != width) {
      throw ParseError("row has " + std::to_string(row.size()) + " cells, header says " +
                           std::to_string(width),
                       line_no, static_cast<int>(std::min<std::size_t>(row.size(), width)) + 1);
    }
    for (int x = 0; x < width; ++x) {
      const char c = row[static_cast<std::size_t>(x)];
      switch (c) {
        case '.':
        case 'G':
          passable[static_cast<std::size_t>(y) * width + x] = 1;
          break;
        case '@':
        case 'O':
        case 'T':
        case 'W':
        case 'S':
          break;
        default:
          throw ParseError(std::string("unknown cell character '") + c + "'", line_no, x + 1);
      }
    }
  }
  for (std::size_t li = 4 + static_cast<std::size_t>(height); li < lines.size(); ++li) {
    if (!trim(lines[li]).empty()) {
      throw ParseError("extra rows after map body", static_cast<int>(li) + 1, 1);
    }
  }
  return GridMap(width, height, std::move(passable), std::move(name));
}

std::string serialize_map(const GridMap& map) {
  std::string out = "type octile\nheight " + std::to_string(map.height()) + "\nwidth " +
                    std::to_string(map.width()) + "\nmap\n";
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) out += map.passable(Vertex{x, y}) ? '.' : '@';
    out += '\n';
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

GridMap load_map_file(const std::filesystem::path& path) {
  return parse_map(read_text_file(path), path.stem().string());
}

Scenario parse_scen(std::string_view text, int n, const GridMap& map) {
  const auto lines = split_lines(text);
  if (lines.empty() || trim(lines[0]).substr(0, 7) != "version") {
    throw ParseError("missing 'version' header", 1, 1);
  }
  if (n < 0) throw std::invalid_argument("agent count must be non-negative");

  Scenario scen;
  std::set<Vertex> starts;
  std::set<Vertex> goals;
  for (std::size_t li = 1; li < lines.size() && static_cast<int>(scen.agents.size()) < n; ++li) {
    const int line_no = static_cast<int>(li) + 1;
    if (trim(lines[li]).empty()) continue;
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    const std::string_view line = lines[li];
    while (true) {
      const std::size_t tab = line.find('\t', pos);
      fields.push_back(line.substr(pos, tab == std::string_view::npos ? tab : tab - pos));
      if (tab == std::string_view::npos) break;
      pos = tab + 1;
    }
    if (fields.size() < 8) {
      throw ParseError("expected 9 tab-separated fields, got " + std::to_string(fields.size()),
                       line_no, 1);
    }
    auto field = [&](std::size_t i) {
      return parse_int(fields[i], line_no, static_cast<int>(i) + 1, "coordinate");
    };
    const Vertex start{field(4), field(5)};
    const Vertex goal{field(6), field(7)};
    for (const auto& [v, what] : {std::pair{start, "start"}, std::pair{goal, "goal"}}) {
      if (!map.in_bounds(v)) {
        throw ParseError(std::string(what) + " (" + std::to_string(v.x) + "," +
                             std::to_string(v.y) + ") outside map bounds",
                         line_no, 1);
      }
      if (!map.passable(v)) {
        throw ParseError(std::string(what) + " (" + std::to_string(v.x) + "," +
                             std::to_string(v.y) + ") is on a blocked cell",
                         line_no, 1);
      }
    }
    if (!starts.insert(start).second) throw ParseError("duplicate start", line_no, 1);
    if (!goals.insert(goal).second) throw ParseError("duplicate goal", line_no, 1);
    scen.agents.push_back({start, goal});
  }
  if (static_cast<int>(scen.agents.size()) < n) {
    throw std::invalid_argument("scenario has " + std::to_string(scen.agents.size()) +
                                " entries, requested " + std::to_string(n));
  }
  return scen;
}

Scenario load_scen_file(const std::filesystem::path& path, int n, const GridMap& map) {
  return parse_scen(read_text_file(path), n, map);
}

Vertex world_to_vertex(const GridMap& map, Point p) {
  const double fx = std::floor(p.x / map.resolution());
  const double fy = std::floor(p.y / map.resolution());
  if (!(fx >= 0.0 && fy >= 0.0 && fx < map.width() && fy < map.height())) {
    throw std::out_of_range("position outside map extent");
  }
  return {static_cast<int>(fx), static_cast<int>(fy)};
}

Point vertex_to_world(const GridMap& map, Vertex v) {
  return {(v.x + 0.5) * map.resolution(), (v.y + 0.5) * map.resolution()};
}

std::vector<Transition> neighbors(const GridMap& map, Vertex v) {
  if (!map.passable(v)) throw std::invalid_argument("neighbors() of a blocked vertex");
  std::vector<Transition> out;
  out.reserve(5);
  for (Action a : kMoveActions) {
    const Vertex t = step(v, a);
    if (map.passable(t)) out.push_back({a, t});
  }
  out.push_back({Action::Wait, v});
  return out;
}

}  // namespace famapf
