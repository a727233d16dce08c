#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace famapf {

// Grid cell. x is the column, y the row; origin is the top-left cell and
// "Up" decreases y.
struct Vertex {
  int x = 0;
  int y = 0;
  auto operator<=>(const Vertex&) const = default;
};

// Metric position in the map frame (meters), same axes as Vertex.
struct Point {
  double x = 0.0;
  double y = 0.0;
};

enum class Action : std::uint8_t { Right = 0, Up = 1, Left = 2, Down = 3, Wait = 4 };

inline constexpr std::array<Action, 5> kAllActions{Action::Right, Action::Up, Action::Left,
                                                   Action::Down, Action::Wait};
inline constexpr std::array<Action, 4> kMoveActions{Action::Right, Action::Up, Action::Left,
                                                    Action::Down};

constexpr int action_index(Action a) { return static_cast<int>(a); }
std::string_view to_string(Action a);
std::optional<Action> parse_action(std::string_view name);
Action reverse(Action a);
Vertex step(Vertex v, Action a);

// Raised for malformed map/scen/trajectory/config text. line and column are 1-based; 0 when
// the problem is not tied to a position.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line = 0, int column = 0);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class GridMap {
 public:
  // Throws std::invalid_argument on non-positive dimensions, size mismatch or when no cell is
  // passable.
  GridMap(int width, int height, std::vector<std::uint8_t> passable, std::string name = {});

  int width() const { return width_; }
  int height() const { return height_; }
  int size() const { return width_ * height_; }
  double resolution() const { return 1.0; }
  const std::string& name() const { return name_; }

  bool in_bounds(Vertex v) const { return v.x >= 0 && v.y >= 0 && v.x < width_ && v.y < height_; }
  bool passable(Vertex v) const { return in_bounds(v) && passable_[index(v)] != 0; }
  bool passable(int idx) const { return passable_[static_cast<std::size_t>(idx)] != 0; }

  // Row-major linearization y * width + x.
  int index(Vertex v) const { return v.y * width_ + v.x; }
  Vertex vertex(int idx) const { return {idx % width_, idx / width_}; }

  int passable_count() const { return passable_count_; }
  std::vector<int> passable_indices() const;

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> passable_;
  std::string name_;
  int passable_count_ = 0;
};

// movingai octile map format.
GridMap parse_map(std::string_view text, std::string name = {});
std::string serialize_map(const GridMap& map);
GridMap load_map_file(const std::filesystem::path& path);

struct AgentTask {
  Vertex start;
  Vertex goal;
};

struct Scenario {
  std::vector<AgentTask> agents;
};

// movingai scen v1; the first n entries become agents in file order.
Scenario parse_scen(std::string_view text, int n, const GridMap& map);
Scenario load_scen_file(const std::filesystem::path& path, int n, const GridMap& map);

// Floor division by the resolution. Throws std::out_of_range outside the map extent.
Vertex world_to_vertex(const GridMap& map, Point p);
// Cell center.
Point vertex_to_world(const GridMap& map, Vertex v);

struct Transition {
  Action action;
  Vertex target;
};

// Moves to in-bounds passable cells in the order Right, Up, Left, Down, then Wait.
// Throws std::invalid_argument when v itself is blocked.
std::vector<Transition> neighbors(const GridMap& map, Vertex v);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace famapf
