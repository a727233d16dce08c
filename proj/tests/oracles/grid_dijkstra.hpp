#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <utility>
#include <vector>

#include "famapf/world.hpp"

namespace oracle {

// Shortest 8-connected distance in cells; a diagonal step needs both adjacent orthogonal
// cells open.
inline double grid_distance8(const famapf::GridMap& map, famapf::Vertex s, famapf::Vertex g) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(static_cast<std::size_t>(map.size()), inf);
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  dist[map.index(s)] = 0.0;
  open.push({0.0, map.index(s)});
  while (!open.empty()) {
    auto [d, i] = open.top();
    open.pop();
    if (d > dist[i]) continue;
    const famapf::Vertex v = map.vertex(i);
    if (v == g) return d;
    for (int dx = -1; dx <= 1; ++dx)
      for (int dy = -1; dy <= 1; ++dy) {
        if (dx == 0 && dy == 0) continue;
        const famapf::Vertex u{v.x + dx, v.y + dy};
        if (!map.passable(u)) continue;
        if (dx != 0 && dy != 0 &&
            (!map.passable(famapf::Vertex{v.x + dx, v.y}) ||
             !map.passable(famapf::Vertex{v.x, v.y + dy})))
          continue;
        const double c = d + ((dx != 0 && dy != 0) ? std::sqrt(2.0) : 1.0);
        if (c < dist[map.index(u)]) {
          dist[map.index(u)] = c;
          open.push({c, map.index(u)});
        }
      }
  }
  return inf;
}

}  // namespace oracle
