#include <algorithm>
#include <cmath>
#include <set>

#include "famapf/uasim.hpp"

namespace famapf {

std::vector<Track> agent_tracks(const GridMap& map, std::span<const TimedPath> paths, int t_end) {
  std::vector<Track> out;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    Track tr;
    tr.id = static_cast<int>(i);
    const TimedPath& p = paths[i];
    for (int t = p.start_time; t <= std::max(t_end, p.start_time); ++t) {
      const Point c = vertex_to_world(map, map.vertex(p.at(t - p.start_time)));
      tr.samples.push_back({static_cast<double>(t), c.x, c.y});
    }
    out.push_back(std::move(tr));
  }
  return out;
}

std::vector<Track> ua_tracks(std::span<const UATrajectory> uas) {
  std::vector<Track> out;
  for (const UATrajectory& u : uas) out.push_back({u.id, u.waypoints});
  return out;
}

namespace {

struct Contact {
  double begin;
  double end;
  double min_distance;
};

// Index of the segment [s[i], s[i+1]] holding t (last segment for t at the end).
std::size_t segment_at(const std::vector<TrajectorySample>& s, double t) {
  const auto it = std::upper_bound(s.begin(), s.end(), t,
                                   [](double v, const TrajectorySample& x) { return v < x.t; });
  const std::size_t i = static_cast<std::size_t>(it - s.begin());
  return i == 0 ? 0 : std::min(i - 1, s.size() >= 2 ? s.size() - 2 : 0);
}

Point position(const std::vector<TrajectorySample>& s, std::size_t i, double t) {
  if (s.size() == 1) return {s[0].x, s[0].y};
  const TrajectorySample& a = s[i];
  const TrajectorySample& b = s[i + 1];
  const double dt = b.t - a.t;
  const double f = dt > 0.0 ? (t - a.t) / dt : 0.0;
  return {a.x + f * (b.x - a.x), a.y + f * (b.y - a.y)};
}

// Maximal spans with distance < r, merged when they touch.
std::vector<Contact> contacts(const Track& a, const Track& b, double r) {
  std::vector<Contact> out;
  if (a.samples.empty() || b.samples.empty()) return out;
  const double lo = std::max(a.samples.front().t, b.samples.front().t);
  const double hi = std::min(a.samples.back().t, b.samples.back().t);
  if (lo > hi) return out;
  const double r2 = r * r;

  auto add = [&](double begin, double end, double dmin) {
    if (!out.empty() && begin - out.back().end <= 1e-9) {
      out.back().end = std::max(out.back().end, end);
      out.back().min_distance = std::min(out.back().min_distance, dmin);
    } else {
      out.push_back({begin, end, dmin});
    }
  };

  std::size_t ia = segment_at(a.samples, lo);
  std::size_t ib = segment_at(b.samples, lo);
  double s = lo;
  while (true) {
    const double ea = ia + 1 < a.samples.size() ? a.samples[ia + 1].t : hi;
    const double eb = ib + 1 < b.samples.size() ? b.samples[ib + 1].t : hi;
    const double e = std::min({ea, eb, hi});
    const Point pa = position(a.samples, ia, s);
    const Point pb = position(b.samples, ib, s);
    const double dx = pa.x - pb.x;
    const double dy = pa.y - pb.y;
    const double len = e - s;
    if (len <= 0.0) {
      const double d2 = dx * dx + dy * dy;
      if (d2 < r2) add(s, s, std::sqrt(d2));
    } else {
      const Point qa = position(a.samples, ia, e);
      const Point qb = position(b.samples, ib, e);
      const double vx = ((qa.x - qb.x) - dx) / len;
      const double vy = ((qa.y - qb.y) - dy) / len;
      const double qa2 = vx * vx + vy * vy;
      const double qb1 = dx * vx + dy * vy;
      const double qc = dx * dx + dy * dy - r2;
      double t1 = 0.0;
      double t2 = -1.0;
      if (qa2 <= 1e-15) {
        if (qc < 0.0) {
          t1 = 0.0;
          t2 = len;
        }
      } else {
        const double disc = qb1 * qb1 - qa2 * qc;
        if (disc > 0.0) {
          const double root = std::sqrt(disc);
          t1 = std::max(0.0, (-qb1 - root) / qa2);
          t2 = std::min(len, (-qb1 + root) / qa2);
        }
      }
      if (t1 <= t2) {
        const double tm = qa2 > 1e-15 ? std::clamp(-qb1 / qa2, t1, t2) : t1;
        const double mx = dx + vx * tm;
        const double my = dy + vy * tm;
        const double dmin = std::sqrt(mx * mx + my * my);
        // a tangential touch at exactly r is not a contact
        if (dmin < r) add(s + t1, s + t2, dmin);
      }
    }
    if (e >= hi) break;
    if (ea <= e && ia + 2 < a.samples.size()) ++ia;
    if (eb <= e && ib + 2 < b.samples.size()) ++ib;
    s = e;
  }
  return out;
}

}  // namespace

ConflictReport count_conflicts(std::span<const Track> agents, std::span<const Track> uas,
                               double radius_agent, double radius_ua, Execution exec) {
  const double r = radius_agent + radius_ua;
  double t_max = 0.0;
  for (const Track& t : agents) {
    if (!t.samples.empty()) t_max = std::max(t_max, t.samples.back().t);
  }
  for (const Track& t : uas) {
    if (!t.samples.empty()) t_max = std::max(t_max, t.samples.back().t);
  }
  const std::size_t steps = static_cast<std::size_t>(std::ceil(t_max)) + 1;

  const int n = static_cast<int>(agents.size());
  std::vector<std::vector<UAConflict>> found(agents.size());
  std::vector<std::vector<long>> overlap(agents.size());
  auto run = [&](int i) {
    auto& mine = found[static_cast<std::size_t>(i)];
    auto& ov = overlap[static_cast<std::size_t>(i)];
    ov.assign(steps, 0);
    const Track& a = agents[static_cast<std::size_t>(i)];
    for (const Track& u : uas) {
      std::set<long> touched;
      for (const Contact& c : contacts(a, u, r)) {
        mine.push_back({a.id, u.id, c.begin, c.min_distance});
        const long k0 = static_cast<long>(std::floor(c.begin));
        const long k1 = c.end > c.begin ? static_cast<long>(std::ceil(c.end)) - 1 : k0;
        for (long k = k0; k <= std::max(k0, k1); ++k) touched.insert(k);
      }
      for (long k : touched) {
        if (k >= 0 && static_cast<std::size_t>(k) < steps) ++ov[static_cast<std::size_t>(k)];
      }
    }
  };
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) run(i);
  } else {
    for (int i = 0; i < n; ++i) run(i);
  }

  ConflictReport rep;
  rep.per_timestep.assign(steps, 0);
  rep.overlap_per_timestep.assign(steps, 0);
  for (std::size_t i = 0; i < found.size(); ++i) {
    rep.conflicts.insert(rep.conflicts.end(), found[i].begin(), found[i].end());
    for (std::size_t k = 0; k < overlap[i].size(); ++k) rep.overlap_per_timestep[k] += overlap[i][k];
  }
  std::sort(rep.conflicts.begin(), rep.conflicts.end(), [](const UAConflict& x, const UAConflict& y) {
    if (x.time != y.time) return x.time < y.time;
    if (x.agent != y.agent) return x.agent < y.agent;
    return x.ua < y.ua;
  });
  for (const UAConflict& c : rep.conflicts) {
    const long k = static_cast<long>(std::floor(c.time));
    if (k >= 0 && static_cast<std::size_t>(k) < steps) ++rep.per_timestep[static_cast<std::size_t>(k)];
  }
  rep.total = static_cast<long>(rep.conflicts.size());
  return rep;
}

}  // namespace famapf
