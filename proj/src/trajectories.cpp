#include "famapf/trajectories.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace famapf {

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t end = line.find(sep, pos);
    out.push_back(line.substr(pos, end == std::string_view::npos ? end : end - pos));
    if (end == std::string_view::npos) break;
    pos = end + 1;
  }
  return out;
}

double parse_double(std::string_view s, int line, int column) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(value)) {
    throw ParseError("expected a number, got '" + std::string(s) + "'", line, column);
  }
  return value;
}

bool id_less(const std::string& a, const std::string& b) {
  long long ia = 0;
  long long ib = 0;
  auto ra = std::from_chars(a.data(), a.data() + a.size(), ia);
  auto rb = std::from_chars(b.data(), b.data() + b.size(), ib);
  const bool na = ra.ec == std::errc{} && ra.ptr == a.data() + a.size();
  const bool nb = rb.ec == std::errc{} && rb.ptr == b.data() + b.size();
  if (na && nb) return ia < ib;
  if (na != nb) return na;
  return a < b;
}

Point position_at(const std::vector<TrajectorySample>& s, std::size_t& seg, double t) {
  while (seg + 1 < s.size() - 1 && s[seg + 1].t < t) ++seg;
  const auto& a = s[seg];
  const auto& b = s[seg + 1];
  const double u = std::clamp((t - a.t) / (b.t - a.t), 0.0, 1.0);
  return {a.x + u * (b.x - a.x), a.y + u * (b.y - a.y)};
}

}  // namespace

TrajectoryDataset parse_trajectory_csv(std::string_view text) {
  std::size_t pos = 0;
  int line_no = 0;
  auto next_line = [&](std::string_view& line) {
    if (pos >= text.size()) return false;
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = end + 1;
    ++line_no;
    return true;
  };

  std::string_view line;
  if (!next_line(line)) throw ParseError("empty trajectory CSV, expected header traj_id,t,x,y", 1, 1);
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line.remove_prefix(3);
  const auto header = split(line, ',');
  if (header.size() != 4 || header[0] != "traj_id" || header[1] != "t" || header[2] != "x" ||
      header[3] != "y") {
    throw ParseError("expected header 'traj_id,t,x,y'", 1, 1);
  }

  std::map<std::string, Trajectory, decltype(&id_less)> by_id(&id_less);
  while (next_line(line)) {
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 4) {
      throw ParseError("expected 4 columns, got " + std::to_string(fields.size()), line_no, 1);
    }
    std::string id(fields[0]);
    if (id.empty()) throw ParseError("empty traj_id", line_no, 1);
    const TrajectorySample s{parse_double(fields[1], line_no, 2), parse_double(fields[2], line_no, 3),
                             parse_double(fields[3], line_no, 4)};
    auto [it, inserted] = by_id.try_emplace(id);
    Trajectory& traj = it->second;
    if (inserted) traj.id = id;
    if (!traj.samples.empty() && !(s.t > traj.samples.back().t)) {
      throw ParseError("non-monotonic timestamps in trajectory '" + id + "'", line_no, 2);
    }
    traj.samples.push_back(s);
  }

  TrajectoryDataset out;
  out.reserve(by_id.size());
  for (auto& [id, traj] : by_id) out.push_back(std::move(traj));
  return out;
}

TrajectoryDataset load_trajectories(const std::filesystem::path& path) {
  return parse_trajectory_csv(read_text_file(path));
}

std::string to_trajectory_csv(const TrajectoryDataset& dataset) {
  std::ostringstream out;
  out.precision(17);
  out << "traj_id,t,x,y\n";
  for (const auto& traj : dataset) {
    for (const auto& s : traj.samples) out << traj.id << ',' << s.t << ',' << s.x << ',' << s.y << '\n';
  }
  return out.str();
}

double wrap_angle(double theta) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double w = std::fmod(theta, two_pi);
  if (w < 0.0) w += two_pi;
  // fmod of a tiny negative value can round up to exactly 2pi
  if (w >= two_pi) w = 0.0;
  return w;
}

double angle_diff(double a, double b) {
  constexpr double pi = std::numbers::pi;
  double d = wrap_angle(a - b);
  if (d > pi) d -= 2.0 * pi;
  return d;
}

std::vector<VelocityObservation> extract_velocities(const Trajectory& traj, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("resampling dt must be positive");
  std::vector<VelocityObservation> out;
  const auto& s = traj.samples;
  if (s.size() < 2) return out;

  const double t0 = s.front().t;
  const double span = s.back().t - t0;
  // Tolerate float noise so that e.g. span 2.0 with dt 1.0 yields 3 resampled points.
  const auto steps = static_cast<std::size_t>(std::floor(span / dt + 1e-9));
  std::vector<Point> resampled;
  resampled.reserve(steps + 1);
  std::size_t seg = 0;
  for (std::size_t k = 0; k <= steps; ++k) resampled.push_back(position_at(s, seg, t0 + k * dt));

  out.reserve(steps);
  for (std::size_t k = 0; k + 1 < resampled.size(); ++k) {
    const double dx = resampled[k + 1].x - resampled[k].x;
    const double dy = resampled[k + 1].y - resampled[k].y;
    const double dist = std::hypot(dx, dy);
    VelocitySample u;
    if (dist > 0.0) {
      // map frame has y pointing down, so "Up" is -dy
      u.theta = wrap_angle(std::atan2(-dy, dx));
      u.rho = dist / dt;
    }
    out.push_back({resampled[k], u});
  }
  return out;
}

std::int64_t CellObservations::total() const {
  std::int64_t n = dropped;
  for (const auto& c : cells) n += static_cast<std::int64_t>(c.size());
  return n;
}

CellObservations bin_observations(std::span<const VelocityObservation> obs, const GridMap& map) {
  CellObservations out;
  out.width = map.width();
  out.height = map.height();
  out.cells.resize(static_cast<std::size_t>(map.size()));
  for (const auto& o : obs) {
    const double fx = std::floor(o.pos.x / map.resolution());
    const double fy = std::floor(o.pos.y / map.resolution());
    if (!(fx >= 0.0 && fy >= 0.0 && fx < map.width() && fy < map.height())) {
      ++out.dropped;
      continue;
    }
    const Vertex v{static_cast<int>(fx), static_cast<int>(fy)};
    if (!map.passable(v)) {
      ++out.dropped;
      continue;
    }
    out.cells[static_cast<std::size_t>(map.index(v))].push_back(o.u);
  }
  return out;
}

CellObservations bin_observations(const TrajectoryDataset& dataset, const GridMap& map,
                                  double dt) {
  std::vector<VelocityObservation> all;
  for (const auto& traj : dataset) {
    auto v = extract_velocities(traj, dt);
    all.insert(all.end(), v.begin(), v.end());
  }
  return bin_observations(all, map);
}

}  // namespace famapf
