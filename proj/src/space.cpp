#include "rrtlab/space.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rrtlab {

double normalize_angle(double a) {
  const double two_pi = 2.0 * M_PI;
  double r = std::fmod(a + M_PI, two_pi);
  if (r < 0) r += two_pi;
  return r - M_PI;
}

double angle_dist(double a, double b) {
  double d = std::fabs(normalize_angle(a) - normalize_angle(b));
  return d > M_PI ? 2.0 * M_PI - d : d;
}

CarState CarState::from_state(const State& s) {
  if (s.size() != 3)
    throw std::invalid_argument("CarState::from_state: expected 3 coordinates");
  return CarState{s[0], s[1], s[2]};
}

Obstacle Obstacle::make_box(std::vector<double> lo, std::vector<double> hi) {
  if (lo.size() != hi.size() || lo.empty())
    throw std::invalid_argument("box obstacle: lo/hi must be same nonzero size");
  for (size_t i = 0; i < lo.size(); ++i)
    if (!(lo[i] < hi[i]))
      throw std::invalid_argument("box obstacle: need lo < hi on every axis");
  Obstacle o;
  o.shape = Shape::box;
  o.lo = std::move(lo);
  o.hi = std::move(hi);
  return o;
}

Obstacle Obstacle::make_disc(std::vector<double> center, double radius) {
  if (center.empty())
    throw std::invalid_argument("disc obstacle: center must be nonempty");
  if (!(radius > 0))
    throw std::invalid_argument("disc obstacle: radius must be positive");
  Obstacle o;
  o.shape = Shape::disc;
  o.center = std::move(center);
  o.radius = radius;
  return o;
}

bool Obstacle::contains(const double* pos, int dims) const {
  if (shape == Shape::box) {
    const int n = std::min<int>(dims, static_cast<int>(lo.size()));
    for (int i = 0; i < n; ++i)
      if (pos[i] < lo[i] || pos[i] > hi[i]) return false;
    return true;
  }
  double d2 = 0;
  const int n = std::min<int>(dims, static_cast<int>(center.size()));
  for (int i = 0; i < n; ++i) {
    const double d = pos[i] - center[i];
    d2 += d * d;
  }
  return d2 <= radius * radius;  // closed disc
}

double Workspace::shortest_side() const {
  if (lo.empty() || lo.size() != hi.size())
    throw std::invalid_argument("workspace: bounds not set");
  double side = hi[0] - lo[0];
  for (size_t i = 1; i < lo.size(); ++i) side = std::min(side, hi[i] - lo[i]);
  return side;
}

double distance2(const State& a, const State& b, const MetricSpec& metric) {
  if (a.size() != b.size())
    throw std::invalid_argument("distance: dimension mismatch");
  if (metric.type == SpaceType::car) {
    if (a.size() != 3)
      throw std::invalid_argument("distance: car states have 3 coordinates");
    const double dx = a[0] - b[0];
    const double dy = a[1] - b[1];
    const double dt = angle_dist(a[2], b[2]);
    return dx * dx + dy * dy + metric.w_theta * dt * dt;
  }
  if (static_cast<int>(a.size()) != metric.dim)
    throw std::invalid_argument("distance: state does not match space dim");
  double d2 = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    d2 += d * d;
  }
  return d2;
}

double distance(const State& a, const State& b, const MetricSpec& metric) {
  return std::sqrt(distance2(a, b, metric));
}

State sample_uniform(const Workspace& ws, RngStream& rng) {
  const int pos = ws.space.position_count();
  if (static_cast<int>(ws.lo.size()) != pos || ws.hi.size() != ws.lo.size())
    throw std::invalid_argument("sample_uniform: bounds do not match space");
  State s(ws.space.coord_count());
  for (int i = 0; i < pos; ++i) {
    if (!(ws.lo[i] < ws.hi[i]))
      throw std::invalid_argument("sample_uniform: degenerate bounds");
    s[i] = rng.uniform(ws.lo[i], ws.hi[i]);
  }
  if (ws.space.type == SpaceType::car) s[2] = rng.uniform(-M_PI, M_PI);
  return s;
}

bool in_free_space(const State& s, const Workspace& ws) {
  const int pos = ws.space.position_count();
  if (static_cast<int>(s.size()) < pos)
    throw std::invalid_argument("in_free_space: state too short for space");
  for (int i = 0; i < pos; ++i)
    if (s[i] < ws.lo[i] || s[i] > ws.hi[i]) return false;
  for (const Obstacle& o : ws.obstacles)
    if (o.contains(s.data(), pos)) return false;
  return true;
}

bool segment_collides(const State& a, const State& b, const Workspace& ws,
                      double resolution) {
  if (!(resolution > 0))
    throw std::invalid_argument("segment_collides: resolution must be positive");
  const int pos = ws.space.position_count();
  double len2 = 0;
  for (int i = 0; i < pos; ++i) {
    const double d = b[i] - a[i];
    len2 += d * d;
  }
  const double len = std::sqrt(len2);
  const long steps = std::max<long>(1, static_cast<long>(std::ceil(len / resolution)));
  State p(a);
  for (long k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(steps);
    for (int i = 0; i < pos; ++i) p[i] = a[i] + t * (b[i] - a[i]);
    if (!in_free_space(p, ws)) return true;
  }
  return false;
}

bool in_goal(const State& s, const GoalRegion& goal, const MetricSpec& metric) {
  return distance(s, goal.center, metric) <= goal.radius;
}

}  // namespace rrtlab
