#pragma once

#include <string>
#include <vector>

#include "rrtlab/rng.hpp"

namespace rrtlab {

// States are flat coordinate vectors; the meaning of the coordinates is
// carried by the SpaceSpec that space-aware operations receive alongside.
// A holonomic state is d Euclidean coordinates; a car state is (x, y, theta).
using State = std::vector<double>;

// A holonomic state is nothing more than its coordinate vector.
using HolonomicState = State;

enum class SpaceType { holonomic, car };

struct SpaceSpec {
  SpaceType type = SpaceType::holonomic;
  int dim = 2;           // coordinate count for holonomic spaces
  double w_theta = 0.1;  // angular weight of the car metric: d^2 += w_theta * dtheta^2

  int coord_count() const { return type == SpaceType::car ? 3 : dim; }
  // leading coordinates that are spatial; obstacles and plots only see these
  int position_count() const { return type == SpaceType::car ? 2 : dim; }
};

// The metric parameters live on the space description; both names refer to
// the same struct.
using MetricSpec = SpaceSpec;

// wrap an angle into [-pi, pi)
double normalize_angle(double a);
// shortest angular distance between a and b on the circle, in [0, pi]
double angle_dist(double a, double b);

struct CarState {
  double x = 0;
  double y = 0;
  double theta = 0;  // kept normalized to [-pi, pi) by every mutating operation

  State to_state() const { return {x, y, theta}; }
  static CarState from_state(const State& s);
};

// Obstacles are closed sets: a point exactly on the boundary is in collision.
// This removes tie ambiguity from boundary tests.
struct Obstacle {
  enum class Shape { box, disc };
  Shape shape = Shape::box;
  std::vector<double> lo, hi;  // box corners, one entry per position axis
  std::vector<double> center;  // disc center
  double radius = 0;

  static Obstacle make_box(std::vector<double> lo, std::vector<double> hi);
  static Obstacle make_disc(std::vector<double> center, double radius);

  bool contains(const double* pos, int dims) const;
};

struct Workspace {
  // sampling bounds per position axis (2 axes for car spaces, dim axes for
  // holonomic); heading is implicitly [-pi, pi)
  std::vector<double> lo, hi;
  std::vector<Obstacle> obstacles;
  SpaceSpec space;

  double shortest_side() const;
  // default collision stepping: 1/100 of the shortest side
  double default_resolution() const { return shortest_side() / 100.0; }
};

// Goal membership is closed: distance(s, center) <= radius counts as inside.
struct GoalRegion {
  State center;
  double radius = 0;
};

double distance(const State& a, const State& b, const MetricSpec& metric);
// squared distance, the nearest-neighbour hot path; accumulated in coordinate
// order so that every caller sees bit-identical values for identical inputs
double distance2(const State& a, const State& b, const MetricSpec& metric);

// uniform over the workspace bounds (heading uniform over [-pi, pi) for car
// spaces); deliberately not restricted to free space — rejection is the
// extension step's job
State sample_uniform(const Workspace& ws, RngStream& rng);

// true iff s lies within bounds and outside every obstacle; only the position
// coordinates are tested (the robot is a point, heading plays no role)
bool in_free_space(const State& s, const Workspace& ws);

// walks the straight segment between the position components of a and b at
// spacing <= resolution (endpoints included) and reports whether any sampled
// point leaves free space
bool segment_collides(const State& a, const State& b, const Workspace& ws,
                      double resolution);

bool in_goal(const State& s, const GoalRegion& goal, const MetricSpec& metric);

}  // namespace rrtlab
