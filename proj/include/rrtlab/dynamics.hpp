#pragma once

#include <utility>
#include <vector>

#include "rrtlab/space.hpp"

namespace rrtlab {

struct ControlInput {
  double v = 0;    // velocity
  double phi = 0;  // steering angle, radians
};

// Kinematic car: x' = v cos(theta), y' = v sin(theta), theta' = (v/L) tan(phi).
// Controls are drawn from the finite set U = v_set x phi_set.
struct CarModel {
  double L = 1.0;
  std::vector<double> v_set{1.0};
  std::vector<double> phi_set{-0.5, -0.25, 0.0, 0.25, 0.5};

  // v-major enumeration; ties in best_input go to the earliest entry
  std::vector<ControlInput> control_set() const;
  int control_count() const {
    return static_cast<int>(v_set.size() * phi_set.size());
  }
};

struct IntegrationSpec {
  double dt = 0.5;   // duration of one extension
  int substeps = 10; // RK4 steps per extension
};

// Integrates the car ODEs for ispec.dt using fixed-step RK4 with
// ispec.substeps steps; the returned heading is normalized to [-pi, pi).
CarState propagate(const CarModel& model, const CarState& s,
                   const ControlInput& u, const IntegrationSpec& ispec);

// Like propagate, but also records every intermediate substep state (the
// start state first, the final state last).  Planners collision-check the
// recorded trajectory rather than the straight chord.
CarState propagate_traced(const CarModel& model, const CarState& s,
                          const ControlInput& u, const IntegrationSpec& ispec,
                          std::vector<CarState>& trace);

struct InputChoice {
  int index = -1;  // position in control_set()
  ControlInput u;
  CarState next;
};

// Enumerates U, propagates each control, and returns the one whose outcome is
// closest to x_rand; exact distance ties keep the earliest control.
InputChoice best_input_choice(const CarModel& model, const CarState& s_near,
                              const CarState& x_rand,
                              const IntegrationSpec& ispec,
                              const MetricSpec& metric);

std::pair<ControlInput, CarState> best_input(const CarModel& model,
                                             const CarState& s_near,
                                             const CarState& x_rand,
                                             const IntegrationSpec& ispec,
                                             const MetricSpec& metric);

// Sensitivity-study alternative: pick the control uniformly at random.
InputChoice random_input_choice(const CarModel& model, const CarState& s_near,
                                const IntegrationSpec& ispec, RngStream& rng);

// Straight-line step: returns x_rand itself when it is within eps of s_near,
// otherwise the point exactly eps along the segment toward x_rand.
HolonomicState holonomic_step(const HolonomicState& s_near,
                              const HolonomicState& x_rand, double eps);

}  // namespace rrtlab
