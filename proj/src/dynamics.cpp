#include "rrtlab/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace rrtlab {

std::vector<ControlInput> CarModel::control_set() const {
  if (v_set.empty() || phi_set.empty())
    throw std::invalid_argument("CarModel: v_set and phi_set must be nonempty");
  std::vector<ControlInput> u;
  u.reserve(v_set.size() * phi_set.size());
  for (double v : v_set)
    for (double phi : phi_set) u.push_back(ControlInput{v, phi});
  return u;
}

namespace {

struct Deriv {
  double dx, dy, dtheta;
};

inline Deriv car_ode(const CarModel& m, double theta, const ControlInput& u) {
  return Deriv{u.v * std::cos(theta), u.v * std::sin(theta),
               (u.v / m.L) * std::tan(u.phi)};
}

}  // namespace

CarState propagate_traced(const CarModel& model, const CarState& s,
                          const ControlInput& u, const IntegrationSpec& ispec,
                          std::vector<CarState>& trace) {
  if (!(ispec.dt > 0) || ispec.substeps < 1)
    throw std::invalid_argument("IntegrationSpec: need dt > 0 and substeps >= 1");
  const double h = ispec.dt / ispec.substeps;
  double x = s.x, y = s.y, theta = s.theta;
  trace.push_back(CarState{x, y, normalize_angle(theta)});
  for (int i = 0; i < ispec.substeps; ++i) {
    // classic RK4; theta is integrated unwrapped and normalized at the end so
    // the integration itself never sees a wrap discontinuity
    const Deriv k1 = car_ode(model, theta, u);
    const Deriv k2 = car_ode(model, theta + 0.5 * h * k1.dtheta, u);
    const Deriv k3 = car_ode(model, theta + 0.5 * h * k2.dtheta, u);
    const Deriv k4 = car_ode(model, theta + h * k3.dtheta, u);
    x += h / 6.0 * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx);
    y += h / 6.0 * (k1.dy + 2.0 * k2.dy + 2.0 * k3.dy + k4.dy);
    theta += h / 6.0 * (k1.dtheta + 2.0 * k2.dtheta + 2.0 * k3.dtheta + k4.dtheta);
    trace.push_back(CarState{x, y, normalize_angle(theta)});
  }
  return trace.back();
}

CarState propagate(const CarModel& model, const CarState& s,
                   const ControlInput& u, const IntegrationSpec& ispec) {
  std::vector<CarState> trace;
  trace.reserve(ispec.substeps + 1);
  return propagate_traced(model, s, u, ispec, trace);
}

InputChoice best_input_choice(const CarModel& model, const CarState& s_near,
                              const CarState& x_rand,
                              const IntegrationSpec& ispec,
                              const MetricSpec& metric) {
  const std::vector<ControlInput> controls = model.control_set();
  const State target = x_rand.to_state();
  InputChoice best;
  double best_d2 = 0;
  for (int i = 0; i < static_cast<int>(controls.size()); ++i) {
    const CarState next = propagate(model, s_near, controls[i], ispec);
    const double d2 = distance2(next.to_state(), target, metric);
    if (best.index < 0 || d2 < best_d2) {  // strict: ties keep the first
      best = InputChoice{i, controls[i], next};
      best_d2 = d2;
    }
  }
  return best;
}

std::pair<ControlInput, CarState> best_input(const CarModel& model,
                                             const CarState& s_near,
                                             const CarState& x_rand,
                                             const IntegrationSpec& ispec,
                                             const MetricSpec& metric) {
  const InputChoice c = best_input_choice(model, s_near, x_rand, ispec, metric);
  return {c.u, c.next};
}

InputChoice random_input_choice(const CarModel& model, const CarState& s_near,
                                const IntegrationSpec& ispec, RngStream& rng) {
  const std::vector<ControlInput> controls = model.control_set();
  const int i = static_cast<int>(rng.uniform_index(controls.size()));
  return InputChoice{i, controls[i], propagate(model, s_near, controls[i], ispec)};
}

HolonomicState holonomic_step(const HolonomicState& s_near,
                              const HolonomicState& x_rand, double eps) {
  if (!(eps > 0)) throw std::invalid_argument("holonomic_step: eps must be positive");
  if (s_near.size() != x_rand.size())
    throw std::invalid_argument("holonomic_step: dimension mismatch");
  double d2 = 0;
  for (size_t i = 0; i < s_near.size(); ++i) {
    const double d = x_rand[i] - s_near[i];
    d2 += d * d;
  }
  const double d = std::sqrt(d2);
  if (d <= eps) return x_rand;  // also covers the degenerate s_near == x_rand
  HolonomicState out(s_near.size());
  const double t = eps / d;
  for (size_t i = 0; i < s_near.size(); ++i)
    out[i] = s_near[i] + t * (x_rand[i] - s_near[i]);
  return out;
}

}  // namespace rrtlab
