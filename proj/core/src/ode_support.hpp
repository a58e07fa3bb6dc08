#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include <boost/numeric/odeint.hpp>

namespace nlstrain::detail {

using State2 = std::array<double, 2>;
using DenseStepper =
    boost::numeric::odeint::dense_output_runge_kutta<boost::numeric::odeint::controlled_runge_kutta<
        boost::numeric::odeint::runge_kutta_dopri5<State2>>>;

inline DenseStepper make_stepper(double atol, double rtol) {
  return boost::numeric::odeint::make_dense_output(atol, rtol, boost::numeric::odeint::runge_kutta_dopri5<State2>());
}

/// Integrates from (t0, y0) through the monotone `targets` and returns the
/// interpolated state at each one.
template <class System>
std::vector<State2> sample_states(System system, State2 y0, double t0, std::span<const double> targets, double h0,
                                  double atol, double rtol) {
  std::vector<State2> out(targets.size());
  if (targets.empty()) return out;
  const double direction = targets.back() >= t0 ? 1.0 : -1.0;
  DenseStepper stepper = make_stepper(atol, rtol);
  stepper.initialize(y0, t0, direction * std::abs(h0));
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const double target = targets[i];
    if (direction * (target - t0) <= 0.0) {
      out[i] = y0;
      continue;
    }
    while (direction * (stepper.current_time() - target) < 0.0) stepper.do_step(system);
    stepper.calc_state(target, out[i]);
  }
  return out;
}

}  // namespace nlstrain::detail
