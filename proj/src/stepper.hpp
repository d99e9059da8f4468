#pragma once

// Fixed-step driver over odeint's explicit steppers.

#include <boost/numeric/odeint.hpp>

#include <vector>

#include "nhjacobi/dynamics.hpp"

namespace nhj::detail {

using OdeState = std::vector<double>;

// Advances x by `steps` steps of size dt. After step i (1-based) calls
// post(x, i), which may modify x (projection) or throw.
template <class System, class Post>
void run_fixed(Scheme scheme, System&& system, OdeState& x, double dt, int steps, Post&& post) {
  namespace ode = boost::numeric::odeint;
  auto loop = [&](auto& stepper) {
    for (int i = 1; i <= steps; ++i) {
      stepper.do_step(std::ref(system), x, (i - 1) * dt, dt);
      post(x, i);
    }
  };
  if (scheme == Scheme::RK4) {
    ode::runge_kutta4<OdeState> stepper;
    loop(stepper);
  } else {
    // Explicit midpoint rule.
    using Midpoint = ode::explicit_generic_rk<2, 2, OdeState, double>;
    const boost::array<double, 1> a1 = {{0.5}};
    const Midpoint::coef_a_type a = boost::fusion::make_vector(a1);
    const Midpoint::coef_b_type b = {{0.0, 1.0}};
    const Midpoint::coef_c_type c = {{0.0, 0.5}};
    Midpoint stepper(a, b, c);
    loop(stepper);
  }
}

}  // namespace nhj::detail
