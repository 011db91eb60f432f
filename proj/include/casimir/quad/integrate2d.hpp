#pragma once

#include <cmath>

#include "casimir/quad/gauss_kronrod.hpp"

namespace casimir::quad {

/// Nested deterministic quadrature of f(x,y) over the open unit square.
/// The outer (y) direction is adaptive over the inner (x) integrals; inner
/// quadrature errors are tracked and folded into the reported error.
template <class F>
AdaptiveResult integrate_2d_unit(F&& f, double abs_tol, double rel_tol,
                                 int max_panels_outer = 2000,
                                 int max_panels_inner = 2000) {
  double inner_err_sum = 0.0;
  long inner_calls = 0;
  bool inner_all_converged = true;
  const double inner_abs = 0.25 * abs_tol;
  const double inner_rel = 0.25 * rel_tol;

  auto outer_integrand = [&](double y) {
    AdaptiveResult inner = integrate_adaptive(
        [&](double x) { return f(x, y); }, 0.0, 1.0, inner_abs, inner_rel,
        max_panels_inner);
    inner_err_sum += inner.error;
    ++inner_calls;
    inner_all_converged = inner_all_converged && inner.converged;
    return inner.value;
  };

  AdaptiveResult outer = integrate_adaptive(outer_integrand, 0.0, 1.0,
                                            0.5 * abs_tol, 0.5 * rel_tol,
                                            max_panels_outer);
  // Inner errors enter the outer integral roughly with unit weight over (0,1).
  const double inner_err_mean =
      inner_calls > 0 ? inner_err_sum / static_cast<double>(inner_calls) : 0.0;
  outer.error += inner_err_mean;
  outer.converged = outer.converged && inner_all_converged &&
                    outer.error <= std::max(abs_tol, rel_tol * std::abs(outer.value));
  return outer;
}

}  // namespace casimir::quad
