#pragma once

#include <functional>

#include "staforge/units.hpp"

namespace staforge {

struct QuadratureOptions {
  double abs_tol = 1e-12;
  double rel_tol = 0.0;
  /// The interval is first cut into this many equal panels; helps oscillatory
  /// integrands whose period is known to the caller.
  int initial_panels = 1;
  int max_depth = 40;
  long max_evaluations = 200'000'000;
};

struct QuadratureResult {
  cplx value;
  double error_estimate = 0.0;
  long evaluations = 0;
};

/// Adaptive 21-point Gauss-Kronrod quadrature of a complex integrand with
/// recursive bisection. The absolute tolerance is shared between panels in
/// proportion to their width. Throws QuadratureFailure when a panel cannot
/// be resolved within max_depth bisections or the evaluation budget is spent.
QuadratureResult integrate(const std::function<cplx(double)>& f, double a, double b,
                           const QuadratureOptions& options = {});

}  // namespace staforge
