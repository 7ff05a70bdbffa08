#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "staforge/network.hpp"
#include "staforge/pulse.hpp"

namespace staforge {

struct PropagateOptions {
  /// Substeps per variation timescale of a smooth drive (see Pulse::variation_timescale).
  double steps_per_timescale = 20.0;
  /// Absolute cap on the substep (ns).
  double max_step = INFINITY;
  /// Substeps per sample interval for sampled drives.
  int substeps_per_sample = 4;
};

/// Integrates d(alpha)/dt = -i Omega alpha - c eps(t) from alpha0 at times[0]
/// and reports alpha at every grid time.
///
/// Piecewise-constant sections are propagated exactly. For smooth drives each
/// substep interpolates eps(t) by a quartic through five Gauss-Legendre nodes
/// and integrates the interpolant against exp(-i Omega (h - s)) exactly, so
/// the error depends only on how fast the drive varies, never on Omega.
Trace propagate(const ModeNetwork& net, const Pulse& pulse, const Eigen::VectorXcd& alpha0,
                const std::vector<double>& times, const PropagateOptions& options = {});

/// |alpha(t) - alpha_bar(t)| for a single mode started on its equilibrium,
/// where alpha_bar = i eps_ref(t) / (Delta - i kappa/2). Without `reference`
/// the drive itself defines the target.
std::vector<double> diabatic_residual(const ModeNetwork& net, const Pulse& pulse,
                                      const std::vector<double>& times,
                                      const std::optional<Pulse>& reference = std::nullopt,
                                      const PropagateOptions& options = {});

/// Uniform grid t0, t0 + dt, ..., up to and including t1 (within rounding).
std::vector<double> uniform_grid(double t0, double t1, std::size_t points);

}  // namespace staforge
