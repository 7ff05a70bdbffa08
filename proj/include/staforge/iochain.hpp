#pragma once

#include <vector>

#include "staforge/network.hpp"

namespace staforge {

/// Feedline network around the filter port: input-capacitor reflection Gamma,
/// line phase theta, bare filter coupling kappa_a and a fit coefficient on
/// the leakage term.
struct IoChainParams {
  cplx gamma{0.0};
  double theta = 0.0;
  double kappa_a = 1.0;
  cplx leak_scale{1.0};

  /// Estimates quoted for the reference device (Gamma ~ 0.98 - 0.17i, theta ~ 0.05).
  static IoChainParams paper(double kappa_a);
};

struct EffectiveParams {
  double delta_a_eff = 0.0;
  double kappa_a_eff = 0.0;
  /// Factor mapping the input field <c_i> to the effective drive eps.
  cplx drive_scale{0.0};
};

/// Throws InvalidArgument for |Gamma| > 1 or kappa_a <= 0.
void validate(const IoChainParams& p);

/// Throws ZeroEffectiveKappa if 1 + Re(Gamma e^{2i theta}) <= 0.
EffectiveParams effective_params(const IoChainParams& p, double delta_a);

/// Bare kappa_a that yields the given effective filter linewidth.
double bare_kappa_from_effective(cplx gamma, double theta, double kappa_eff);

/// r_o = 2 eps / sqrt(kappa_a) + leak_scale (1 + e^{2i theta} Gamma)/2 sqrt(kappa_a) a.
cplx output_field(const IoChainParams& p, cplx eps, cplx a_field);

/// Detected field along a trace. The leaking field is c^H alpha, i.e. the
/// driven (filter) modes of `net`.
std::vector<cplx> output_trace(const ModeNetwork& net, const IoChainParams& p,
                               const std::vector<double>& times, const std::vector<cplx>& drive,
                               const std::vector<Eigen::VectorXcd>& alphas);

/// Steady-state transmission normalized to the bare feedthrough,
/// S21(w) = r_o / (2 eps / sqrt(kappa_a)), for probe detunings w measured
/// from the network's drive frequency.
std::vector<cplx> s21_spectrum(const ModeNetwork& net, const IoChainParams& p,
                               const std::vector<double>& omega_grid);

/// Local minima of |S21| on the grid, refined by golden-section search on the
/// continuous spectrum.
std::vector<double> s21_dips(const ModeNetwork& net, const IoChainParams& p,
                             const std::vector<double>& omega_grid);

/// Optional single-pole low-pass with time constant tau (ns) applied to a
/// sampled signal, exact for piecewise-linear input. tau <= 0 is a no-op.
std::vector<cplx> low_pass(const std::vector<double>& times, const std::vector<cplx>& signal,
                           double tau);

}  // namespace staforge
