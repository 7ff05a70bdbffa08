#pragma once

#include <vector>

#include <Eigen/Dense>

#include "staforge/pulse.hpp"

namespace staforge {

struct FockConfig {
  int dim = 20;
  double delta = 0.0;
  double kappa = 0.0;
  /// Static frequency offset seen only by the oracle (mean Kerr shift).
  double kerr_shift = 0.0;
};

/// Smallest truncation satisfying n_max + 6 sqrt(n_max) + 10.
int adequate_dimension(double n_max);

struct LindbladOptions {
  /// Upper bound on the RK4 step in addition to min(0.01/kappa, 0.01/|delta|, dt/4).
  double max_step = 0.05;
  double truncation_tolerance = 1e-8;
};

/// Density matrices at the requested times for
/// rho_dot = -i[H, rho] + kappa D[a] rho, H = delta a^dag a - i(eps a^dag - eps^* a).
/// Throws TruncationBreach when the two highest levels hold more than the
/// tolerance and InvalidArgument for a non-physical rho0.
std::vector<Eigen::MatrixXcd> lindblad_evolve(const FockConfig& cfg, const Pulse& pulse,
                                              const Eigen::MatrixXcd& rho0,
                                              const std::vector<double>& times,
                                              const LindbladOptions& options = {});

Eigen::MatrixXcd vacuum(int dim);
/// Truncated coherent-state vector (not renormalized).
Eigen::VectorXcd coherent_state(int dim, cplx alpha);
Eigen::MatrixXcd coherent_density(int dim, cplx alpha);

cplx expectation_a(const Eigen::MatrixXcd& rho);
double mean_photon_number(const Eigen::MatrixXcd& rho);
double purity(const Eigen::MatrixXcd& rho);
/// <alpha| rho |alpha>.
double coherent_fidelity(const Eigen::MatrixXcd& rho, cplx alpha);
double top_level_population(const Eigen::MatrixXcd& rho);

/// Dense Liouvillian of the undriven mode acting on column-stacked vec(rho).
Eigen::MatrixXcd liouvillian(const FockConfig& cfg);

struct SpectrumMatch {
  int j = 0;
  int k = 0;
  cplx predicted;
  cplx computed;
};

/// Matches e_{j,k} = i delta j - kappa (j/2 + k) and conjugates for 0 <= j <= j_max,
/// 0 <= k <= k_max to distinct Liouvillian eigenvalues within 1e-6 kappa.
/// Throws InvalidArgument when dim < j_max + k_max + 5 and TruncationBreach
/// when a prediction finds no partner.
std::vector<SpectrumMatch> liouvillian_spectrum(const FockConfig& cfg, int j_max, int k_max);

/// Largest 1 - <0|D(-alpha) rho D(alpha)|0> over the grid, with alpha(t) from
/// the mean-field propagation at delta (without kerr_shift) starting from vacuum.
double displaced_frame_check(const FockConfig& cfg, const Pulse& pulse,
                             const std::vector<double>& times,
                             const LindbladOptions& options = {});

}  // namespace staforge
