#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "staforge/differential_evolution.hpp"
#include "staforge/network.hpp"
#include "staforge/pulse.hpp"

namespace staforge {

struct MmocProblem {
  HybridSpectrum spectrum;
  int m = 10;
  double t0 = 0.0;
  double tf = 60.0;
  cplx eps0{0.0};
  cplx epsf{1.0};

  /// The same problem with eps0 and epsf exchanged.
  MmocProblem reversed() const;
};

struct MmocSolution {
  Eigen::VectorXcd essential;   // min-energy sections
  Eigen::MatrixXcd null_basis;  // m x (m-n), orthonormal columns
  Eigen::VectorXcd free_params; // x
  Eigen::VectorXd singular_values;
  /// (U^H y)_i / s_i, the coordinates of `essential` in the right singular basis.
  Eigen::VectorXcd essential_coordinates;

  Eigen::VectorXcd sections() const;
  int m() const { return static_cast<int>(essential.size()); }
};

struct SvdOptions {
  double rank_tolerance = 1e-12;
  /// The null basis costs O(m^2) memory; skip it when only the essential
  /// pulse is needed.
  bool compute_null_basis = true;
};

/// (e^z - 1) / z, accurate near z = 0.
cplx exprel(cplx z);

/// G_kj = integral over section j of exp(-i D_k (tf - t)) dt.
Eigen::MatrixXcd build_G(const HybridSpectrum& spectrum, int m, double t0, double tf);

/// y_k = (epsf - eps0 exp(-i D_k (tf - t0))) / (i D_k). Throws DegenerateDetuning for D_k = 0.
Eigen::VectorXcd build_y(const HybridSpectrum& spectrum, cplx eps0, cplx epsf, double t0,
                         double tf);

/// Minimum-norm solution plus null space of G eps = y.
/// Throws RankDeficient if s_min < rank_tolerance * s_max.
MmocSolution svd_solve(const Eigen::MatrixXcd& G, const Eigen::VectorXcd& y,
                       const SvdOptions& options = {});

MmocSolution solve(const MmocProblem& problem, const SvdOptions& options = {});

/// Sum of squared section amplitudes, sum |essential coords|^2 + sum |x|^2.
double energy(const MmocSolution& solution);

/// max_j |eps_j|^2.
double pmax(const MmocSolution& solution);

/// (1/m) sum |essential coords|^2.
double pmax_lower_bound(const MmocSolution& solution, int m);

struct PmaxOptions {
  double bounds_scale = 10.0;  // |Re x|, |Im x| <= scale * ||essential||
  DeOptions de;
};

/// Minimizes P_max over the free parameters by differential evolution.
MmocSolution optimize_pmax(const MmocSolution& solution, const PmaxOptions& options);

Pulse assemble_pulse(const MmocProblem& problem, const MmocSolution& solution);

/// Power in dB relative to p0.
double power_db(double p, double p0);

/// Summary numbers of an optimized solve.
struct MmocReport {
  double pmax_min_energy_db = 0.0;
  double pmax_optimized_db = 0.0;
  double lower_bound_db = 0.0;
  double reduction_db = 0.0;
  /// Peak amplitude ratio max|eps| (x = 0) / max|eps| (optimized), linear.
  double peak_amplitude_ratio = 1.0;
  double energy = 0.0;
};

MmocReport report(const MmocSolution& min_energy, const MmocSolution& optimized, cplx p0_amp);

/// One drive port: eps_i = coupling_i * eps_port(t).
struct DrivePort {
  Eigen::VectorXcd coupling;
  cplx eps0{0.0};
  cplx epsf{0.0};
};

struct MultiportSolution {
  /// sections[p] holds the m amplitudes of port p.
  std::vector<Eigen::VectorXcd> sections;
  Eigen::VectorXd singular_values;
};

/// Joint solve over several ports with a full Omega. The transfer matrix is
/// M_{k,(p,j)} = (O c_p)_k G_kj and the target is the hybrid-frame image of
/// the equilibrium change.
MultiportSolution multiport_solve(const ModeNetwork& net, const std::vector<DrivePort>& ports,
                                  int m, double t0, double tf,
                                  double rank_tolerance = 1e-12);

struct FilterOptions {
  double abs_tol = 1e-12;
  int max_depth = 40;
  long max_evaluations = 400'000'000;
};

/// G' for an ideal brick-wall passband [omega_lo, omega_hi] (rotating frame)
/// with the filtered pulse integrated over [window_lo, window_hi].
Eigen::MatrixXcd filter_corrected_G(const HybridSpectrum& spectrum, int m, double t0, double tf,
                                    double omega_lo, double omega_hi, double window_lo,
                                    double window_hi, const FilterOptions& options = {});

/// max_kj |G'_kj - G_kj| / |G_kj|.
double max_relative_difference(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

}  // namespace staforge
