#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "staforge/units.hpp"

namespace staforge {

/// Linear open network of bosonic modes in the drive frame.
///
/// The mean fields obey d(alpha)/dt = -i*Omega*alpha - c*eps(t), where the
/// diagonal of Omega holds Delta_i - i*kappa_i/2 and the off-diagonal entries
/// are the (Hermitian) couplings J_ij. The drive coupling c maps a single
/// port amplitude eps(t) onto the modes.
class ModeNetwork {
 public:
  ModeNetwork() = default;
  ModeNetwork(Eigen::MatrixXcd omega, Eigen::VectorXcd drive_coupling);

  static ModeNetwork single_mode(double delta, double kappa, cplx coupling = 1.0);

  int n_modes() const { return static_cast<int>(omega_.rows()); }
  const Eigen::MatrixXcd& omega() const { return omega_; }
  const Eigen::VectorXcd& drive_coupling() const { return drive_coupling_; }

  double detuning(int i) const { return omega_(i, i).real(); }
  double kappa(int i) const { return -2.0 * omega_(i, i).imag(); }

  /// Shifts every mode detuning by `offset` (e.g. probing at omega_d + offset
  /// moves all detunings by -offset).
  ModeNetwork with_detuning_offset(double offset) const;

  /// Network restricted to the listed modes.
  ModeNetwork subnetwork(std::span<const int> modes) const;

 private:
  Eigen::MatrixXcd omega_;
  Eigen::VectorXcd drive_coupling_;
};

/// Checks the network invariants and returns a copy of `net`.
/// Throws Error{DimensionMismatch | NonHermitianCoupling | NonPassive}.
ModeNetwork validate_network(const ModeNetwork& net);

/// Eigen-decomposition Omega = O^{-1} diag(hybrid_detunings) O.
struct HybridSpectrum {
  Eigen::VectorXcd hybrid_detunings;
  Eigen::MatrixXcd transform;          // O
  Eigen::MatrixXcd inverse_transform;  // O^{-1}

  int size() const { return static_cast<int>(hybrid_detunings.size()); }
  double detuning(int k) const { return hybrid_detunings(k).real(); }
  double linewidth(int k) const { return -2.0 * hybrid_detunings(k).imag(); }
};

/// Sampled mean-field trajectory.
struct Trace {
  std::vector<double> times;
  std::vector<Eigen::VectorXcd> alphas;
  std::vector<cplx> output;  // optional detected field r_o(t)

  std::size_t size() const { return times.size(); }
  std::vector<cplx> mode(int k) const;
};

}  // namespace staforge
