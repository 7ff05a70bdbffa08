#pragma once

#include "staforge/network.hpp"

namespace staforge {

/// Diagonalizes Omega. Eigenvalues are sorted by real part, ties by imaginary
/// part, and the columns of O^{-1} have unit norm.
/// Throws DefectiveMatrix when the eigenvector matrix has condition > 1e8.
HybridSpectrum hybridize(const ModeNetwork& net);

/// Steady state alpha = i Omega^{-1} c eps for a constant drive vector given
/// per mode. Throws SingularOmega if Omega is not invertible.
Eigen::VectorXcd equilibrium_state(const ModeNetwork& net, const Eigen::VectorXcd& drive);

/// Steady state under the network's own drive coupling and scalar eps.
Eigen::VectorXcd equilibrium_state(const ModeNetwork& net, cplx eps);

/// 1 / min(sqrt(delta^2 + kappa^2/4), kappa).
double adiabatic_timescale(double delta, double kappa);

}  // namespace staforge
