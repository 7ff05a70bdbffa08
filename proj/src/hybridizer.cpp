#include "staforge/hybridizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "staforge/error.hpp"

namespace staforge {

HybridSpectrum hybridize(const ModeNetwork& net) {
  validate_network(net);
  const int n = net.n_modes();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(net.omega(), true);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::DefectiveMatrix, "eigen-decomposition did not converge");
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  const auto& ev = solver.eigenvalues();
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (ev(a).real() != ev(b).real()) return ev(a).real() < ev(b).real();
    return ev(a).imag() < ev(b).imag();
  });

  HybridSpectrum s;
  s.hybrid_detunings.resize(n);
  s.inverse_transform.resize(n, n);
  for (int k = 0; k < n; ++k) {
    s.hybrid_detunings(k) = ev(order[k]);
    s.inverse_transform.col(k) = solver.eigenvectors().col(order[k]).normalized();
  }

  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(s.inverse_transform);
  const auto& sv = svd.singularValues();
  const double cond = sv(n - 1) > 0.0 ? sv(0) / sv(n - 1) : INFINITY;
  if (!(cond <= 1e8)) {
    std::ostringstream msg;
    msg << "eigenvector condition number " << cond << " exceeds 1e8 (exceptional point?)";
    throw Error(ErrorCode::DefectiveMatrix, msg.str());
  }
  s.transform = s.inverse_transform.partialPivLu().inverse();
  return s;
}

Eigen::VectorXcd equilibrium_state(const ModeNetwork& net, const Eigen::VectorXcd& drive) {
  if (drive.size() != net.n_modes()) {
    throw Error(ErrorCode::DimensionMismatch, "drive vector length differs from mode count");
  }
  const int n = net.n_modes();
  if (drive.isZero(0.0)) return Eigen::VectorXcd::Zero(n);
  const Eigen::FullPivLU<Eigen::MatrixXcd> lu(net.omega());
  if (!lu.isInvertible() || lu.rcond() < 1e-14) {
    throw Error(ErrorCode::SingularOmega, "Omega is singular (lossless mode on resonance)");
  }
  return kI * lu.solve(drive);
}

Eigen::VectorXcd equilibrium_state(const ModeNetwork& net, cplx eps) {
  return equilibrium_state(net, (net.drive_coupling() * eps).eval());
}

double adiabatic_timescale(double delta, double kappa) {
  if (!(kappa > 0.0)) throw Error(ErrorCode::InvalidArgument, "kappa must be positive");
  return 1.0 / std::min(std::sqrt(delta * delta + 0.25 * kappa * kappa), kappa);
}

}  // namespace staforge
