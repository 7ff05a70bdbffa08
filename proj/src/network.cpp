#include "staforge/network.hpp"

#include <cmath>
#include <sstream>

#include "staforge/error.hpp"

namespace staforge {

ModeNetwork::ModeNetwork(Eigen::MatrixXcd omega, Eigen::VectorXcd drive_coupling)
    : omega_(std::move(omega)), drive_coupling_(std::move(drive_coupling)) {}

ModeNetwork ModeNetwork::single_mode(double delta, double kappa, cplx coupling) {
  Eigen::MatrixXcd omega(1, 1);
  omega(0, 0) = cplx(delta, -kappa / 2.0);
  Eigen::VectorXcd c(1);
  c(0) = coupling;
  return ModeNetwork(omega, c);
}

ModeNetwork ModeNetwork::with_detuning_offset(double offset) const {
  Eigen::MatrixXcd omega = omega_;
  for (int i = 0; i < n_modes(); ++i) omega(i, i) += offset;
  return ModeNetwork(omega, drive_coupling_);
}

ModeNetwork ModeNetwork::subnetwork(std::span<const int> modes) const {
  const int k = static_cast<int>(modes.size());
  Eigen::MatrixXcd omega(k, k);
  Eigen::VectorXcd c(k);
  for (int a = 0; a < k; ++a) {
    if (modes[a] < 0 || modes[a] >= n_modes()) {
      throw Error(ErrorCode::DimensionMismatch, "subnetwork index out of range");
    }
    c(a) = drive_coupling_(modes[a]);
    for (int b = 0; b < k; ++b) omega(a, b) = omega_(modes[a], modes[b]);
  }
  return ModeNetwork(omega, c);
}

ModeNetwork validate_network(const ModeNetwork& net) {
  const auto& om = net.omega();
  const int n = static_cast<int>(om.rows());
  if (n < 1 || om.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "omega must be a non-empty square matrix");
  }
  if (net.drive_coupling().size() != n) {
    std::ostringstream msg;
    msg << "drive_coupling has length " << net.drive_coupling().size() << ", expected " << n;
    throw Error(ErrorCode::DimensionMismatch, msg.str());
  }
  if (!om.allFinite() || !net.drive_coupling().allFinite()) {
    throw Error(ErrorCode::InvalidArgument, "network contains non-finite entries");
  }
  const double scale = std::max(om.cwiseAbs().maxCoeff(), 1e-300);
  const double tol = 1e-12 * scale;
  for (int i = 0; i < n; ++i) {
    if (om(i, i).imag() > 0.0) {
      std::ostringstream msg;
      msg << "mode " << i << " has gain (Im Omega_ii = " << om(i, i).imag() << " > 0)";
      throw Error(ErrorCode::NonPassive, msg.str());
    }
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(om(i, j) - std::conj(om(j, i))) > tol) {
        std::ostringstream msg;
        msg << "coupling (" << i << "," << j << ") is not Hermitian";
        throw Error(ErrorCode::NonHermitianCoupling, msg.str());
      }
    }
  }
  return net;
}

std::vector<cplx> Trace::mode(int k) const {
  std::vector<cplx> out;
  out.reserve(alphas.size());
  for (const auto& a : alphas) out.push_back(a(k));
  return out;
}

}  // namespace staforge
