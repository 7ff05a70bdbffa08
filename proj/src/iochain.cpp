#include "staforge/iochain.hpp"

#include <cmath>

#include <boost/math/tools/minima.hpp>

#include "staforge/error.hpp"
#include "staforge/hybridizer.hpp"

namespace staforge {

namespace {

cplx reflected(const IoChainParams& p) { return p.gamma * std::exp(2.0 * kI * p.theta); }

cplx leak_field(const ModeNetwork& net, const Eigen::VectorXcd& alpha) {
  return net.drive_coupling().dot(alpha);  // c^H alpha
}

cplx s21_at(const ModeNetwork& net, const IoChainParams& p, double w) {
  const Eigen::VectorXcd alpha = equilibrium_state(net.with_detuning_offset(-w), cplx(1.0));
  return output_field(p, 1.0, leak_field(net, alpha)) * std::sqrt(p.kappa_a) / 2.0;
}

}  // namespace

IoChainParams IoChainParams::paper(double kappa_a) {
  return IoChainParams{cplx(0.98, -0.17), 0.05, kappa_a, cplx(1.0)};
}

void validate(const IoChainParams& p) {
  if (std::abs(p.gamma) > 1.0 + 1e-12) {
    throw Error(ErrorCode::InvalidArgument, "|Gamma| must not exceed 1 (passive reflector)");
  }
  if (!(p.kappa_a > 0.0)) throw Error(ErrorCode::InvalidArgument, "kappa_a must be positive");
}

EffectiveParams effective_params(const IoChainParams& p, double delta_a) {
  validate(p);
  const cplx g = reflected(p);
  if (1.0 + g.real() <= 0.0) {
    throw Error(ErrorCode::ZeroEffectiveKappa, "1 + Re(Gamma e^{2i theta}) must be positive");
  }
  EffectiveParams e;
  e.delta_a_eff = delta_a + g.imag() * p.kappa_a / 4.0;
  e.kappa_a_eff = p.kappa_a * (1.0 + g.real()) / 2.0;
  // eps = sqrt(kt) * a_in_eff with a_in_eff = sqrt(ka) (1 - Gamma) e^{i theta} c / (2 sqrt(kt)).
  e.drive_scale = std::sqrt(p.kappa_a) * (1.0 - p.gamma) * std::exp(kI * p.theta) / 2.0;
  return e;
}

double bare_kappa_from_effective(cplx gamma, double theta, double kappa_eff) {
  const cplx g = gamma * std::exp(2.0 * kI * theta);
  if (1.0 + g.real() <= 0.0) {
    throw Error(ErrorCode::ZeroEffectiveKappa, "1 + Re(Gamma e^{2i theta}) must be positive");
  }
  return 2.0 * kappa_eff / (1.0 + g.real());
}

cplx output_field(const IoChainParams& p, cplx eps, cplx a_field) {
  const double root = std::sqrt(p.kappa_a);
  return 2.0 * eps / root + p.leak_scale * (1.0 + reflected(p)) / 2.0 * root * a_field;
}

std::vector<cplx> output_trace(const ModeNetwork& net, const IoChainParams& p,
                               const std::vector<double>& times, const std::vector<cplx>& drive,
                               const std::vector<Eigen::VectorXcd>& alphas) {
  if (drive.size() != times.size() || alphas.size() != times.size()) {
    throw Error(ErrorCode::DimensionMismatch, "times, drive and alphas must have equal length");
  }
  validate(p);
  std::vector<cplx> out(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    out[i] = output_field(p, drive[i], leak_field(net, alphas[i]));
  }
  return out;
}

std::vector<cplx> s21_spectrum(const ModeNetwork& net, const IoChainParams& p,
                               const std::vector<double>& omega_grid) {
  validate_network(net);
  validate(p);
  std::vector<cplx> out(omega_grid.size());
  for (std::size_t i = 0; i < omega_grid.size(); ++i) out[i] = s21_at(net, p, omega_grid[i]);
  return out;
}

std::vector<double> s21_dips(const ModeNetwork& net, const IoChainParams& p,
                             const std::vector<double>& omega_grid) {
  const auto s = s21_spectrum(net, p, omega_grid);
  std::vector<double> dips;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    const double v = std::abs(s[i]);
    if (v < std::abs(s[i - 1]) && v <= std::abs(s[i + 1])) {
      auto mag = [&](double w) { return std::abs(s21_at(net, p, w)); };
      const auto r = boost::math::tools::brent_find_minima(mag, omega_grid[i - 1], omega_grid[i + 1], 50);
      dips.push_back(r.first);
    }
  }
  return dips;
}

std::vector<cplx> low_pass(const std::vector<double>& times, const std::vector<cplx>& signal,
                           double tau) {
  if (times.size() != signal.size()) {
    throw Error(ErrorCode::DimensionMismatch, "times and signal must have equal length");
  }
  if (tau <= 0.0 || signal.empty()) return signal;
  std::vector<cplx> out(signal.size());
  out[0] = signal[0];
  for (std::size_t i = 1; i < signal.size(); ++i) {
    const double h = times[i] - times[i - 1];
    const cplx slope = h > 0.0 ? (signal[i] - signal[i - 1]) / h : cplx(0.0);
    const double decay = std::exp(-h / tau);
    out[i] = signal[i] - slope * tau + (out[i - 1] - signal[i - 1] + slope * tau) * decay;
  }
  return out;
}

}  // namespace staforge
