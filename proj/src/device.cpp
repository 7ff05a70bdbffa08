#include "staforge/device.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include "staforge/error.hpp"
#include "staforge/hybridizer.hpp"

namespace staforge {

namespace {

// Eigenvalues of one block, resonator-like (lower frequency) first.
std::array<cplx, 2> block_eigenvalues(const BlockParams& b) {
  const cplx a(b.delta_a, -b.kappa_a / 2.0);
  const cplx half_sum = 0.5 * (a + b.delta_b);
  const cplx root = std::sqrt(0.25 * (a - b.delta_b) * (a - b.delta_b) + b.j * b.j);
  cplx l1 = half_sum - root;
  cplx l2 = half_sum + root;
  if (l1.real() > l2.real()) std::swap(l1, l2);
  return {l1, l2};
}

// Relative mismatch: frequencies against the table detuning, linewidths as lifetimes.
std::array<double, 4> block_residual(const std::array<cplx, 2>& got, const HybridPair& want) {
  const std::array<cplx, 2> w{want.resonator, want.filter};
  std::array<double, 4> r{};
  for (int i = 0; i < 2; ++i) {
    r[2 * i] = (got[i].real() - w[i].real()) / std::abs(w[i].real());
    r[2 * i + 1] = (got[i].imag() - w[i].imag()) / std::abs(w[i].imag());
  }
  return r;
}

struct SharedFunctor {
  using Scalar = double;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;

  DeviceTable table;
  explicit SharedFunctor(const DeviceTable& t) : table(t) {}
  int inputs() const { return 5; }
  int values() const { return 8; }

  // x = (delta_a, delta_b0, delta_b1, j, kappa_a)
  int operator()(const InputType& x, ValueType& f) const {
    for (int q = 0; q < 2; ++q) {
      const BlockParams b{x(0), x(4), x(1 + q), x(3)};
      const auto r = block_residual(block_eigenvalues(b), table.block(q));
      for (int i = 0; i < 4; ++i) f(4 * q + i) = r[i];
    }
    return 0;
  }
};

}  // namespace

HybridPair DeviceTable::block(int q) const {
  const auto detuning = [&](double f_ghz) {
    return units::ghz_to_rad_per_ns(f_ghz - drive_freq_ghz);
  };
  return HybridPair{
      cplx(detuning(resonator_freq_ghz[q]), -0.5 / resonator_lifetime_ns[q]),
      cplx(detuning(filter_freq_ghz[q]), -0.5 / filter_lifetime_ns[q]),
  };
}

BlockParams invert_block(const HybridPair& pair) {
  // trace = Da + Db - i ka/2 and det = (Da - i ka/2) Db - J^2 determine the block.
  const cplx s = pair.resonator + pair.filter;
  const cplx p = pair.resonator * pair.filter;
  BlockParams b;
  b.kappa_a = -2.0 * s.imag();
  if (!(b.kappa_a > 0.0)) {
    throw Error(ErrorCode::CalibrationInfeasible, "hybrid linewidths must sum to a positive kappa_a");
  }
  b.delta_b = -2.0 * p.imag() / b.kappa_a;
  b.delta_a = s.real() - b.delta_b;
  const double j2 = b.delta_a * b.delta_b - p.real();
  if (!(j2 >= 0.0)) {
    std::ostringstream msg;
    msg << "hybrid pair requires J^2 = " << j2 << " < 0";
    throw Error(ErrorCode::CalibrationInfeasible, msg.str());
  }
  b.j = std::sqrt(j2);
  return b;
}

ModeNetwork block_network(const std::array<BlockParams, 2>& blocks) {
  Eigen::MatrixXcd omega = Eigen::MatrixXcd::Zero(4, 4);
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(4);
  for (int q = 0; q < 2; ++q) {
    const int a = filter_index(q);
    const int b = resonator_index(q);
    omega(a, a) = cplx(blocks[q].delta_a, -blocks[q].kappa_a / 2.0);
    omega(b, b) = blocks[q].delta_b;
    omega(a, b) = blocks[q].j;
    omega(b, a) = blocks[q].j;
    c(a) = 1.0;
  }
  return ModeNetwork(omega, c);
}

SharedFit fit_shared_device(const DeviceTable& table) {
  SharedFunctor functor(table);
  Eigen::NumericalDiff<SharedFunctor> numdiff(functor);
  Eigen::LevenbergMarquardt<Eigen::NumericalDiff<SharedFunctor>> lm(numdiff);
  lm.parameters.xtol = 1e-14;
  lm.parameters.ftol = 1e-14;
  lm.parameters.maxfev = 20000;

  // Start from the nominal coupling and the per-block exact solutions.
  const BlockParams b0 = invert_block(table.block(0));
  const BlockParams b1 = invert_block(table.block(1));
  Eigen::VectorXd x(5);
  x << 0.5 * (b0.delta_a + b1.delta_a), b0.delta_b, b1.delta_b,
      units::mhz_to_rad_per_ns(table.nominal_j_mhz), units::mhz_to_rad_per_ns(table.nominal_kappa_a_mhz);
  lm.minimize(x);

  SharedFit fit;
  fit.delta_a = x(0);
  fit.delta_b = {x(1), x(2)};
  fit.j = x(3);
  fit.kappa_a = x(4);
  Eigen::VectorXd f(8);
  functor(x, f);
  fit.max_relative_residual = f.cwiseAbs().maxCoeff();
  return fit;
}

DeviceCalibration calibrate_device(const DeviceTable& table) {
  DeviceCalibration cal;
  cal.blocks = {invert_block(table.block(0)), invert_block(table.block(1))};
  cal.network = validate_network(block_network(cal.blocks));
  double worst = 0.0;
  for (int q = 0; q < 2; ++q) {
    const auto r = block_residual(block_eigenvalues(cal.blocks[q]), table.block(q));
    for (double v : r) worst = std::max(worst, std::abs(v));
  }
  cal.max_relative_residual = worst;
  cal.shared = fit_shared_device(table);
  return cal;
}

ModeNetwork paper_device() {
  const DeviceTable table;
  std::array<BlockParams, 2> blocks{invert_block(table.block(0)), invert_block(table.block(1))};
  for (int q = 0; q < 2; ++q) {
    const auto r = block_residual(block_eigenvalues(blocks[q]), table.block(q));
    for (double v : r) {
      if (std::abs(v) > 1e-6) {
        throw Error(ErrorCode::CalibrationInfeasible, "bare parameters do not reproduce the table");
      }
    }
  }
  return validate_network(block_network(blocks));
}

}  // namespace staforge
