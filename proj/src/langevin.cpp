#include "staforge/langevin.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include <unsupported/Eigen/MatrixFunctions>

#include "staforge/error.hpp"

namespace staforge {

namespace {

constexpr int kNodes = 5;

// Gauss-Legendre nodes on [0, 1].
constexpr std::array<double, kNodes> kTau{
    0.5 - 0.5 * 0.9061798459386639928, 0.5 - 0.5 * 0.5384693101056830910, 0.5,
    0.5 + 0.5 * 0.5384693101056830910, 0.5 + 0.5 * 0.9061798459386639928};

// Exact one-step maps for a fixed step h.
struct StepMaps {
  Eigen::MatrixXcd propagator;                    // exp(-i Omega h)
  Eigen::VectorXcd constant_drive;                // integral_0^h exp(-i Omega s) ds c
  std::array<Eigen::VectorXcd, kNodes> weights;   // integral of exp(-i Omega (h-s)) L_i(s/h) c
};

class StepCache {
 public:
  StepCache(const ModeNetwork& net, bool smooth) : net_(net), smooth_(smooth) {
    if (smooth_) {
      // Monomial coefficients of the Lagrange basis: L_i(tau) = sum_k lagrange_(k, i) tau^k.
      Eigen::MatrixXd vander(kNodes, kNodes);
      for (int i = 0; i < kNodes; ++i) {
        for (int k = 0; k < kNodes; ++k) vander(i, k) = std::pow(kTau[i], k);
      }
      lagrange_ = vander.inverse();
    }
  }

  const StepMaps& get(double h) {
    auto it = cache_.find(h);
    if (it != cache_.end()) return it->second;
    if (cache_.size() > 4096) cache_.clear();
    return cache_.emplace(h, build(h)).first->second;
  }

 private:
  StepMaps build(double h) const {
    const int n = net_.n_modes();
    const int extra = smooth_ ? kNodes : 1;
    // exp([[-i Omega h, h c e_0^T], [0, N]]) with N the nilpotent shift: column
    // n + k of the top block is integral_0^h exp(-i Omega (h - s)) c (s/h)^k / k! ds.
    // No inverse of Omega is involved, so singular Omega needs no special case.
    Eigen::MatrixXcd aug = Eigen::MatrixXcd::Zero(n + extra, n + extra);
    aug.topLeftCorner(n, n) = -kI * net_.omega() * h;
    aug.block(0, n, n, 1) = net_.drive_coupling() * h;
    for (int k = 0; k + 1 < extra; ++k) aug(n + k, n + k + 1) = 1.0;
    const Eigen::MatrixXcd e = aug.exp();
    StepMaps maps;
    maps.propagator = e.topLeftCorner(n, n);
    maps.constant_drive = e.block(0, n, n, 1);
    if (smooth_) {
      double factorial = 1.0;
      std::array<Eigen::VectorXcd, kNodes> moments;
      for (int k = 0; k < kNodes; ++k) {
        if (k > 0) factorial *= k;
        moments[k] = e.block(0, n + k, n, 1) * factorial;  // integral of (s/h)^k
      }
      for (int i = 0; i < kNodes; ++i) {
        maps.weights[i] = Eigen::VectorXcd::Zero(n);
        for (int k = 0; k < kNodes; ++k) maps.weights[i] += lagrange_(k, i) * moments[k];
      }
    }
    return maps;
  }

  const ModeNetwork& net_;
  bool smooth_;
  Eigen::MatrixXd lagrange_;
  std::map<double, StepMaps> cache_;
};

}  // namespace

std::vector<double> uniform_grid(double t0, double t1, std::size_t points) {
  if (points < 2) return {t0};
  std::vector<double> g(points);
  const double h = (t1 - t0) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) g[i] = t0 + h * static_cast<double>(i);
  g.back() = t1;
  return g;
}

Trace propagate(const ModeNetwork& net, const Pulse& pulse, const Eigen::VectorXcd& alpha0,
                const std::vector<double>& times, const PropagateOptions& options) {
  if (alpha0.size() != net.n_modes()) {
    throw Error(ErrorCode::DimensionMismatch, "alpha0 length differs from mode count");
  }
  if (times.empty()) throw Error(ErrorCode::InvalidArgument, "empty time grid");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] >= times[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "time grid must be non-decreasing");
    }
  }

  const bool piecewise = pulse.kind() == PulseKind::PiecewiseConstant;
  double h_max = options.max_step;
  if (pulse.kind() == PulseKind::Sampled) {
    h_max = std::min(h_max, pulse.dt() / std::max(1, options.substeps_per_sample));
  } else {
    h_max = std::min(h_max, pulse.variation_timescale() / options.steps_per_timescale);
  }
  StepCache cache(net, !piecewise);

  // Every breakpoint inside the grid span becomes a step boundary.
  std::vector<double> breaks;
  for (double b : pulse.breakpoints()) {
    if (b > times.front() && b < times.back()) breaks.push_back(b);
  }
  std::sort(breaks.begin(), breaks.end());

  Trace trace;
  trace.times = times;
  trace.alphas.reserve(times.size());
  Eigen::VectorXcd alpha = alpha0;
  trace.alphas.push_back(alpha);

  std::size_t next_break = 0;
  auto advance = [&](double a, double b) {
    const double len = b - a;
    if (!(len > 0.0)) return;
    if (piecewise) {
      const cplx eps = pulse.value(0.5 * (a + b));
      const StepMaps& s = cache.get(len);
      alpha = s.propagator * alpha - eps * s.constant_drive;
      return;
    }
    const double k = std::isfinite(h_max) ? std::ceil(len / h_max - 1e-9) : 1.0;
    const long steps = std::max(1L, static_cast<long>(k));
    const double h = len / static_cast<double>(steps);
    const StepMaps& s = cache.get(h);
    for (long i = 0; i < steps; ++i) {
      const double t = a + h * static_cast<double>(i);
      Eigen::VectorXcd forced = Eigen::VectorXcd::Zero(alpha.size());
      for (int q = 0; q < kNodes; ++q) forced += pulse.value(t + kTau[q] * h) * s.weights[q];
      alpha = s.propagator * alpha - forced;
    }
  };

  for (std::size_t i = 1; i < times.size(); ++i) {
    double a = times[i - 1];
    const double b = times[i];
    while (next_break < breaks.size() && breaks[next_break] <= a) ++next_break;
    while (next_break < breaks.size() && breaks[next_break] < b) {
      advance(a, breaks[next_break]);
      a = breaks[next_break];
      ++next_break;
    }
    advance(a, b);
    if (!alpha.allFinite()) throw Error(ErrorCode::InvalidArgument, "propagation diverged");
    trace.alphas.push_back(alpha);
  }
  return trace;
}

std::vector<double> diabatic_residual(const ModeNetwork& net, const Pulse& pulse,
                                      const std::vector<double>& times,
                                      const std::optional<Pulse>& reference,
                                      const PropagateOptions& options) {
  if (net.n_modes() != 1) {
    throw Error(ErrorCode::DimensionMismatch, "diabatic_residual needs a single-mode network");
  }
  const Pulse& target = reference ? *reference : pulse;
  const cplx denom = net.omega()(0, 0) / net.drive_coupling()(0);
  if (std::abs(denom) == 0.0) {
    throw Error(ErrorCode::SingularOmega, "lossless resonant mode has no equilibrium");
  }
  auto equilibrium = [&](double t) { return kI * target.value(t) / denom; };

  Eigen::VectorXcd alpha0(1);
  alpha0(0) = equilibrium(times.front());
  const Trace tr = propagate(net, pulse, alpha0, times, options);
  std::vector<double> out(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    out[i] = std::abs(tr.alphas[i](0) - equilibrium(times[i]));
  }
  return out;
}

}  // namespace staforge
