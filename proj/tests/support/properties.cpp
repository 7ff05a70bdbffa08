#include "properties.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "staforge/langevin.hpp"
#include "staforge/mmoc.hpp"
#include "staforge/qsl.hpp"

namespace props {

using staforge::cplx;
using staforge::ModeNetwork;
using staforge::Pulse;

namespace {

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); }
  cplx gauss() {
    std::normal_distribution<double> n(0.0, 1.0);
    return {n(gen), n(gen)};
  }
  Eigen::VectorXcd vec(int n) {
    Eigen::VectorXcd v(n);
    for (int i = 0; i < n; ++i) v(i) = gauss();
    return v;
  }
};

// Passive network on paper-like scales: detunings within +-2pi x 20 MHz,
// linewidths 1/100 to 1/10 per ns, couplings up to 2pi x 12 MHz.
ModeNetwork random_network(Rng& r, int n) {
  Eigen::MatrixXcd om = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) om(i, i) = cplx(r.uniform(-0.12, 0.12), -0.5 * r.uniform(0.01, 0.1));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const cplx c = 0.075 * r.uniform(0.0, 1.0) * std::polar(1.0, r.uniform(0.0, 6.283185307179586));
      om(i, j) = c;
      om(j, i) = std::conj(c);
    }
  }
  return ModeNetwork(om, r.vec(n));
}

// Pairs of pulses of the same family so they can be superposed.
std::pair<Pulse, Pulse> random_pulse_pair(Rng& r, double t0, double tf) {
  switch (r.integer(0, 2)) {
    case 0: {
      const int m = r.integer(1, 12);
      std::vector<cplx> a(m), b(m);
      for (int j = 0; j < m; ++j) {
        a[j] = r.gauss();
        b[j] = r.gauss();
      }
      return {Pulse::uniform_sections(t0, tf, a, r.gauss(), r.gauss()),
              Pulse::uniform_sections(t0, tf, b, r.gauss(), r.gauss())};
    }
    case 1: {
      const double dt = (tf - t0) / r.integer(8, 40);
      const auto count = static_cast<std::size_t>(std::llround((tf - t0) / dt)) + 1;
      std::vector<cplx> a(count), b(count);
      for (std::size_t k = 0; k < count; ++k) {
        a[k] = r.gauss();
        b[k] = r.gauss();
      }
      return {Pulse::sampled(t0, dt, a, a.front(), a.back()),
              Pulse::sampled(t0, dt, b, b.front(), b.back())};
    }
    default: {
      const double len = r.uniform(5.0, tf);
      return {staforge::reference_library(staforge::ReferenceShape::Sin2Ramp, r.gauss(), len),
              staforge::reference_library(staforge::ReferenceShape::Sin2Ramp, r.gauss(), len)};
    }
  }
}

double max_norm(const staforge::Trace& t) {
  double m = 0.0;
  for (const auto& a : t.alphas) m = std::max(m, a.norm());
  return m;
}

void record(SuiteResult& s, double metric) {
  ++s.instances;
  s.worst = std::max(s.worst, metric);
  if (!(metric <= s.tolerance)) ++s.failures;
}

}  // namespace

SuiteResult propagate_linearity(int instances, std::uint64_t seed) {
  SuiteResult s{"propagate linearity", 0, 0, 0.0, 1e-12};
  Rng r(seed);
  for (int it = 0; it < instances; ++it) {
    const int n = r.integer(1, 4);
    const ModeNetwork net = random_network(r, n);
    const double tf = r.uniform(10.0, 120.0);
    auto [p, q] = random_pulse_pair(r, 0.0, tf);
    const cplx a = r.gauss(), b = r.gauss();
    const Eigen::VectorXcd x = r.vec(n), y = r.vec(n);
    const auto times = staforge::uniform_grid(-5.0, tf + 20.0, 37);
    const auto tp = staforge::propagate(net, p, x, times);
    const auto tq = staforge::propagate(net, q, y, times);
    const auto tc = staforge::propagate(net, Pulse::combine(a, p, b, q), a * x + b * y, times);
    const double scale = std::max({std::abs(a) * max_norm(tp), std::abs(b) * max_norm(tq), 1e-300});
    double err = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
      err = std::max(err, (tc.alphas[k] - a * tp.alphas[k] - b * tq.alphas[k]).norm());
    }
    record(s, err / scale);
  }
  return s;
}

SuiteResult propagate_semigroup(int instances, std::uint64_t seed) {
  SuiteResult s{"propagate semigroup", 0, 0, 0.0, 1e-12};
  Rng r(seed);
  for (int it = 0; it < instances; ++it) {
    const int n = r.integer(1, 4);
    const ModeNetwork net = random_network(r, n);
    const double tf = r.uniform(10.0, 120.0);
    const Pulse p = random_pulse_pair(r, 0.0, tf).first;
    const Eigen::VectorXcd x = r.vec(n);
    const double t1 = r.uniform(0.0, tf);
    const double t2 = r.uniform(t1, tf + 30.0);
    const auto direct = staforge::propagate(net, p, x, {0.0, t2});
    const auto first = staforge::propagate(net, p, x, {0.0, t1});
    const auto second = staforge::propagate(net, p, first.alphas.back(), {t1, t2});
    const double scale = std::max(direct.alphas.back().norm(), x.norm());
    record(s, (second.alphas.back() - direct.alphas.back()).norm() / scale);
  }
  return s;
}

SuiteResult propagate_contraction(int instances, std::uint64_t seed) {
  // Metric: largest relative norm increase between consecutive grid points.
  // Exact arithmetic gives zero; allow roundoff.
  SuiteResult s{"propagate contraction", 0, 0, 0.0, 1e-13};
  Rng r(seed);
  for (int it = 0; it < instances; ++it) {
    const int n = r.integer(1, 4);
    const ModeNetwork net = random_network(r, n);
    const auto times = staforge::uniform_grid(0.0, r.uniform(10.0, 400.0), 60);
    const auto t = staforge::propagate(net, Pulse::constant(0.0), r.vec(n), times);
    double growth = 0.0;
    for (std::size_t k = 1; k < t.size(); ++k) {
      growth = std::max(growth, (t.alphas[k].norm() - t.alphas[k - 1].norm()) / t.alphas[0].norm());
    }
    record(s, growth);
  }
  return s;
}

SuiteResult svd_residual_and_null_space(int instances, std::uint64_t seed) {
  // Metric: worst ratio to budget over residual (1e-10 of |y|), null-basis
  // orthonormality (1e-12) and orthogonality to the essential part (1e-12).
  SuiteResult s{"svd residual and null space", 0, 0, 0.0, 1.0};
  Rng r(seed);
  for (int it = 0; it < instances; ++it) {
    const int n = r.integer(1, 5);
    const int m = r.integer(n, 24);
    Eigen::MatrixXcd g(n, m);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < m; ++j) g(i, j) = r.gauss();
    }
    const Eigen::VectorXcd y = r.vec(n);
    const auto sol = staforge::svd_solve(g, y);
    double res = (g * sol.essential - y).norm() / y.norm();
    for (int trial = 0; trial < 3; ++trial) {
      auto moved = sol;
      moved.free_params = 10.0 * r.vec(m - n);
      res = std::max(res, (g * moved.sections() - y).norm() / y.norm());
    }
    double ratio = res / 1e-10;
    if (m > n) {
      const Eigen::MatrixXcd gram = sol.null_basis.adjoint() * sol.null_basis;
      const double ortho = (gram - Eigen::MatrixXcd::Identity(m - n, m - n)).cwiseAbs().maxCoeff();
      const double perp = (sol.null_basis.adjoint() * sol.essential).cwiseAbs().maxCoeff() /
                          std::max(sol.essential.norm(), 1e-300);
      ratio = std::max({ratio, ortho / 1e-12, perp / 1e-12});
    }
    record(s, ratio);
  }
  return s;
}

SuiteResult efficiency_bound(int instances, std::uint64_t seed) {
  SuiteResult s{"efficiency below max_efficiency", 0, 0, 0.0, 1e-9};
  Rng r(seed);
  for (int it = 0; it < instances; ++it) {
    const double delta = r.uniform(-0.1, 0.1);
    const double kappa = r.uniform(0.005, 0.1);
    const ModeNetwork net = ModeNetwork::single_mode(delta, kappa);
    const double tf = r.uniform(10.0, 300.0);
    const Pulse p = random_pulse_pair(r, 0.0, tf).first;
    const auto trace = staforge::propagate(net, p, Eigen::VectorXcd::Zero(1),
                                           staforge::uniform_grid(0.0, tf + r.uniform(0.0, 100.0), 400));
    const auto path = trace.mode(0);
    const double d = std::abs(path.back() - path.front());
    if (d < 1e-9) continue;
    record(s, staforge::quantum_efficiency(path) - staforge::max_efficiency(d));
  }
  return s;
}

}  // namespace props
