#include "staforge/fockoracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include "staforge/error.hpp"
#include "staforge/langevin.hpp"
#include "staforge/network.hpp"

namespace staforge {

namespace {

using Eigen::MatrixXcd;

// Right-hand side of the master equation using the ladder structure of a,
// O(dim^2) per call.
void lindblad_rhs(const MatrixXcd& rho, cplx eps, double delta, double kappa,
                  const std::vector<double>& sq, MatrixXcd& out) {
  const int d = static_cast<int>(rho.rows());
  for (int n = 0; n < d; ++n) {
    for (int m = 0; m < d; ++m) {
      const cplx r = rho(m, n);
      // -i delta [n, rho]
      cplx v = -kI * delta * static_cast<double>(m - n) * r;
      // -(eps [a^dag, rho] - eps^* [a, rho])
      cplx adag_rho = m > 0 ? sq[m] * rho(m - 1, n) : cplx(0.0);
      cplx rho_adag = n + 1 < d ? rho(m, n + 1) * sq[n + 1] : cplx(0.0);
      cplx a_rho = m + 1 < d ? sq[m + 1] * rho(m + 1, n) : cplx(0.0);
      cplx rho_a = n > 0 ? rho(m, n - 1) * sq[n] : cplx(0.0);
      v -= eps * (adag_rho - rho_adag) - std::conj(eps) * (a_rho - rho_a);
      // kappa (a rho a^dag - {n, rho}/2)
      if (kappa != 0.0) {
        const cplx jump = (m + 1 < d && n + 1 < d) ? sq[m + 1] * sq[n + 1] * rho(m + 1, n + 1)
                                                   : cplx(0.0);
        v += kappa * (jump - 0.5 * static_cast<double>(m + n) * r);
      }
      out(m, n) = v;
    }
  }
}

void check_state(const MatrixXcd& rho) {
  if (rho.rows() != rho.cols() || rho.rows() < 2) {
    throw Error(ErrorCode::DimensionMismatch, "rho0 must be square with dim >= 2");
  }
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
    throw Error(ErrorCode::InvalidArgument, "rho0 is not Hermitian");
  }
  if (std::abs(rho.trace() - 1.0) > 1e-10) {
    throw Error(ErrorCode::InvalidArgument, "rho0 does not have unit trace");
  }
  const Eigen::SelfAdjointEigenSolver<MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10) {
    throw Error(ErrorCode::InvalidArgument, "rho0 is not positive semidefinite");
  }
}

}  // namespace

int adequate_dimension(double n_max) {
  return static_cast<int>(std::ceil(n_max + 6.0 * std::sqrt(std::max(n_max, 0.0)) + 10.0));
}

std::vector<MatrixXcd> lindblad_evolve(const FockConfig& cfg, const Pulse& pulse,
                                       const MatrixXcd& rho0, const std::vector<double>& times,
                                       const LindbladOptions& options) {
  if (cfg.dim < 2 || rho0.rows() != cfg.dim) {
    throw Error(ErrorCode::DimensionMismatch, "rho0 must match the Fock dimension (>= 2)");
  }
  if (cfg.kappa < 0.0) throw Error(ErrorCode::InvalidArgument, "kappa must be non-negative");
  check_state(rho0);
  if (times.empty()) throw Error(ErrorCode::InvalidArgument, "empty time grid");

  const double delta = cfg.delta + cfg.kerr_shift;
  double h_max = options.max_step;
  if (cfg.kappa > 0.0) h_max = std::min(h_max, 0.01 / cfg.kappa);
  if (delta != 0.0) h_max = std::min(h_max, 0.01 / std::abs(delta));
  if (pulse.kind() == PulseKind::Sampled) h_max = std::min(h_max, pulse.dt() / 4.0);
  const bool piecewise = pulse.kind() == PulseKind::PiecewiseConstant;

  const int d = cfg.dim;
  std::vector<double> sq(static_cast<std::size_t>(d) + 1);
  for (int i = 0; i <= d; ++i) sq[i] = std::sqrt(static_cast<double>(i));

  std::vector<double> breaks;
  for (double b : pulse.breakpoints()) {
    if (b > times.front() && b < times.back()) breaks.push_back(b);
  }
  std::sort(breaks.begin(), breaks.end());

  MatrixXcd rho = rho0;
  MatrixXcd k1(d, d), k2(d, d), k3(d, d), k4(d, d), tmp(d, d);
  auto check_top = [&](double t) {
    const double top = rho(d - 1, d - 1).real() + rho(d - 2, d - 2).real();
    if (top > options.truncation_tolerance) {
      std::ostringstream msg;
      msg << "top two Fock levels hold " << top << " at t = " << t << " ns (dim " << d << ")";
      throw Error(ErrorCode::TruncationBreach, msg.str());
    }
  };
  auto advance = [&](double a, double b) {
    const double len = b - a;
    if (!(len > 0.0)) return;
    const long steps = std::max(1L, static_cast<long>(std::ceil(len / h_max - 1e-9)));
    const double h = len / static_cast<double>(steps);
    const cplx mid_value = pulse.value(0.5 * (a + b));
    auto eps_at = [&](double t) { return piecewise ? mid_value : pulse.value(t); };
    for (long s = 0; s < steps; ++s) {
      const double t = a + h * static_cast<double>(s);
      const cplx e0 = eps_at(t);
      const cplx e1 = eps_at(t + 0.5 * h);
      const cplx e2 = eps_at(t + h);
      lindblad_rhs(rho, e0, delta, cfg.kappa, sq, k1);
      tmp = rho + 0.5 * h * k1;
      lindblad_rhs(tmp, e1, delta, cfg.kappa, sq, k2);
      tmp = rho + 0.5 * h * k2;
      lindblad_rhs(tmp, e1, delta, cfg.kappa, sq, k3);
      tmp = rho + h * k3;
      lindblad_rhs(tmp, e2, delta, cfg.kappa, sq, k4);
      rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      check_top(t + h);
    }
  };

  std::vector<MatrixXcd> out;
  out.reserve(times.size());
  out.push_back(rho);
  std::size_t next_break = 0;
  for (std::size_t i = 1; i < times.size(); ++i) {
    double a = times[i - 1];
    const double b = times[i];
    while (next_break < breaks.size() && breaks[next_break] <= a) ++next_break;
    while (next_break < breaks.size() && breaks[next_break] < b) {
      advance(a, breaks[next_break]);
      a = breaks[next_break++];
    }
    advance(a, b);
    out.push_back(rho);
  }
  return out;
}

MatrixXcd vacuum(int dim) {
  MatrixXcd rho = MatrixXcd::Zero(dim, dim);
  rho(0, 0) = 1.0;
  return rho;
}

Eigen::VectorXcd coherent_state(int dim, cplx alpha) {
  Eigen::VectorXcd v(dim);
  v(0) = std::exp(-0.5 * std::norm(alpha));
  for (int n = 1; n < dim; ++n) v(n) = v(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  return v;
}

MatrixXcd coherent_density(int dim, cplx alpha) {
  const Eigen::VectorXcd v = coherent_state(dim, alpha);
  return v * v.adjoint();
}

cplx expectation_a(const MatrixXcd& rho) {
  // <a> = Tr(a rho) = sum_n sqrt(n+1) rho(n+1, n)
  cplx s = 0.0;
  for (int n = 0; n + 1 < rho.rows(); ++n) s += std::sqrt(n + 1.0) * rho(n + 1, n);
  return s;
}

double mean_photon_number(const MatrixXcd& rho) {
  double s = 0.0;
  for (int n = 0; n < rho.rows(); ++n) s += n * rho(n, n).real();
  return s;
}

double purity(const MatrixXcd& rho) { return (rho * rho).trace().real(); }

double coherent_fidelity(const MatrixXcd& rho, cplx alpha) {
  const Eigen::VectorXcd v = coherent_state(static_cast<int>(rho.rows()), alpha);
  return v.dot(rho * v).real();
}

double top_level_population(const MatrixXcd& rho) {
  const auto d = rho.rows();
  return rho(d - 1, d - 1).real() + rho(d - 2, d - 2).real();
}

MatrixXcd liouvillian(const FockConfig& cfg) {
  const int d = cfg.dim;
  const double delta = cfg.delta + cfg.kerr_shift;
  MatrixXcd a = MatrixXcd::Zero(d, d);
  for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  const MatrixXcd num = a.adjoint() * a;
  const MatrixXcd id = MatrixXcd::Identity(d, d);
  const MatrixXcd H = delta * num;
  // vec(A rho B) = (B^T kron A) vec(rho) for column stacking.
  MatrixXcd L = -kI * (Eigen::kroneckerProduct(id, H).eval() -
                       Eigen::kroneckerProduct(H.transpose(), id).eval());
  L += cfg.kappa * Eigen::kroneckerProduct(a.conjugate(), a).eval();
  L -= 0.5 * cfg.kappa *
       (Eigen::kroneckerProduct(id, num).eval() + Eigen::kroneckerProduct(num.transpose(), id).eval());
  return L;
}

std::vector<SpectrumMatch> liouvillian_spectrum(const FockConfig& cfg, int j_max, int k_max) {
  if (j_max < 0 || k_max < 0) throw Error(ErrorCode::InvalidArgument, "negative j_max or k_max");
  if (cfg.dim < j_max + k_max + 5) {
    throw Error(ErrorCode::InvalidArgument, "dim must be at least j_max + k_max + 5");
  }
  const Eigen::ComplexEigenSolver<MatrixXcd> es(liouvillian(cfg), false);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::InvalidArgument, "Liouvillian eigen-solver did not converge");
  }
  const Eigen::VectorXcd ev = es.eigenvalues();
  std::vector<bool> used(static_cast<std::size_t>(ev.size()), false);
  const double delta = cfg.delta + cfg.kerr_shift;
  const double tol =
      cfg.kappa > 0.0 ? 1e-6 * cfg.kappa : 1e-9 * std::max(1.0, std::abs(delta));

  std::vector<SpectrumMatch> matches;
  for (int j = -j_max; j <= j_max; ++j) {
    for (int k = 0; k <= k_max; ++k) {
      const cplx predicted(0.0 - cfg.kappa * (0.5 * std::abs(j) + k), delta * j);
      std::ptrdiff_t best = -1;
      double best_dist = std::numeric_limits<double>::infinity();
      for (std::ptrdiff_t i = 0; i < ev.size(); ++i) {
        if (used[static_cast<std::size_t>(i)]) continue;
        const double dist = std::abs(ev(i) - predicted);
        if (dist < best_dist) {
          best_dist = dist;
          best = i;
        }
      }
      if (best < 0 || best_dist > tol) {
        std::ostringstream msg;
        msg << "no Liouvillian eigenvalue within " << tol << " of e_{" << j << "," << k
            << "} = " << predicted << " (nearest " << best_dist << ")";
        throw Error(ErrorCode::TruncationBreach, msg.str());
      }
      used[static_cast<std::size_t>(best)] = true;
      matches.push_back({j, k, predicted, ev(best)});
    }
  }
  return matches;
}

double displaced_frame_check(const FockConfig& cfg, const Pulse& pulse,
                             const std::vector<double>& times, const LindbladOptions& options) {
  const auto rhos = lindblad_evolve(cfg, pulse, vacuum(cfg.dim), times, options);
  const ModeNetwork net = ModeNetwork::single_mode(cfg.delta, cfg.kappa);
  const Trace mf = propagate(net, pulse, Eigen::VectorXcd::Zero(1), times);
  double worst = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    worst = std::max(worst, 1.0 - coherent_fidelity(rhos[i], mf.alphas[i](0)));
  }
  return worst;
}

}  // namespace staforge
