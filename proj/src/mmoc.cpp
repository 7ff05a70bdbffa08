#include "staforge/mmoc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "staforge/error.hpp"
#include "staforge/hybridizer.hpp"
#include "staforge/parallel.hpp"
#include "staforge/quadrature.hpp"

namespace staforge {

namespace {

void check_problem(int m, double t0, double tf) {
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "section count must be positive");
  if (!(tf > t0)) throw Error(ErrorCode::InvalidArgument, "tf must exceed t0");
}

}  // namespace

cplx exprel(cplx z) {
  if (std::abs(z) < 0.1) {
    // Taylor series of (e^z - 1)/z = sum z^k/(k+1)!.
    cplx term = 1.0;
    cplx sum = 1.0;
    for (int k = 1; k < 30; ++k) {
      term *= z / static_cast<double>(k + 1);
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  return (std::exp(z) - 1.0) / z;
}

MmocProblem MmocProblem::reversed() const {
  MmocProblem p = *this;
  std::swap(p.eps0, p.epsf);
  return p;
}

Eigen::VectorXcd MmocSolution::sections() const {
  if (free_params.size() == 0) return essential;
  return essential + null_basis * free_params;
}

Eigen::MatrixXcd build_G(const HybridSpectrum& spectrum, int m, double t0, double tf) {
  check_problem(m, t0, tf);
  const int n = spectrum.size();
  const double h = (tf - t0) / m;
  Eigen::MatrixXcd G(n, m);
  for (int k = 0; k < n; ++k) {
    const cplx d = spectrum.hybrid_detunings(k);
    // Section j ends at t_j; its integral is e^{-i d (tf - t_j)} h (1 - e^{-i d h})/(i d h).
    const cplx section = h * exprel(-kI * d * h);
    for (int j = 1; j <= m; ++j) {
      const double tj = (j == m) ? tf : t0 + h * j;
      G(k, j - 1) = std::exp(-kI * d * (tf - tj)) * section;
    }
  }
  return G;
}

Eigen::VectorXcd build_y(const HybridSpectrum& spectrum, cplx eps0, cplx epsf, double t0,
                         double tf) {
  const int n = spectrum.size();
  Eigen::VectorXcd y(n);
  for (int k = 0; k < n; ++k) {
    const cplx d = spectrum.hybrid_detunings(k);
    if (d == cplx(0.0)) {
      std::ostringstream msg;
      msg << "hybrid mode " << k << " is lossless and resonant; it has no finite equilibrium";
      throw Error(ErrorCode::DegenerateDetuning, msg.str());
    }
    y(k) = (epsf - eps0 * std::exp(-kI * d * (tf - t0))) / (kI * d);
  }
  return y;
}

MmocSolution svd_solve(const Eigen::MatrixXcd& G, const Eigen::VectorXcd& y,
                       const SvdOptions& options) {
  const int n = static_cast<int>(G.rows());
  const int m = static_cast<int>(G.cols());
  if (y.size() != n) throw Error(ErrorCode::DimensionMismatch, "y length differs from G rows");
  if (m < n) {
    std::ostringstream msg;
    msg << "need at least as many sections as constraints (m = " << m << " < n = " << n << ")";
    throw Error(ErrorCode::InvalidArgument, msg.str());
  }
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(G, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  if (s.size() == 0 || !(s(n - 1) >= options.rank_tolerance * s(0)) || s(0) == 0.0) {
    std::ostringstream msg;
    msg << "smallest singular value " << (s.size() ? s(n - 1) : 0.0) << " is below "
        << options.rank_tolerance << " x largest; two hybrid modes are indistinguishable at this "
        << "section count and duration (increase m or tf)";
    throw Error(ErrorCode::RankDeficient, msg.str());
  }

  MmocSolution sol;
  sol.singular_values = s;
  sol.essential_coordinates = (svd.matrixU().adjoint() * y).cwiseQuotient(s.cast<cplx>());
  sol.essential = svd.matrixV() * sol.essential_coordinates;
  if (options.compute_null_basis && m > n) {
    const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(svd.matrixV());
    const Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(m, m);
    sol.null_basis = q.rightCols(m - n);
  } else {
    sol.null_basis = Eigen::MatrixXcd(m, 0);
  }
  sol.free_params = Eigen::VectorXcd::Zero(sol.null_basis.cols());
  return sol;
}

MmocSolution solve(const MmocProblem& problem, const SvdOptions& options) {
  const Eigen::MatrixXcd G = build_G(problem.spectrum, problem.m, problem.t0, problem.tf);
  const Eigen::VectorXcd y =
      build_y(problem.spectrum, problem.eps0, problem.epsf, problem.t0, problem.tf);
  return svd_solve(G, y, options);
}

double energy(const MmocSolution& solution) {
  return solution.essential_coordinates.squaredNorm() + solution.free_params.squaredNorm();
}

double pmax(const MmocSolution& solution) {
  return solution.sections().cwiseAbs2().maxCoeff();
}

double pmax_lower_bound(const MmocSolution& solution, int m) {
  return solution.essential_coordinates.squaredNorm() / static_cast<double>(m);
}

MmocSolution optimize_pmax(const MmocSolution& solution, const PmaxOptions& options) {
  const int free = static_cast<int>(solution.null_basis.cols());
  if (free == 0) return solution;
  const int dim = 2 * free;
  const double bound = options.bounds_scale * solution.essential.norm();
  const Eigen::VectorXd upper = Eigen::VectorXd::Constant(dim, bound);
  const Eigen::VectorXd lower = -upper;

  auto unpack = [free](const Eigen::VectorXd& v) {
    Eigen::VectorXcd x(free);
    for (int i = 0; i < free; ++i) x(i) = cplx(v(2 * i), v(2 * i + 1));
    return x;
  };
  auto objective = [&](const Eigen::VectorXd& v) {
    return (solution.essential + solution.null_basis * unpack(v)).cwiseAbs2().maxCoeff();
  };

  DeOptions de = options.de;
  // The minimum-energy point is always a candidate, so the result never loses to it.
  de.initial_members.insert(de.initial_members.begin(), Eigen::VectorXd::Zero(dim));
  const DeResult r = differential_evolution(objective, lower, upper, de);

  MmocSolution out = solution;
  out.free_params = unpack(r.best);
  return out;
}

Pulse assemble_pulse(const MmocProblem& problem, const MmocSolution& solution) {
  const Eigen::VectorXcd s = solution.sections();
  std::vector<cplx> amps(s.data(), s.data() + s.size());
  return Pulse::uniform_sections(problem.t0, problem.tf, std::move(amps), problem.eps0,
                                 problem.epsf);
}

double power_db(double p, double p0) { return 10.0 * std::log10(p / p0); }

MmocReport report(const MmocSolution& min_energy, const MmocSolution& optimized, cplx p0_amp) {
  const double p0 = std::norm(p0_amp);
  MmocReport r;
  const double p_min = pmax(min_energy);
  const double p_opt = pmax(optimized);
  r.pmax_min_energy_db = power_db(p_min, p0);
  r.pmax_optimized_db = power_db(p_opt, p0);
  r.lower_bound_db = power_db(pmax_lower_bound(optimized, optimized.m()), p0);
  r.reduction_db = r.pmax_min_energy_db - r.pmax_optimized_db;
  r.peak_amplitude_ratio = std::sqrt(p_min / p_opt);
  r.energy = energy(optimized);
  return r;
}

MultiportSolution multiport_solve(const ModeNetwork& net, const std::vector<DrivePort>& ports,
                                  int m, double t0, double tf, double rank_tolerance) {
  check_problem(m, t0, tf);
  const HybridSpectrum spec = hybridize(net);
  const int n = spec.size();
  const int np = static_cast<int>(ports.size());
  if (np == 0) throw Error(ErrorCode::InvalidArgument, "no drive ports");
  if (m * np < n) {
    throw Error(ErrorCode::InvalidArgument, "m * ports must be at least the mode count");
  }
  const Eigen::MatrixXcd G = build_G(spec, m, t0, tf);
  Eigen::MatrixXcd M(n, m * np);
  Eigen::VectorXcd y = Eigen::VectorXcd::Zero(n);
  for (int p = 0; p < np; ++p) {
    if (ports[p].coupling.size() != n) {
      throw Error(ErrorCode::DimensionMismatch, "port coupling length differs from mode count");
    }
    const Eigen::VectorXcd oc = spec.transform * ports[p].coupling;
    M.middleCols(p * m, m) = oc.asDiagonal() * G;
    y += oc.cwiseProduct(build_y(spec, ports[p].eps0, ports[p].epsf, t0, tf));
  }
  SvdOptions opt;
  opt.rank_tolerance = rank_tolerance;
  opt.compute_null_basis = false;
  const MmocSolution sol = svd_solve(M, y, opt);
  MultiportSolution out;
  out.singular_values = sol.singular_values;
  for (int p = 0; p < np; ++p) out.sections.push_back(sol.essential.segment(p * m, m));
  return out;
}

Eigen::MatrixXcd filter_corrected_G(const HybridSpectrum& spectrum, int m, double t0, double tf,
                                    double omega_lo, double omega_hi, double window_lo,
                                    double window_hi, const FilterOptions& options) {
  check_problem(m, t0, tf);
  if (!(omega_lo < omega_hi)) throw Error(ErrorCode::InvalidArgument, "empty passband");
  if (!(window_lo < window_hi)) throw Error(ErrorCode::InvalidArgument, "empty window");
  const int n = spectrum.size();
  const double h = (tf - t0) / m;
  const double width = window_hi - window_lo;

  // The integrand oscillates at time offsets up to `span`; start with a few
  // panels per period so the adaptive rule never sees an aliased panel.
  const double span = std::max({std::abs(window_hi - t0), std::abs(tf - window_lo),
                                std::abs(window_hi - window_lo)});
  const double periods = (omega_hi - omega_lo) * span / (2.0 * std::numbers::pi);
  const int panels = static_cast<int>(std::min(5e7, std::max(1.0, 2.0 * std::ceil(periods))));

  Eigen::MatrixXcd out(n, m);
  parallel_for(static_cast<std::size_t>(n * m), [&](std::size_t idx) {
    const int k = static_cast<int>(idx) / m;
    const int j = static_cast<int>(idx) % m + 1;
    const cplx d = spectrum.hybrid_detunings(k);
    const double tj0 = t0 + h * (j - 1);
    auto integrand = [&](double w) {
      // Filtered square section: (e^{i w t_j} - e^{i w t_{j-1}})/(i w).
      const cplx section = std::exp(kI * w * tj0) * h * exprel(kI * w * h);
      // Window factor with e^{-i d tf} folded in to avoid overflow.
      const cplx u = d - w;
      const cplx window =
          std::exp(kI * d * (window_lo - tf) - kI * w * window_lo) * width * exprel(kI * u * width);
      return section * window;
    };
    QuadratureOptions q;
    q.abs_tol = options.abs_tol * 2.0 * std::numbers::pi;
    q.initial_panels = panels;
    q.max_depth = options.max_depth;
    q.max_evaluations = options.max_evaluations;
    const QuadratureResult r = integrate(integrand, omega_lo, omega_hi, q);
    out(k, j - 1) = r.value / (2.0 * std::numbers::pi);
  });
  return out;
}

double max_relative_difference(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "matrices differ in shape");
  }
  return (a - b).cwiseAbs().cwiseQuotient(b.cwiseAbs()).maxCoeff();
}

}  // namespace staforge
