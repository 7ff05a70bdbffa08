#include "oracles.hpp"

#include <algorithm>
#include <stdexcept>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_odeiv2.h>

namespace oracle {

namespace {

struct NetworkRhs {
  const Eigen::MatrixXcd* omega;
  const Eigen::VectorXcd* coupling;
  const std::function<cplx(double)>* eps;
};

int rhs(double t, const double y[], double dydt[], void* params) {
  const auto* p = static_cast<const NetworkRhs*>(params);
  const auto n = p->omega->rows();
  Eigen::VectorXcd a(n);
  for (Eigen::Index i = 0; i < n; ++i) a(i) = cplx(y[2 * i], y[2 * i + 1]);
  const Eigen::VectorXcd d = cplx(0.0, -1.0) * (*p->omega * a) - *p->coupling * (*p->eps)(t);
  for (Eigen::Index i = 0; i < n; ++i) {
    dydt[2 * i] = d(i).real();
    dydt[2 * i + 1] = d(i).imag();
  }
  return GSL_SUCCESS;
}

double call_real(double x, void* params) {
  return (*static_cast<const std::function<cplx(double)>*>(params))(x).real();
}

double call_imag(double x, void* params) {
  return (*static_cast<const std::function<cplx(double)>*>(params))(x).imag();
}

}  // namespace

std::vector<Eigen::VectorXcd> integrate_network(const Eigen::MatrixXcd& omega,
                                                const Eigen::VectorXcd& coupling,
                                                const std::function<cplx(double)>& eps,
                                                const Eigen::VectorXcd& alpha0,
                                                const std::vector<double>& times,
                                                std::vector<double> breakpoints,
                                                double rel_tol) {
  const auto n = omega.rows();
  NetworkRhs params{&omega, &coupling, &eps};
  gsl_odeiv2_system sys{rhs, nullptr, static_cast<std::size_t>(2 * n), &params};
  gsl_odeiv2_driver* drv =
      gsl_odeiv2_driver_alloc_y_new(&sys, gsl_odeiv2_step_rk8pd, 1e-3, 1e-14, rel_tol);
  std::vector<double> y(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    y[2 * i] = alpha0(i).real();
    y[2 * i + 1] = alpha0(i).imag();
  }
  std::sort(breakpoints.begin(), breakpoints.end());
  std::vector<Eigen::VectorXcd> out;
  out.reserve(times.size());
  double t = times.empty() ? 0.0 : times.front();
  auto bp = breakpoints.begin();
  for (double target : times) {
    while (bp != breakpoints.end() && *bp <= t) ++bp;
    while (true) {
      const double stop = (bp != breakpoints.end() && *bp < target) ? *bp : target;
      if (stop > t) {
        // A fresh start at each breakpoint keeps the step controller from
        // straddling a jump in the drive.
        gsl_odeiv2_driver_reset(drv);
        if (gsl_odeiv2_driver_apply(drv, &t, stop, y.data()) != GSL_SUCCESS) {
          gsl_odeiv2_driver_free(drv);
          throw std::runtime_error("GSL ODE driver failed");
        }
      }
      t = stop;
      if (stop == target) break;
      ++bp;
    }
    Eigen::VectorXcd a(n);
    for (Eigen::Index i = 0; i < n; ++i) a(i) = cplx(y[2 * i], y[2 * i + 1]);
    out.push_back(a);
  }
  gsl_odeiv2_driver_free(drv);
  return out;
}

cplx qag(const std::function<cplx(double)>& f, double a, double b, double abs_tol) {
  gsl_set_error_handler_off();
  gsl_integration_workspace* ws = gsl_integration_workspace_alloc(4000);
  gsl_function fr{call_real, const_cast<std::function<cplx(double)>*>(&f)};
  gsl_function fi{call_imag, const_cast<std::function<cplx(double)>*>(&f)};
  double re = 0.0, im = 0.0, err = 0.0;
  const int s1 = gsl_integration_qag(&fr, a, b, abs_tol, 1e-13, 4000, GSL_INTEG_GAUSS61, ws, &re, &err);
  const int s2 = gsl_integration_qag(&fi, a, b, abs_tol, 1e-13, 4000, GSL_INTEG_GAUSS61, ws, &im, &err);
  gsl_integration_workspace_free(ws);
  // Roundoff warnings at 1e-13 relative are expected and harmless here.
  if ((s1 != GSL_SUCCESS && s1 != GSL_EROUND) || (s2 != GSL_SUCCESS && s2 != GSL_EROUND)) {
    throw std::runtime_error("GSL QAG failed");
  }
  return {re, im};
}

cplx single_mode_constant(cplx d, cplx eps, cplx alpha0, double t) {
  const cplx i(0.0, 1.0);
  const cplx eq = i * eps / d;
  return eq + (alpha0 - eq) * std::exp(-i * d * t);
}

cplx single_mode_ramp(cplx d, cplx slope, cplx alpha0, double t) {
  // Particular solution p t + q with p = i slope / D and q = -slope / D^2.
  const cplx i(0.0, 1.0);
  const cplx p = i * slope / d;
  const cplx q = -slope / (d * d);
  return p * t + q + (alpha0 - q) * std::exp(-i * d * t);
}

std::pair<cplx, cplx> eigenvalues_2x2(const Eigen::Matrix2cd& m) {
  const cplx tr = m.trace();
  const cplx det = m.determinant();
  const cplx disc = std::sqrt(tr * tr / 4.0 - det);
  return {tr / 2.0 + disc, tr / 2.0 - disc};
}

cplx coherent_overlap(cplx beta, cplx alpha) {
  return std::exp(-0.5 * std::norm(beta) - 0.5 * std::norm(alpha) + std::conj(beta) * alpha);
}

}  // namespace oracle
