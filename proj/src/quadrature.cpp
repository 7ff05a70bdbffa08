#include "staforge/quadrature.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "staforge/error.hpp"

namespace staforge {

namespace {

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21 tables).
constexpr std::array<double, 11> kXgk{
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> kWgk{
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077382834262500, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg{
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
  cplx kronrod;
  double error;
  double magnitude;  // integral of |f|, for the round-off floor
};

Panel gauss_kronrod(const std::function<cplx(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const cplx fc = f(c);
  cplx k = kWgk[10] * fc;
  cplx g = 0.0;
  double mag = kWgk[10] * std::abs(fc);
  for (int i = 0; i < 10; ++i) {
    const double dx = h * kXgk[i];
    const cplx f1 = f(c - dx);
    const cplx f2 = f(c + dx);
    k += kWgk[i] * (f1 + f2);
    mag += kWgk[i] * (std::abs(f1) + std::abs(f2));
    if (i % 2 == 1) g += kWg[i / 2] * (f1 + f2);
  }
  return {k * h, std::abs((k - g) * h), mag * std::abs(h)};
}

struct Integrator {
  const std::function<cplx(double)>& f;
  const QuadratureOptions& opt;
  double tol_density;  // allowed error per unit length
  long evaluations = 0;
  double error = 0.0;

  cplx run(double a, double b, int depth) {
    evaluations += 21;
    if (evaluations > opt.max_evaluations) {
      throw Error(ErrorCode::QuadratureFailure, "evaluation budget exhausted");
    }
    const Panel p = gauss_kronrod(f, a, b);
    const double allowed = tol_density * std::abs(b - a);
    const double floor = 50.0 * std::numeric_limits<double>::epsilon() * p.magnitude;
    if (p.error <= allowed || p.error <= floor) {
      error += p.error;
      return p.kronrod;
    }
    if (depth >= opt.max_depth) {
      std::ostringstream msg;
      msg << "panel [" << a << ", " << b << "] unresolved after " << depth
          << " bisections (error " << p.error << ")";
      throw Error(ErrorCode::QuadratureFailure, msg.str());
    }
    const double mid = 0.5 * (a + b);
    return run(a, mid, depth + 1) + run(mid, b, depth + 1);
  }
};

}  // namespace

QuadratureResult integrate(const std::function<cplx(double)>& f, double a, double b,
                           const QuadratureOptions& options) {
  if (a == b) return {};
  if (!(std::isfinite(a) && std::isfinite(b))) {
    throw Error(ErrorCode::InvalidArgument, "integration limits must be finite");
  }
  double tol = options.abs_tol;
  if (options.rel_tol > 0.0) {
    const Panel coarse = gauss_kronrod(f, a, b);
    tol = std::max(tol, options.rel_tol * std::abs(coarse.kronrod));
  }
  Integrator integ{f, options, tol / std::abs(b - a)};
  const int panels = std::max(1, options.initial_panels);
  const double w = (b - a) / panels;
  cplx total = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double lo = a + w * i;
    const double hi = (i + 1 == panels) ? b : a + w * (i + 1);
    total += integ.run(lo, hi, 0);
  }
  return {total, integ.error, integ.evaluations};
}

}  // namespace staforge
