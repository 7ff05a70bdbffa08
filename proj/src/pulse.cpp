#include "staforge/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "staforge/error.hpp"

namespace staforge {

namespace {

constexpr double kPi = std::numbers::pi;

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, what);
}

}  // namespace

double AnalyticForm::shape_derivative(int order, double t) const {
  switch (shape) {
    case ReferenceShape::Hold:
      return order == 0 ? 1.0 : 0.0;
    case ReferenceShape::Quench:
      return (order == 0 && t >= 0.0) ? 1.0 : 0.0;
    case ReferenceShape::Sin2Ramp: {
      if (t < 0.0) return 0.0;
      if (t >= tf) return order == 0 ? 1.0 : 0.0;
      const double w = kPi / tf;
      if (order == 0) {
        const double s = std::sin(0.5 * w * t);
        return s * s;
      }
      // d^k/dt^k of (1 - cos(w t))/2; the quarter-turn phase is applied by
      // quadrant so the derivatives vanish exactly at t = 0.
      const double x = w * t;
      const double wk = 0.5 * std::pow(w, order);
      switch (order % 4) {
        case 0: return -wk * std::cos(x);
        case 1: return wk * std::sin(x);
        case 2: return wk * std::cos(x);
        default: return -wk * std::sin(x);
      }
    }
  }
  return 0.0;
}

Pulse Pulse::piecewise(std::vector<double> section_times, std::vector<cplx> amplitudes,
                       cplx pre_value, cplx post_value) {
  require(section_times.size() >= 2, "piecewise pulse needs at least one section");
  require(amplitudes.size() + 1 == section_times.size(),
          "piecewise pulse needs one amplitude per section");
  for (std::size_t i = 1; i < section_times.size(); ++i) {
    require(section_times[i] > section_times[i - 1], "section times must increase strictly");
  }
  Pulse p;
  p.kind_ = PulseKind::PiecewiseConstant;
  p.times_ = std::move(section_times);
  p.values_ = std::move(amplitudes);
  p.pre_ = pre_value;
  p.post_ = post_value;
  return p;
}

Pulse Pulse::uniform_sections(double t0, double tf, std::vector<cplx> amplitudes, cplx pre_value,
                              cplx post_value) {
  require(tf > t0, "tf must exceed t0");
  require(!amplitudes.empty(), "need at least one section");
  const std::size_t m = amplitudes.size();
  std::vector<double> times(m + 1);
  const double h = (tf - t0) / static_cast<double>(m);
  for (std::size_t j = 0; j <= m; ++j) times[j] = t0 + h * static_cast<double>(j);
  times[m] = tf;
  return piecewise(std::move(times), std::move(amplitudes), pre_value, post_value);
}

Pulse Pulse::sampled(double t_start, double dt, std::vector<cplx> samples, cplx pre_value,
                     cplx post_value) {
  require(dt > 0.0, "sample spacing must be positive");
  require(samples.size() >= 2, "sampled pulse needs at least two samples");
  Pulse p;
  p.kind_ = PulseKind::Sampled;
  p.t_start_ = t_start;
  p.dt_ = dt;
  p.values_ = std::move(samples);
  p.pre_ = pre_value;
  p.post_ = post_value;
  if (p.values_.size() >= 5) p.derivs_ = p.sample_derivatives();
  return p;
}

Pulse Pulse::analytic(AnalyticForm form) {
  require(form.tf > 0.0, "analytic pulse needs tf > 0");
  require(!form.coefficients.empty(), "analytic pulse needs a coefficient");
  Pulse p;
  p.kind_ = PulseKind::Analytic;
  p.form_ = std::move(form);
  p.pre_ = p.value(-1.0 - std::abs(p.form_.tf));
  p.post_ = p.value(2.0 * p.form_.tf + 1.0);
  return p;
}

Pulse Pulse::constant(cplx value) {
  return analytic(AnalyticForm{ReferenceShape::Hold, 1.0, {value}});
}

double Pulse::t_end() const { return t_start_ + dt_ * static_cast<double>(values_.size() - 1); }

cplx Pulse::value(double t) const {
  switch (kind_) {
    case PulseKind::PiecewiseConstant: {
      if (t < times_.front()) return pre_;
      if (t >= times_.back()) return post_;
      const auto it = std::upper_bound(times_.begin(), times_.end(), t);
      return values_[static_cast<std::size_t>(it - times_.begin()) - 1];
    }
    case PulseKind::Sampled: {
      if (t < t_start_) return pre_;
      if (t > t_end()) return post_;
      const double u = (t - t_start_) / dt_;
      const auto last = values_.size() - 1;
      std::size_t i = std::min(static_cast<std::size_t>(u), last - 1);
      const double f = u - static_cast<double>(i);
      return values_[i] * (1.0 - f) + values_[i + 1] * f;
    }
    case PulseKind::Analytic: {
      cplx v = 0.0;
      for (std::size_t k = 0; k < form_.coefficients.size(); ++k) {
        v += form_.coefficients[k] * form_.shape_derivative(static_cast<int>(k), t);
      }
      return v;
    }
  }
  return 0.0;
}

std::vector<cplx> Pulse::sample_derivatives() const {
  require(kind_ == PulseKind::Sampled, "sample_derivatives needs a sampled pulse");
  const std::size_t n = values_.size();
  require(n >= 5, "fourth-order differences need at least five samples");
  const auto& f = values_;
  std::vector<cplx> d(n);
  const double h = dt_;
  for (std::size_t i = 0; i < n; ++i) {
    if (i >= 2 && i + 2 < n) {
      d[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
    } else if (i < 2) {
      // One-sided stencils, fourth order.
      if (i == 0) {
        d[i] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h);
      } else {
        d[i] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h);
      }
    } else {
      const std::size_t e = n - 1;
      if (i == e) {
        d[i] = (25.0 * f[e] - 48.0 * f[e - 1] + 36.0 * f[e - 2] - 16.0 * f[e - 3] + 3.0 * f[e - 4]) /
               (12.0 * h);
      } else {
        d[i] = (3.0 * f[e] + 10.0 * f[e - 1] - 18.0 * f[e - 2] + 6.0 * f[e - 3] - f[e - 4]) /
               (12.0 * h);
      }
    }
  }
  return d;
}

cplx Pulse::derivative(double t) const {
  switch (kind_) {
    case PulseKind::PiecewiseConstant:
      throw Error(ErrorCode::InvalidArgument,
                  "piecewise-constant pulses have no classical derivative");
    case PulseKind::Sampled: {
      if (t < t_start_ || t > t_end()) return 0.0;
      require(!derivs_.empty(), "fourth-order differences need at least five samples");
      const auto& d = derivs_;
      const double u = (t - t_start_) / dt_;
      std::size_t i = std::min(static_cast<std::size_t>(u), d.size() - 2);
      const double f = u - static_cast<double>(i);
      return d[i] * (1.0 - f) + d[i + 1] * f;
    }
    case PulseKind::Analytic: {
      cplx v = 0.0;
      for (std::size_t k = 0; k < form_.coefficients.size(); ++k) {
        v += form_.coefficients[k] * form_.shape_derivative(static_cast<int>(k) + 1, t);
      }
      return v;
    }
  }
  return 0.0;
}

std::vector<double> Pulse::breakpoints() const {
  switch (kind_) {
    case PulseKind::PiecewiseConstant:
      return times_;
    case PulseKind::Sampled: {
      std::vector<double> b(values_.size());
      for (std::size_t i = 0; i < b.size(); ++i) b[i] = t_start_ + dt_ * static_cast<double>(i);
      return b;
    }
    case PulseKind::Analytic:
      switch (form_.shape) {
        case ReferenceShape::Hold: return {};
        case ReferenceShape::Quench: return {0.0};
        case ReferenceShape::Sin2Ramp: return {0.0, form_.tf};
      }
  }
  return {};
}

double Pulse::variation_timescale() const {
  switch (kind_) {
    case PulseKind::PiecewiseConstant: return INFINITY;
    case PulseKind::Sampled: return dt_;
    case PulseKind::Analytic:
      return form_.shape == ReferenceShape::Sin2Ramp ? form_.tf / kPi : INFINITY;
  }
  return INFINITY;
}

bool Pulse::equal_sections(double rel_tol) const {
  if (kind_ != PulseKind::PiecewiseConstant) return false;
  const double h = (times_.back() - times_.front()) / static_cast<double>(values_.size());
  for (std::size_t j = 1; j < times_.size(); ++j) {
    if (std::abs(times_[j] - times_[j - 1] - h) > rel_tol * std::abs(h) * 16.0) return false;
  }
  return true;
}

Pulse Pulse::combine(cplx a, const Pulse& p, cplx b, const Pulse& q) {
  require(p.kind_ == q.kind_, "cannot combine pulses of different kinds");
  Pulse r = p;
  switch (p.kind_) {
    case PulseKind::PiecewiseConstant:
      require(p.times_ == q.times_, "piecewise pulses must share section times");
      break;
    case PulseKind::Sampled:
      require(p.t_start_ == q.t_start_ && p.dt_ == q.dt_ && p.values_.size() == q.values_.size(),
              "sampled pulses must share their grid");
      break;
    case PulseKind::Analytic: {
      require(p.form_.shape == q.form_.shape && p.form_.tf == q.form_.tf,
              "analytic pulses must share shape and duration");
      const std::size_t n = std::max(p.form_.coefficients.size(), q.form_.coefficients.size());
      std::vector<cplx> c(n, 0.0);
      for (std::size_t k = 0; k < p.form_.coefficients.size(); ++k) c[k] += a * p.form_.coefficients[k];
      for (std::size_t k = 0; k < q.form_.coefficients.size(); ++k) c[k] += b * q.form_.coefficients[k];
      return analytic(AnalyticForm{p.form_.shape, p.form_.tf, std::move(c)});
    }
  }
  for (std::size_t i = 0; i < r.values_.size(); ++i) r.values_[i] = a * p.values_[i] + b * q.values_[i];
  if (p.kind_ == PulseKind::Sampled && r.values_.size() >= 5) r.derivs_ = r.sample_derivatives();
  r.pre_ = a * p.pre_ + b * q.pre_;
  r.post_ = a * p.post_ + b * q.post_;
  return r;
}

Pulse reference_library(ReferenceShape shape, cplx eps0, double tf) {
  require(tf > 0.0, "reference duration must be positive");
  return Pulse::analytic(AnalyticForm{shape, tf, {eps0}});
}

}  // namespace staforge
