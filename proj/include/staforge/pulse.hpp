#pragma once

#include <span>
#include <vector>

#include "staforge/units.hpp"

namespace staforge {

enum class PulseKind { PiecewiseConstant, Sampled, Analytic };

enum class ReferenceShape { Sin2Ramp, Quench, Hold };

/// Closed-form envelope eps(t) = sum_k coefficients[k] * s^(k)(t), where s is
/// a unit-amplitude library shape and s^(k) its k-th time derivative.
///
/// A plain reference has a single coefficient (its amplitude); counterdiabatic
/// corrections append derivative terms, so every analytic pulse keeps an
/// exact derivative.
struct AnalyticForm {
  ReferenceShape shape = ReferenceShape::Hold;
  double tf = 1.0;
  std::vector<cplx> coefficients;

  /// k-th derivative of the unit shape. Right-continuous at the kinks.
  double shape_derivative(int order, double t) const;
};

/// Complex drive envelope eps(t).
///
/// Piecewise-constant pulses are right-continuous: the value at section_times[j]
/// belongs to section j+1. Outside the defined span the pre/post hold values
/// apply. Sampled pulses interpolate linearly between samples.
class Pulse {
 public:
  static Pulse piecewise(std::vector<double> section_times, std::vector<cplx> amplitudes,
                         cplx pre_value = 0.0, cplx post_value = 0.0);
  /// m equal sections on [t0, tf].
  static Pulse uniform_sections(double t0, double tf, std::vector<cplx> amplitudes,
                                cplx pre_value = 0.0, cplx post_value = 0.0);
  static Pulse sampled(double t_start, double dt, std::vector<cplx> samples, cplx pre_value,
                       cplx post_value);
  /// Samples `f` on [t_start, t_start + (count-1)*dt]; holds the end values outside.
  template <typename F>
  static Pulse sample(F&& f, double t_start, double dt, std::size_t count) {
    std::vector<cplx> s(count);
    for (std::size_t i = 0; i < count; ++i) s[i] = f(t_start + dt * static_cast<double>(i));
    const cplx first = s.front();
    const cplx last = s.back();
    return sampled(t_start, dt, std::move(s), first, last);
  }
  static Pulse analytic(AnalyticForm form);
  static Pulse constant(cplx value);

  PulseKind kind() const { return kind_; }

  cplx value(double t) const;
  /// Exact for analytic pulses; 4th-order finite differences at the sample
  /// points (interpolated in between) for sampled pulses. Throws for
  /// piecewise-constant pulses.
  cplx derivative(double t) const;

  /// Times where the envelope or its derivatives may jump. Integrators step
  /// onto these exactly.
  std::vector<double> breakpoints() const;

  /// Time over which the envelope changes appreciably between breakpoints:
  /// tf/pi for the sin^2 family, the sample spacing for sampled pulses and
  /// infinity for envelopes that are constant between breakpoints.
  double variation_timescale() const;

  cplx pre_value() const { return pre_; }
  cplx post_value() const { return post_; }

  // PiecewiseConstant
  const std::vector<double>& section_times() const { return times_; }
  const std::vector<cplx>& amplitudes() const { return values_; }
  bool equal_sections(double rel_tol = 1e-12) const;

  // Sampled
  double dt() const { return dt_; }
  double t_start() const { return t_start_; }
  double t_end() const;
  const std::vector<cplx>& samples() const { return values_; }
  std::vector<cplx> sample_derivatives() const;

  // Analytic
  const AnalyticForm& form() const { return form_; }

  /// a*p + b*q for pulses of identical kind and time structure.
  static Pulse combine(cplx a, const Pulse& p, cplx b, const Pulse& q);

 private:
  PulseKind kind_ = PulseKind::Analytic;
  std::vector<double> times_;
  std::vector<cplx> values_;
  double t_start_ = 0.0;
  double dt_ = 0.0;
  cplx pre_{0.0};
  cplx post_{0.0};
  AnalyticForm form_;
  std::vector<cplx> derivs_;  // sampled: derivative at each sample
};

/// Library references: Sin2Ramp eps0*sin^2(pi t / 2tf) on [0, tf] then eps0;
/// Quench steps 0 -> eps0 at t = 0; Hold is eps0 everywhere.
Pulse reference_library(ReferenceShape shape, cplx eps0, double tf);

}  // namespace staforge
