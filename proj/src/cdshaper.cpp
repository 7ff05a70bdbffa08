#include "staforge/cdshaper.hpp"

#include "staforge/error.hpp"

namespace staforge {

namespace {

cplx denominator(double delta, double kappa) {
  const cplx d(delta, -kappa / 2.0);
  if (d == cplx(0.0)) {
    throw Error(ErrorCode::DegenerateDenominator, "delta - i kappa/2 vanishes");
  }
  return d;
}

void require_differentiable(const Pulse& reference) {
  if (reference.kind() == PulseKind::PiecewiseConstant) {
    throw Error(ErrorCode::InvalidArgument,
                "counterdiabatic shaping needs a smooth reference; smooth the piecewise pulse first");
  }
  if (reference.kind() == PulseKind::Sampled && reference.samples().size() < 5) {
    throw Error(ErrorCode::InvalidArgument, "sampled reference needs at least five samples");
  }
}

}  // namespace

Pulse cd_pulse(const Pulse& reference, double delta, double kappa) {
  const cplx d = denominator(delta, kappa);
  require_differentiable(reference);
  if (reference.kind() == PulseKind::Analytic) {
    // eps = sum c_k s^(k), so eps_dot shifts every coefficient up one order.
    AnalyticForm form = reference.form();
    const auto& c = reference.form().coefficients;
    form.coefficients.assign(c.size() + 1, 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) {
      form.coefficients[k] += c[k];
      form.coefficients[k + 1] += -kI * c[k] / d;
    }
    return Pulse::analytic(std::move(form));
  }
  const auto derivs = reference.sample_derivatives();
  std::vector<cplx> samples = reference.samples();
  for (std::size_t i = 0; i < samples.size(); ++i) samples[i] -= kI * derivs[i] / d;
  return Pulse::sampled(reference.t_start(), reference.dt(), std::move(samples),
                        reference.pre_value(), reference.post_value());
}

cplx cd_hamiltonian_amplitude(const Pulse& reference, double delta, double kappa, double t) {
  const cplx d = denominator(delta, kappa);
  require_differentiable(reference);
  return -reference.derivative(t) / d;
}

cplx cd_added_drive(const Pulse& reference, double delta, double kappa, double t) {
  return kI * cd_hamiltonian_amplitude(reference, delta, kappa, t);
}

cplx reference_equilibrium(const Pulse& reference, double delta, double kappa, double t) {
  return kI * reference.value(t) / denominator(delta, kappa);
}

}  // namespace staforge
