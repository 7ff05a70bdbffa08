#pragma once

#include "staforge/pulse.hpp"

namespace staforge {

/// Counterdiabatic drive eps_cd = eps - i*eps_dot/(delta - i*kappa/2).
/// Analytic references stay analytic; sampled references (>= 5 samples) use a
/// fourth-order finite-difference derivative. Throws DegenerateDenominator
/// when delta = kappa = 0 and InvalidArgument for piecewise references.
Pulse cd_pulse(const Pulse& reference, double delta, double kappa);

/// Coefficient of the auxiliary Hamiltonian term, -eps_dot/(delta - i kappa/2).
cplx cd_hamiltonian_amplitude(const Pulse& reference, double delta, double kappa, double t);

/// The drive added on top of the reference, eps_cd - eps = -i eps_dot/(delta - i kappa/2).
/// Same magnitude as cd_hamiltonian_amplitude.
cplx cd_added_drive(const Pulse& reference, double delta, double kappa, double t);

/// Target equilibrium i*eps(t)/(delta - i*kappa/2) of a single mode.
cplx reference_equilibrium(const Pulse& reference, double delta, double kappa, double t);

}  // namespace staforge
