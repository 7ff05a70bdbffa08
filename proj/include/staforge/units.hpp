#pragma once

#include <complex>
#include <numbers>

namespace staforge {

using cplx = std::complex<double>;

inline constexpr cplx kI{0.0, 1.0};

// Internal units: time in ns, angular frequency in rad/ns, drive amplitudes in
// sqrt(photons)/ns. Linear frequencies from the lab are quoted in MHz or GHz.
namespace units {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

double mhz_to_rad_per_ns(double f_mhz);
double ghz_to_rad_per_ns(double f_ghz);
double rad_per_ns_to_mhz(double omega);
double rad_per_ns_to_ghz(double omega);

}  // namespace units
}  // namespace staforge
