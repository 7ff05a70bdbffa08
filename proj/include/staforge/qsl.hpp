#pragma once

#include <vector>

#include "staforge/network.hpp"

namespace staforge {

/// Polyline length of a complex path.
double path_length(const std::vector<cplx>& path);

/// Length of the phase-space path of mode `mode`, i.e. the integral of |alpha_dot|.
double mt_path_length(const Trace& trace, int mode = 0);

/// arccos(exp(-d^2/2)) / d, the efficiency of a straight path of length d.
double max_efficiency(double delta_alpha_abs);

/// Geodesic Bures angle between the endpoint coherent states divided by the
/// traversed path length. Throws ZeroPath when the endpoints coincide and
/// InvalidArgument for fewer than three points.
double quantum_efficiency(const Trace& trace, int mode = 0);
double quantum_efficiency(const std::vector<cplx>& path);

}  // namespace staforge
