#include "staforge/qsl.hpp"

#include <cmath>

#include "staforge/error.hpp"

namespace staforge {

double path_length(const std::vector<cplx>& path) {
  double len = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) len += std::abs(path[i] - path[i - 1]);
  return len;
}

double mt_path_length(const Trace& trace, int mode) { return path_length(trace.mode(mode)); }

double max_efficiency(double delta_alpha_abs) {
  if (!(delta_alpha_abs > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "|delta alpha| must be positive");
  }
  const double d = delta_alpha_abs;
  // arccos(e^{-x}) written as an angle whose sine avoids the cancellation
  // in 1 - e^{-x} for small d.
  const double x = 0.5 * d * d;
  return std::atan2(std::sqrt(-std::expm1(-2.0 * x)), std::exp(-x)) / d;
}

double quantum_efficiency(const std::vector<cplx>& path) {
  if (path.size() < 3) throw Error(ErrorCode::InvalidArgument, "need at least three trace points");
  const double d = std::abs(path.back() - path.front());
  if (d == 0.0) throw Error(ErrorCode::ZeroPath, "trajectory endpoints coincide");
  return max_efficiency(d) * d / path_length(path);
}

double quantum_efficiency(const Trace& trace, int mode) {
  return quantum_efficiency(trace.mode(mode));
}

}  // namespace staforge
