#include "staforge/units.hpp"

#include "staforge/error.hpp"

namespace staforge {

namespace units {

double mhz_to_rad_per_ns(double f_mhz) { return kTwoPi * 1e-3 * f_mhz; }
double ghz_to_rad_per_ns(double f_ghz) { return kTwoPi * f_ghz; }
double rad_per_ns_to_mhz(double omega) { return omega / (kTwoPi * 1e-3); }
double rad_per_ns_to_ghz(double omega) { return omega / kTwoPi; }

}  // namespace units

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonPassive: return "NonPassive";
    case ErrorCode::NonHermitianCoupling: return "NonHermitianCoupling";
    case ErrorCode::CalibrationInfeasible: return "CalibrationInfeasible";
    case ErrorCode::DefectiveMatrix: return "DefectiveMatrix";
    case ErrorCode::SingularOmega: return "SingularOmega";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::DegenerateDetuning: return "DegenerateDetuning";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::ZeroEffectiveKappa: return "ZeroEffectiveKappa";
    case ErrorCode::ZeroPath: return "ZeroPath";
    case ErrorCode::TruncationBreach: return "TruncationBreach";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace staforge
