#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace staforge {

enum class ErrorCode {
  DimensionMismatch,
  NonPassive,
  NonHermitianCoupling,
  CalibrationInfeasible,
  DefectiveMatrix,
  SingularOmega,
  DegenerateDenominator,
  DegenerateDetuning,
  RankDeficient,
  QuadratureFailure,
  ZeroEffectiveKappa,
  ZeroPath,
  TruncationBreach,
  InvalidArgument,
  ConfigError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace staforge
