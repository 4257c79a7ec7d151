#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace orthokin {

// Stable error identifiers. The CLI prints these names verbatim on stderr,
// so renaming an enumerator is a breaking interface change.
enum class ErrorCode {
  // model / input validation
  NonPositiveLength,
  EmptyStroke,
  BadAngleLimit,
  ParseError,
  SchemaError,
  // translation stage
  OutsideCylinder,
  BoundarySingular,
  StrokeExceeded,
  ConeExceeded,
  NoIntersection,
  BranchAmbiguous,
  SingularConfiguration,
  // wrist
  GimbalSingular,
  MechanismSingular,
  // transmission
  BendOutOfRange,
  // device
  UnsupportedVariant,
  // workspace
  BadBounds,
  BadResolution,
  EmptyWorkspace,
  CubeNotFeasible,
  // sizing
  Unachievable,
  BadBound,
  EmptyInput,
};

inline std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveLength: return "NonPositiveLength";
    case ErrorCode::EmptyStroke: return "EmptyStroke";
    case ErrorCode::BadAngleLimit: return "BadAngleLimit";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::OutsideCylinder: return "OutsideCylinder";
    case ErrorCode::BoundarySingular: return "BoundarySingular";
    case ErrorCode::StrokeExceeded: return "StrokeExceeded";
    case ErrorCode::ConeExceeded: return "ConeExceeded";
    case ErrorCode::NoIntersection: return "NoIntersection";
    case ErrorCode::BranchAmbiguous: return "BranchAmbiguous";
    case ErrorCode::SingularConfiguration: return "SingularConfiguration";
    case ErrorCode::GimbalSingular: return "GimbalSingular";
    case ErrorCode::MechanismSingular: return "MechanismSingular";
    case ErrorCode::BendOutOfRange: return "BendOutOfRange";
    case ErrorCode::UnsupportedVariant: return "UnsupportedVariant";
    case ErrorCode::BadBounds: return "BadBounds";
    case ErrorCode::BadResolution: return "BadResolution";
    case ErrorCode::EmptyWorkspace: return "EmptyWorkspace";
    case ErrorCode::CubeNotFeasible: return "CubeNotFeasible";
    case ErrorCode::Unachievable: return "Unachievable";
    case ErrorCode::BadBound: return "BadBound";
    case ErrorCode::EmptyInput: return "EmptyInput";
  }
  return "UnknownError";
}

// Domain error carrying a stable code. what() is "<Name>" or "<Name>: <detail>".
class Error : public std::runtime_error {
 public:
  explicit Error(ErrorCode code, const std::string& detail = {})
      : std::runtime_error(detail.empty()
                               ? std::string(error_name(code))
                               : std::string(error_name(code)) + ": " + detail),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace orthokin
