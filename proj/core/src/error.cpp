#include "nlstrain/error.hpp"

namespace nlstrain {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ConditionViolated: return "ConditionViolated";
    case ErrorCode::InvalidPair: return "InvalidPair";
    case ErrorCode::NoBoundState: return "NoBoundState";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::CertificateUnbounded: return "CertificateUnbounded";
    case ErrorCode::NoKink: return "NoKink";
    case ErrorCode::QuadratureSingular: return "QuadratureSingular";
    case ErrorCode::GridTooSmall: return "GridTooSmall";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::DegenerateFit: return "DegenerateFit";
    case ErrorCode::QuadratureUnderResolved: return "QuadratureUnderResolved";
    case ErrorCode::Validation: return "Validation";
  }
  return "Unknown";
}

}  // namespace nlstrain
