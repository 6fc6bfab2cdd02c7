#include "ltbm/errors.hpp"

namespace ltbm {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Syntax: return "SyntaxError";
    case ErrorCode::UnknownSymbol: return "UnknownSymbol";
    case ErrorCode::Domain: return "DomainError";
    case ErrorCode::Signature: return "SignatureError";
    case ErrorCode::SingularMetric: return "SingularMetric";
    case ErrorCode::InvalidDimensionParam: return "InvalidDimensionParam";
    case ErrorCode::LeftChart: return "LeftChart";
    case ErrorCode::StepFailure: return "StepFailure";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::AmbiguousGeodesic: return "AmbiguousGeodesic";
    case ErrorCode::ConjugatePoints: return "ConjugatePoints";
    case ErrorCode::SingularM: return "SingularM";
    case ErrorCode::EigenFailure: return "EigenFailure";
    case ErrorCode::EmptyRegion: return "EmptyRegion";
    case ErrorCode::NonTimelikePair: return "NonTimelikePair";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::PreconditionFailed: return "PreconditionFailed";
    case ErrorCode::InvariantFailure: return "InvariantFailure";
    case ErrorCode::ContainmentFailure: return "ContainmentFailure";
    case ErrorCode::DualizabilityUnverified: return "DualizabilityUnverified";
    case ErrorCode::TooManyAtoms: return "TooManyAtoms";
    case ErrorCode::Config: return "ConfigError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "UnknownError";
}

}  // namespace ltbm
