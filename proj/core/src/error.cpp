#include "toric/error.hpp"

namespace toric {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroNormal: return "ZeroNormal";
    case ErrorCode::NotFullRank: return "NotFullRank";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::EmptyPolyhedron: return "EmptyPolyhedron";
    case ErrorCode::RedundantFacet: return "RedundantFacet";
    case ErrorCode::EmptyInterior: return "EmptyInterior";
    case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::NotSimple: return "NotSimple";
    case ErrorCode::NotProper: return "NotProper";
    case ErrorCode::EmptyFace: return "EmptyFace";
    case ErrorCode::DegenerateProjection: return "DegenerateProjection";
    case ErrorCode::DivergentWeight: return "DivergentWeight";
    case ErrorCode::UnsupportedMoment: return "UnsupportedMoment";
    case ErrorCode::UnsupportedDomain: return "UnsupportedDomain";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::NotConvexHere: return "NotConvexHere";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NotAProduct: return "NotAProduct";
    case ErrorCode::DivergentD1: return "DivergentD1";
    case ErrorCode::NotInE: return "NotInE";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

Error::Error(ErrorCode code, const std::string& detail, Eigen::VectorXd witness)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail),
      code_(code),
      witness_(std::move(witness)) {}

}  // namespace toric
