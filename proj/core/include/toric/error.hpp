#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Core>

namespace toric {

enum class ErrorCode {
  ZeroNormal,
  NotFullRank,
  Overflow,
  EmptyPolyhedron,
  RedundantFacet,
  EmptyInterior,
  UnsupportedDimension,
  NotSimple,
  NotProper,
  EmptyFace,
  DegenerateProjection,
  DivergentWeight,
  UnsupportedMoment,
  UnsupportedDomain,
  OutOfDomain,
  NotConvexHere,
  NoConvergence,
  NotAProduct,
  DivergentD1,
  NotInE,
  InvalidArgument,
  ParseError,
};

std::string_view to_string(ErrorCode code);

/// Library exception. `what()` is a single line of the form "<Code>: <detail>".
/// Some codes carry extra payload: DivergentWeight a recession direction w with
/// <b,w> <= 0, NoConvergence an iteration trace.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);
  Error(ErrorCode code, const std::string& detail, Eigen::VectorXd witness);

  ErrorCode code() const noexcept { return code_; }
  const Eigen::VectorXd& witness() const noexcept { return witness_; }

  const std::string& trace() const noexcept { return trace_; }
  Error& with_trace(std::string trace) {
    trace_ = std::move(trace);
    return *this;
  }

 private:
  ErrorCode code_;
  Eigen::VectorXd witness_;
  std::string trace_;
};

}  // namespace toric
