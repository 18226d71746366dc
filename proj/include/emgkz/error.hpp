#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace emgkz {

// Every failure the library reports carries one of these codes. The CLI maps
// them onto exit codes (schema = 1, precondition = 2, tolerance = 3).
enum class ErrorCode {
  // numeric-core
  PoleAtNonpositiveInteger,
  BranchCutHit,
  RankDeficient,
  DegenerateConfiguration,
  IntegerOverflow,
  NonFiniteValue,
  // laurent
  NotAFaceOffset,
  ZeroOnPath,
  TermCountExceeded,
  // polytope
  EmptySupport,
  // coamoeba
  NumericallyCoincidentRoots,
  ResolutionTooCoarse,
  Inconclusive,
  OnBoundary,
  // emquad
  NotInConvergenceDomain,
  BranchTrackingFailed,
  ToleranceNotReached,
  SingularT,
  GammaPole,
  ConvergenceConditionViolated,
  PoleOnContour,
  // continuation
  NotFullDimensional,
  TermBudgetExceeded,
  PoleHit,
  TermIntegralDiverged,
  LimitUnstable,
  // gkz
  DerivativeUnstable,
  NoNonsingularBlock,
  LopsidedMembership,
  // cli / io
  SchemaError,
  DimensionMismatch,
};

std::string_view error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return error_name(code_); }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace emgkz
