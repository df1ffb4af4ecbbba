#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace beliefrank {

enum class ErrorKind {
  // core
  MassOutOfRange,
  MassSumInvalid,
  NonzeroEmptySet,
  FrameMismatch,
  // ahp
  EmptyInput,
  OrderMismatch,
  InvalidMatrix,
  NoConvergence,
  MissingRI,
  InconsistentMatrix,
  // entropy
  ZeroColumn,
  DegenerateRows,
  AllZeroDivergence,
  DegeneratePriors,
  // fuzzy
  ScoreOutOfRange,
  InvalidAlpha,
  // evidence
  TotalConflict,
  // ingestion / orchestration
  ParseError,
  MissingIndicator,
  UnknownIndicator,
  InvalidConfig,
  IoError,
};

std::string_view to_string(ErrorKind kind);

/// Every failure in the library surfaces as this exception. `kind` is stable
/// and machine-checkable; the message carries location details (file, row,
/// matrix cell, stage) where they exist.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), detail_(message) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// Message without the kind prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

/// NoConvergence carries the last power-iteration estimate.
class NoConvergenceError : public Error {
 public:
  NoConvergenceError(double last_estimate, int iterations)
      : Error(ErrorKind::NoConvergence,
              "power iteration did not converge after " + std::to_string(iterations) +
                  " iterations; last estimate " + std::to_string(last_estimate)),
        last_estimate_(last_estimate) {}

  double last_estimate() const noexcept { return last_estimate_; }

 private:
  double last_estimate_;
};

}  // namespace beliefrank
