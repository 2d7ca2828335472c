#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace relgrowth {

/// Base class for all toolkit errors. `code()` is a stable, machine-readable
/// identifier; the CLI prints it on the first line of every error report.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

/// A file or stream did not match the expected schema.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& message) : Error("parse", message) {}
};

/// A value violates a type invariant (nonpositive interval, probability
/// outside [0,1], ...).
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& message)
      : Error("validation", message) {}
};

/// The estimator is undefined for this input (division by zero and friends).
class DegenerateInput : public Error {
 public:
  explicit DegenerateInput(const std::string& message)
      : Error("degenerate-input", message) {}
};

/// Too few observations for the requested fit.
class InsufficientData : public Error {
 public:
  explicit InsufficientData(const std::string& message)
      : Error("insufficient-data", message) {}
};

/// Optimizer restarts did not agree on an optimum.
class NonConvergence : public Error {
 public:
  explicit NonConvergence(const std::string& message)
      : Error("non-convergence", message) {}
};

/// Opt-in model whose restarts scatter too widely to trust any of them.
class Unidentifiable : public Error {
 public:
  explicit Unidentifiable(const std::string& message)
      : Error("unidentifiable", message) {}
};

/// Parameters lie outside the model's domain.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& message)
      : Error("domain", message) {}
};

/// A hazard-rate row evaluated to a negative value (invalid parameter
/// region, e.g. the Xui row with its printed exponent sign).
class NonPositiveHazard : public Error {
 public:
  explicit NonPositiveHazard(const std::string& message)
      : Error("non-positive-hazard", message) {}
};

/// Requested an error index beyond the remaining population.
class ExhaustedPopulation : public Error {
 public:
  explicit ExhaustedPopulation(const std::string& message)
      : Error("exhausted-population", message) {}
};

/// Least-squares design matrix is rank deficient; message names the
/// dependent columns.
class RankDeficient : public Error {
 public:
  explicit RankDeficient(const std::string& message)
      : Error("rank-deficient", message) {}
};

/// A likelihood kept increasing to the edge of the search grid.
class Unbounded : public Error {
 public:
  explicit Unbounded(const std::string& message)
      : Error("unbounded", message) {}
};

/// A per-run failure probability of exactly 1 makes the survival product 0.
class CertainFailure : public Error {
 public:
  explicit CertainFailure(const std::string& message)
      : Error("certain-failure", message) {}
};

/// No finite intensity bound exists on the requested simulation window.
class UnboundedIntensity : public Error {
 public:
  explicit UnboundedIntensity(const std::string& message)
      : Error("unbounded-intensity", message) {}
};

}  // namespace relgrowth
