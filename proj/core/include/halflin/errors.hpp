#pragma once

#include <stdexcept>
#include <string>

namespace halflin {

/// Coarse failure categories; the CLI maps them onto process exit codes
/// (configuration -> 1, numeric -> 2, non-convergence -> 3).
enum class ErrorCategory {
    Configuration,
    Numeric,
    NonConvergence,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorCategory category, const std::string& message)
        : std::runtime_error(message), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }

  private:
    ErrorCategory category_;
};

/// Invalid or inconsistent caller-supplied settings (bad field values,
/// mismatched initial data, windows too short, ...).
class ConfigurationError : public Error {
  public:
    explicit ConfigurationError(const std::string& message)
        : Error(ErrorCategory::Configuration, message) {}
};

/// Mathematical domain violations (non-finite inputs, non-positive exponents, ...).
class DomainError : public Error {
  public:
    explicit DomainError(const std::string& message)
        : Error(ErrorCategory::Configuration, message) {}
};

/// Index outside the admissible domain of a coefficient family or trajectory.
class IndexError : public Error {
  public:
    explicit IndexError(const std::string& message)
        : Error(ErrorCategory::Configuration, message) {}
};

/// A structural hypothesis of an algorithm does not hold for the given data
/// (e.g. the reverse envelope needs the anchor quasidifference to dominate
/// the local weight sum; a later anchor usually fixes it).
class HypothesisError : public Error {
  public:
    explicit HypothesisError(const std::string& message)
        : Error(ErrorCategory::Configuration, message) {}
};

/// A quantity left double-precision range, naming the failing index.
class OverflowError : public Error {
  public:
    explicit OverflowError(const std::string& message)
        : Error(ErrorCategory::Numeric, message) {}
};

/// A root bracket or iteration wandered beyond any plausible magnitude.
class DivergenceError : public Error {
  public:
    explicit DivergenceError(const std::string& message)
        : Error(ErrorCategory::Numeric, message) {}
};

/// The window truncation error bound is too large for the requested
/// tolerance; the caller must enlarge the window.
class TruncationError : public Error {
  public:
    explicit TruncationError(const std::string& message)
        : Error(ErrorCategory::Numeric, message) {}
};

/// An iteration left its invariant region by far more than the tolerance.
class InstabilityError : public Error {
  public:
    explicit InstabilityError(const std::string& message)
        : Error(ErrorCategory::Numeric, message) {}
};

}  // namespace halflin
