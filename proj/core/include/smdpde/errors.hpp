#pragma once

#include <stdexcept>
#include <string>

namespace smdpde {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: out-of-range tuning parameter, non-finite entries,
/// mismatched lengths, asymmetric matrices.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Parameter outside the model's domain (non-positive variance, |rho| >= 1).
class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Sample that carries no scale information (constant column).
class DegenerateSampleError : public Error {
 public:
  DegenerateSampleError(const std::string& what, long column = -1)
      : Error(what), column_(column) {}

  /// Zero-based column index, or -1 when not attached to a data matrix.
  long column() const noexcept { return column_; }

 private:
  long column_;
};

/// Numerical breakdown: singular systems, failed factorizations.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, double condition = 0.0)
      : Error(what), condition_(condition) {}

  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

}  // namespace smdpde
