#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace midalign {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Newton (or another iterative solver) failed; the last iterate is kept so
/// callers can report it.
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, std::vector<double> last_iterate)
      : Error(what), last_iterate_(std::move(last_iterate)) {}
  const std::vector<double>& last_iterate() const noexcept { return last_iterate_; }

 private:
  std::vector<double> last_iterate_;
};

class BlowUp : public Error {
 public:
  using Error::Error;
};

class LinearRegimeViolation : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

class EigenSolverFailure : public Error {
 public:
  using Error::Error;
};

/// 1 - 2 gamma_{i+j} Gamma((i+j)/2) vanished in a partition-series coupling.
class SingularDenominator : public Error {
 public:
  using Error::Error;
};

class DependencyOverflow : public Error {
 public:
  using Error::Error;
};

class NonPositiveDensity : public Error {
 public:
  using Error::Error;
};

class Antipodal : public Error {
 public:
  using Error::Error;
};

class InsufficientDecay : public Error {
 public:
  using Error::Error;
};

}  // namespace midalign
