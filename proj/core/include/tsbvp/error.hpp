#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace tsbvp {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A value violates a documented invariant (time-scale spec, config, barriers).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Grid index outside [0, N] or outside the interior range an operation needs.
class BoundsError : public Error {
 public:
  using Error::Error;
};

// A time value that is not a point of the grid was used where one is required.
class LookupError : public Error {
 public:
  using Error::Error;
};

// Two grid functions that should share a grid do not.
class AlignmentError : public Error {
 public:
  using Error::Error;
};

// A right-hand side produced a non-finite value or faulted at (t, x).
class EvaluationError : public Error {
 public:
  EvaluationError(const std::string& what, double t, double x,
                  bool potential_singularity)
      : Error(what), t_(t), x_(x), potential_singularity_(potential_singularity) {}

  double t() const noexcept { return t_; }
  double x() const noexcept { return x_; }
  // Set for faults such as division by zero or 0 raised to a negative power,
  // which a singular solver treats as evidence of a singularity.
  bool potential_singularity() const noexcept { return potential_singularity_; }

 private:
  double t_;
  double x_;
  bool potential_singularity_;
};

// An iterative method exhausted its budget. Carries the per-iteration trace.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, std::vector<double> trace)
      : Error(what), trace_(std::move(trace)) {}

  const std::vector<double>& trace() const noexcept { return trace_; }

 private:
  std::vector<double> trace_;
};

// Shooting could not find a sign change of the terminal mismatch.
class BracketingError : public Error {
 public:
  using Error::Error;
};

}  // namespace tsbvp
