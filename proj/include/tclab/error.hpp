#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tclab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on user-supplied input was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Two grid functions or operators live on different grids.
class GridMismatch : public Error {
 public:
  using Error::Error;
};

/// LU factorization hit a vanishing pivot.
class SingularMatrix : public Error {
 public:
  SingularMatrix(std::size_t pivot_index, const std::string& what)
      : Error(what), pivot_index_(pivot_index) {}
  std::size_t pivot_index() const noexcept { return pivot_index_; }

 private:
  std::size_t pivot_index_;
};

/// An iterative method did not reach its tolerance.
class NonConvergence : public Error {
 public:
  NonConvergence(int iterations, double last_gap, const std::string& what)
      : Error(what), iterations_(iterations), last_gap_(last_gap) {}
  int iterations() const noexcept { return iterations_; }
  double last_gap() const noexcept { return last_gap_; }

 private:
  int iterations_;
  double last_gap_;
};

/// A computation produced NaN/Inf or violated a numerical sanity check.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace tclab
