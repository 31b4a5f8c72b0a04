#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tclab/grid.hpp"

namespace tclab {

/// Complex tridiagonal matrix acting on interior values of a grid.
class TridiagonalOperator {
 public:
  TridiagonalOperator(const Grid& g, std::vector<Complex> lower,
                      std::vector<Complex> diag, std::vector<Complex> upper);

  static TridiagonalOperator identity(const Grid& g);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return diag_.size(); }
  std::span<const Complex> lower() const noexcept { return lower_; }
  std::span<const Complex> diag() const noexcept { return diag_; }
  std::span<const Complex> upper() const noexcept { return upper_; }

  void apply(std::span<const Complex> x, std::span<Complex> y) const;
  GridFunction apply(const GridFunction& f) const;

  /// A + s I.
  TridiagonalOperator shifted(Complex s) const;
  /// c A.
  TridiagonalOperator scaled(Complex c) const;
  /// Conjugate transpose (plain Euclidean adjoint).
  TridiagonalOperator adjoint() const;
  /// Max absolute row sum.
  double norm_inf() const;

  friend TridiagonalOperator operator+(const TridiagonalOperator& a,
                                       const TridiagonalOperator& b);
  friend TridiagonalOperator operator-(const TridiagonalOperator& a,
                                       const TridiagonalOperator& b);

 private:
  Grid grid_;
  std::vector<Complex> lower_;
  std::vector<Complex> diag_;
  std::vector<Complex> upper_;
};

GridFunction apply(const TridiagonalOperator& A, const GridFunction& f);

/// LU factorization of a tridiagonal matrix. Tries elimination without
/// pivoting first and refactors with partial pivoting (LAPACK gttrf layout)
/// when a pivot is tiny or the refined solution misses the residual target.
class TridiagonalLU {
 public:
  explicit TridiagonalLU(const TridiagonalOperator& A);

  /// Plain forward/back substitution, in place.
  void solve_in_place(std::span<Complex> b) const;

  /// Solve with one step of iterative refinement and a residual check.
  GridFunction solve(const GridFunction& rhs);

  bool pivoted() const noexcept { return pivoted_; }

 private:
  void factor(bool pivot);

  TridiagonalOperator a_;
  std::vector<Complex> dl_, d_, du_, du2_;
  std::vector<std::size_t> ipiv_;
  bool pivoted_ = false;
};

GridFunction solve_tridiagonal(const TridiagonalOperator& A,
                               const GridFunction& rhs);

struct SingularValueOptions {
  double rel_tol = 1e-8;
  int max_iterations = 500;
  std::uint64_t seed = 0x7c1ab5eedULL;
};

struct SingularValueResult {
  double sigma = 0.0;
  int iterations = 0;
  /// Minimizing input vector, unit in the w_in norm (empty if A is singular).
  std::vector<Complex> vector;
};

/// min ||A x||_{w_out} / ||x||_{w_in} by inverse iteration on the weighted
/// normal operator. Returns 0 when A is singular.
SingularValueResult smallest_singular_triplet(const TridiagonalOperator& A,
                                              const WeightSpec& w_in,
                                              const WeightSpec& w_out,
                                              const SingularValueOptions& opt = {});

double smallest_singular_value(const TridiagonalOperator& A,
                               const WeightSpec& w_in, const WeightSpec& w_out,
                               const SingularValueOptions& opt = {});

}  // namespace tclab
