#pragma once

// Dense reference computations used to check the banded/iterative code paths.

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "tclab/tridiagonal.hpp"

namespace oracle {

using tclab::Complex;

inline Eigen::MatrixXcd dense(const tclab::TridiagonalOperator& A) {
  const auto n = static_cast<Eigen::Index>(A.size());
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    M(i, i) = A.diag()[i];
    if (i > 0) M(i, i - 1) = A.lower()[i - 1];
    if (i + 1 < n) M(i, i + 1) = A.upper()[i];
  }
  return M;
}

/// min ||A x||_{w_out} / ||x||_{w_in} with w given per node (empty: unit).
inline double weighted_sigma_min(const tclab::TridiagonalOperator& A,
                                 const std::vector<double>& w_in,
                                 const std::vector<double>& w_out) {
  Eigen::MatrixXcd M = dense(A);
  const auto n = M.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double so = w_out.empty() ? 1.0 : std::sqrt(w_out[i]);
    M.row(i) *= so;
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    const double si = w_in.empty() ? 1.0 : std::sqrt(w_in[j]);
    M.col(j) /= si;
  }
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(M);
  return svd.singularValues().minCoeff();
}

inline tclab::GridFunction random_function(const tclab::Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  tclab::GridFunction f(g);
  for (auto& v : f.values()) v = {normal(rng), normal(rng)};
  return f;
}

inline double l2(const tclab::GridFunction& f) {
  double s = 0.0;
  for (const auto& v : f.values()) s += std::norm(v);
  return std::sqrt(s * f.grid().h());
}

}  // namespace oracle
