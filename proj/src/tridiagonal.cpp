#include "tclab/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <tuple>

#include <Eigen/Eigenvalues>

#include "tclab/error.hpp"
#include "tclab/kernels.hpp"

namespace tclab {
namespace {

constexpr double kTinyPivot = 1e-300;
constexpr double kResidualTol = 1e-10;

double cabs1(Complex z) { return std::abs(z.real()) + std::abs(z.imag()); }

double euclid(std::span<const Complex> v) {
  return std::sqrt(kernels::active().weighted_sum_sq(v.data(), nullptr, v.size()));
}

}  // namespace

TridiagonalOperator::TridiagonalOperator(const Grid& g, std::vector<Complex> lower,
                                         std::vector<Complex> diag,
                                         std::vector<Complex> upper)
    : grid_(g), lower_(std::move(lower)), diag_(std::move(diag)),
      upper_(std::move(upper)) {
  const std::size_t n = g.size();
  if (diag_.size() != n || lower_.size() != n - 1 || upper_.size() != n - 1) {
    throw InvalidArgument("tridiagonal coefficient lengths do not match grid");
  }
}

TridiagonalOperator TridiagonalOperator::identity(const Grid& g) {
  const std::size_t n = g.size();
  return TridiagonalOperator(g, std::vector<Complex>(n - 1),
                             std::vector<Complex>(n, 1.0),
                             std::vector<Complex>(n - 1));
}

void TridiagonalOperator::apply(std::span<const Complex> x,
                                std::span<Complex> y) const {
  if (x.size() != size() || y.size() != size()) {
    throw GridMismatch("operator applied to a vector of the wrong length");
  }
  kernels::active().tridiag_apply(lower_.data(), diag_.data(), upper_.data(),
                                  x.data(), y.data(), size());
}

GridFunction TridiagonalOperator::apply(const GridFunction& f) const {
  require_same_grid(grid_, f.grid());
  GridFunction out(grid_);
  apply(f.values(), out.values());
  return out;
}

GridFunction apply(const TridiagonalOperator& A, const GridFunction& f) {
  return A.apply(f);
}

TridiagonalOperator TridiagonalOperator::shifted(Complex s) const {
  TridiagonalOperator out = *this;
  for (auto& d : out.diag_) d += s;
  return out;
}

TridiagonalOperator TridiagonalOperator::scaled(Complex c) const {
  TridiagonalOperator out = *this;
  for (auto& v : out.lower_) v *= c;
  for (auto& v : out.diag_) v *= c;
  for (auto& v : out.upper_) v *= c;
  return out;
}

TridiagonalOperator TridiagonalOperator::adjoint() const {
  std::vector<Complex> lo(upper_.size()), di(diag_.size()), up(lower_.size());
  for (std::size_t i = 0; i < upper_.size(); ++i) lo[i] = std::conj(upper_[i]);
  for (std::size_t i = 0; i < diag_.size(); ++i) di[i] = std::conj(diag_[i]);
  for (std::size_t i = 0; i < lower_.size(); ++i) up[i] = std::conj(lower_[i]);
  return TridiagonalOperator(grid_, std::move(lo), std::move(di), std::move(up));
}

double TridiagonalOperator::norm_inf() const {
  double best = 0.0;
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    double row = std::abs(diag_[i]);
    if (i > 0) row += std::abs(lower_[i - 1]);
    if (i + 1 < n) row += std::abs(upper_[i]);
    best = std::max(best, row);
  }
  return best;
}

TridiagonalOperator operator+(const TridiagonalOperator& a,
                              const TridiagonalOperator& b) {
  require_same_grid(a.grid_, b.grid_);
  TridiagonalOperator out = a;
  for (std::size_t i = 0; i < out.lower_.size(); ++i) out.lower_[i] += b.lower_[i];
  for (std::size_t i = 0; i < out.diag_.size(); ++i) out.diag_[i] += b.diag_[i];
  for (std::size_t i = 0; i < out.upper_.size(); ++i) out.upper_[i] += b.upper_[i];
  return out;
}

TridiagonalOperator operator-(const TridiagonalOperator& a,
                              const TridiagonalOperator& b) {
  return a + b.scaled(-1.0);
}

TridiagonalLU::TridiagonalLU(const TridiagonalOperator& A) : a_(A) {
  factor(false);
  const bool tiny = std::any_of(d_.begin(), d_.end(), [](Complex p) {
    return !(std::abs(p) >= kTinyPivot) || !std::isfinite(std::abs(p));
  });
  if (tiny) factor(true);
}

void TridiagonalLU::factor(bool pivot) {
  const std::size_t n = a_.size();
  dl_.assign(a_.lower().begin(), a_.lower().end());
  d_.assign(a_.diag().begin(), a_.diag().end());
  du_.assign(a_.upper().begin(), a_.upper().end());
  du2_.assign(n >= 2 ? n - 2 : 0, Complex{});
  ipiv_.resize(n);
  for (std::size_t i = 0; i < n; ++i) ipiv_[i] = i;
  pivoted_ = pivot;

  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!pivot || cabs1(d_[i]) >= cabs1(dl_[i])) {
      if (d_[i] != Complex{}) {
        const Complex fact = dl_[i] / d_[i];
        dl_[i] = fact;
        d_[i + 1] -= fact * du_[i];
      }
    } else {
      const Complex fact = d_[i] / dl_[i];
      d_[i] = dl_[i];
      dl_[i] = fact;
      const Complex temp = du_[i];
      du_[i] = d_[i + 1];
      d_[i + 1] = temp - fact * d_[i + 1];
      if (i + 2 < n) {
        du2_[i] = du_[i + 1];
        du_[i + 1] = -fact * du_[i + 1];
      }
      ipiv_[i] = i + 1;
    }
  }
  if (pivot) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!(std::abs(d_[i]) >= kTinyPivot)) {
        throw SingularMatrix(i, "tridiagonal matrix is singular at pivot " +
                                    std::to_string(i));
      }
    }
  }
}

void TridiagonalLU::solve_in_place(std::span<Complex> b) const {
  const std::size_t n = d_.size();
  if (b.size() != n) throw GridMismatch("right-hand side has the wrong length");
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (ipiv_[i] == i) {
      b[i + 1] -= dl_[i] * b[i];
    } else {
      const Complex temp = b[i];
      b[i] = b[i + 1];
      b[i + 1] = temp - dl_[i] * b[i];
    }
  }
  b[n - 1] /= d_[n - 1];
  if (n > 1) b[n - 2] = (b[n - 2] - du_[n - 2] * b[n - 1]) / d_[n - 2];
  for (std::size_t i = n - 2; i-- > 0;) {
    b[i] = (b[i] - du_[i] * b[i + 1] - du2_[i] * b[i + 2]) / d_[i];
  }
}

GridFunction TridiagonalLU::solve(const GridFunction& rhs) {
  require_same_grid(a_.grid(), rhs.grid());
  const std::size_t n = rhs.size();
  const double anorm = a_.norm_inf();
  const double bnorm = euclid(rhs.values());

  for (int attempt = 0; attempt < 2; ++attempt) {
    GridFunction x = rhs;
    solve_in_place(x.values());
    std::vector<Complex> ax(n), r(n);
    a_.apply(x.values(), ax);
    for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - ax[i];
    solve_in_place(r);
    for (std::size_t i = 0; i < n; ++i) x[i] += r[i];

    a_.apply(x.values(), ax);
    for (std::size_t i = 0; i < n; ++i) r[i] = ax[i] - rhs[i];
    const double res = euclid(r);
    const bool ok = x.all_finite() &&
                    res <= kResidualTol * (anorm * euclid(x.values()) + bnorm);
    if (ok) return x;
    if (pivoted_) {
      throw NumericalFailure("tridiagonal solve missed the residual target (" +
                             std::to_string(res) + ")");
    }
    factor(true);
  }
  throw NumericalFailure("tridiagonal solve failed");
}

GridFunction solve_tridiagonal(const TridiagonalOperator& A,
                               const GridFunction& rhs) {
  TridiagonalLU lu(A);
  return lu.solve(rhs);
}

SingularValueResult smallest_singular_triplet(const TridiagonalOperator& A,
                                              const WeightSpec& w_in,
                                              const WeightSpec& w_out,
                                              const SingularValueOptions& opt) {
  const Grid& g = A.grid();
  const std::size_t n = A.size();

  // S = diag(sqrt(w)) and M = S_out A S_in^{-1}.
  auto root = [n](const std::vector<double>& w) {
    std::vector<double> s(n, 1.0);
    for (std::size_t i = 0; i < w.size(); ++i) s[i] = std::sqrt(w[i]);
    return s;
  };
  const std::vector<double> s_in = root(w_in.sample(g));
  const std::vector<double> s_out = root(w_out.sample(g));
  std::vector<double> inv_s_out_sq(n);
  for (std::size_t i = 0; i < n; ++i) inv_s_out_sq[i] = 1.0 / (s_out[i] * s_out[i]);

  std::optional<TridiagonalLU> lu, lu_h;
  try {
    lu.emplace(A);
    lu_h.emplace(A.adjoint());
  } catch (const SingularMatrix&) {
    return {};
  }

  const auto& k = kernels::active();
  auto dot = [&k, n](const std::vector<Complex>& x, const std::vector<Complex>& y) {
    return k.weighted_dot(x.data(), y.data(), nullptr, n);
  };
  auto norm = [&k, n](const std::vector<Complex>& x) {
    return std::sqrt(k.weighted_sum_sq(x.data(), nullptr, n));
  };
  std::vector<Complex> scratch(n);
  // K y = (M^H M)^{-1} y = S_in A^{-1} S_out^{-2} A^{-H} S_in y.
  auto apply_k = [&](const std::vector<Complex>& y, std::vector<Complex>& z) {
    k.scale_by(s_in.data(), y.data(), scratch.data(), n);
    lu_h->solve_in_place(scratch);
    k.scale_by(inv_s_out_sq.data(), scratch.data(), z.data(), n);
    lu->solve_in_place(z);
    k.scale_by(s_in.data(), z.data(), z.data(), n);
  };

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> normal;
  std::vector<Complex> y(n);
  for (auto& v : y) v = {normal(rng), normal(rng)};
  {
    const double y0 = norm(y);
    for (auto& v : y) v /= y0;
  }

  // Restarted Lanczos on K with full reorthogonalization; the largest Ritz
  // value theta of K gives sigma = theta^{-1/2}.
  const std::size_t m = std::min<std::size_t>(n, 80);
  std::vector<std::vector<Complex>> Q;
  Q.reserve(m + 1);
  std::vector<Complex> v(n);
  int applications = 0;
  double gap = std::numeric_limits<double>::infinity();
  double prev_sigma = -1.0;
  std::vector<double> alpha, beta;
  int stalls = 0;
  auto ritz = [&](std::size_t dim) {
    Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), dim);
    Eigen::VectorXd sub = Eigen::Map<Eigen::VectorXd>(beta.data(), dim - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    return std::pair<double, Eigen::VectorXd>(es.eigenvalues()[dim - 1],
                                              es.eigenvectors().col(dim - 1));
  };
  while (applications < opt.max_iterations) {
    Q.clear();
    Q.push_back(y);
    alpha.clear();
    beta.clear();
    double theta = 0.0;
    Eigen::VectorXd s;
    bool converged = false;
    for (std::size_t j = 0; j < m && applications < opt.max_iterations; ++j) {
      apply_k(Q[j], v);
      ++applications;
      alpha.push_back(dot(v, Q[j]).real());
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& q : Q) {
          const Complex c = dot(v, q);
          for (std::size_t i = 0; i < n; ++i) v[i] -= c * q[i];
        }
      }
      const double b_j = norm(v);
      if (!std::isfinite(b_j)) {
        throw NumericalFailure("Lanczos produced a non-finite vector");
      }
      std::tie(theta, s) = ritz(alpha.size());
      if (!(theta > 0.0)) throw NumericalFailure("non-positive Ritz value");
      const double residual = b_j * std::abs(s[s.size() - 1]) / theta;
      const double sigma = 1.0 / std::sqrt(theta);
      gap = prev_sigma > 0.0 ? std::abs(sigma - prev_sigma) / sigma : residual;
      prev_sigma = sigma;
      // Either the Ritz pair is accurate, or successive estimates have settled
      // (tight clusters, where every Ritz value in the cluster is an answer).
      stalls = gap <= opt.rel_tol ? stalls + 1 : 0;
      if (residual <= opt.rel_tol || stalls >= 2) {
        converged = true;
        break;
      }
      if (j + 1 == m) break;
      beta.push_back(b_j);
      Q.emplace_back(n);
      for (std::size_t i = 0; i < n; ++i) Q.back()[i] = v[i] / b_j;
    }

    std::fill(y.begin(), y.end(), Complex{});
    for (Eigen::Index j = 0; j < s.size(); ++j) {
      for (std::size_t i = 0; i < n; ++i) y[i] += s[j] * Q[j][i];
    }
    const double yn = norm(y);
    for (auto& x : y) x /= yn;

    if (converged) {
      SingularValueResult out;
      out.sigma = 1.0 / std::sqrt(theta);
      out.iterations = applications;
      // x = S_in^{-1} y, unit in the w_in quadrature norm.
      out.vector.resize(n);
      const double xn = std::sqrt(g.h());
      for (std::size_t i = 0; i < n; ++i) out.vector[i] = y[i] / (s_in[i] * xn);
      return out;
    }
  }
  throw NonConvergence(applications, gap,
                       "smallest singular value did not converge");
}

double smallest_singular_value(const TridiagonalOperator& A,
                               const WeightSpec& w_in, const WeightSpec& w_out,
                               const SingularValueOptions& opt) {
  return smallest_singular_triplet(A, w_in, w_out, opt).sigma;
}

}  // namespace tclab
