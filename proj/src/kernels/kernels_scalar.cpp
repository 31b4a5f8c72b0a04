#include "tclab/kernels.hpp"

namespace tclab::kernels::scalar {
namespace {

double weighted_sum_sq(const Complex* f, const double* w, std::size_t n) {
  double acc = 0.0;
  if (w == nullptr) {
    for (std::size_t i = 0; i < n; ++i) acc += std::norm(f[i]);
  } else {
    for (std::size_t i = 0; i < n; ++i) acc += w[i] * std::norm(f[i]);
  }
  return acc;
}

Complex weighted_dot(const Complex* f, const Complex* g, const double* w,
                     std::size_t n) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double wi = w == nullptr ? 1.0 : w[i];
    // f * conj(g)
    re += wi * (f[i].real() * g[i].real() + f[i].imag() * g[i].imag());
    im += wi * (f[i].imag() * g[i].real() - f[i].real() * g[i].imag());
  }
  return {re, im};
}

void tridiag_apply(const Complex* lower, const Complex* diag,
                   const Complex* upper, const Complex* x, Complex* y,
                   std::size_t n) {
  if (n == 0) return;
  if (n == 1) {
    y[0] = diag[0] * x[0];
    return;
  }
  y[0] = diag[0] * x[0] + upper[0] * x[1];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    y[i] = lower[i - 1] * x[i - 1] + diag[i] * x[i] + upper[i] * x[i + 1];
  }
  y[n - 1] = lower[n - 2] * x[n - 2] + diag[n - 1] * x[n - 1];
}

void axpby(double a, const Complex* x, double b, Complex* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = a * x[i] + b * y[i];
}

void scale_by(const double* s, const Complex* x, Complex* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = s[i] * x[i];
}

}  // namespace

const KernelTable kTable{&weighted_sum_sq, &weighted_dot, &tridiag_apply,
                         &axpby,           &scale_by,     "scalar"};

}  // namespace tclab::kernels::scalar
