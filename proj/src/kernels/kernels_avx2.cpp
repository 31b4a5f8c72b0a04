// AVX2 + FMA variants of the kernels in kernels_scalar.cpp.
// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include "tclab/kernels.hpp"

#include <immintrin.h>

namespace tclab::kernels::avx2 {
namespace {

// Two complex<double> per register: [re0 im0 re1 im1].
inline __m256d load2(const Complex* p) {
  return _mm256_loadu_pd(reinterpret_cast<const double*>(p));
}

inline void store2(Complex* p, __m256d v) {
  _mm256_storeu_pd(reinterpret_cast<double*>(p), v);
}

// [w0 w0 w1 w1]
inline __m256d load_weights_dup(const double* w) {
  const __m128d pair = _mm_loadu_pd(w);
  return _mm256_permute4x64_pd(_mm256_castpd128_pd256(pair), 0x50);
}

inline __m256d cmul(__m256d a, __m256d b) {
  const __m256d a_re = _mm256_movedup_pd(a);
  const __m256d a_im = _mm256_permute_pd(a, 0xF);
  const __m256d b_swap = _mm256_permute_pd(b, 0x5);
  return _mm256_fmaddsub_pd(a_re, b, _mm256_mul_pd(a_im, b_swap));
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double weighted_sum_sq(const Complex* f, const double* w, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  if (w == nullptr) {
    for (; i + 4 <= n; i += 4) {
      const __m256d a = load2(f + i);
      const __m256d b = load2(f + i + 2);
      acc0 = _mm256_fmadd_pd(a, a, acc0);
      acc1 = _mm256_fmadd_pd(b, b, acc1);
    }
  } else {
    for (; i + 4 <= n; i += 4) {
      const __m256d a = load2(f + i);
      const __m256d b = load2(f + i + 2);
      acc0 = _mm256_fmadd_pd(_mm256_mul_pd(a, a), load_weights_dup(w + i), acc0);
      acc1 = _mm256_fmadd_pd(_mm256_mul_pd(b, b), load_weights_dup(w + i + 2), acc1);
    }
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += (w == nullptr ? 1.0 : w[i]) * std::norm(f[i]);
  return acc;
}

Complex weighted_dot(const Complex* f, const Complex* g, const double* w,
                     std::size_t n) {
  // acc_re lanes sum to sum w (fr gr + fi gi);
  // acc_im lanes hold w [fr gi, fi gr]; im = sum(odd) - sum(even).
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d a = load2(f + i);
    const __m256d b = load2(g + i);
    const __m256d b_swap = _mm256_permute_pd(b, 0x5);
    if (w == nullptr) {
      acc_re = _mm256_fmadd_pd(a, b, acc_re);
      acc_im = _mm256_fmadd_pd(a, b_swap, acc_im);
    } else {
      const __m256d wd = load_weights_dup(w + i);
      acc_re = _mm256_fmadd_pd(_mm256_mul_pd(a, b), wd, acc_re);
      acc_im = _mm256_fmadd_pd(_mm256_mul_pd(a, b_swap), wd, acc_im);
    }
  }
  alignas(32) double im_lanes[4];
  _mm256_store_pd(im_lanes, acc_im);
  double re = hsum(acc_re);
  double im = (im_lanes[1] + im_lanes[3]) - (im_lanes[0] + im_lanes[2]);
  for (; i < n; ++i) {
    const double wi = w == nullptr ? 1.0 : w[i];
    re += wi * (f[i].real() * g[i].real() + f[i].imag() * g[i].imag());
    im += wi * (f[i].imag() * g[i].real() - f[i].real() * g[i].imag());
  }
  return {re, im};
}

void tridiag_apply(const Complex* lower, const Complex* diag,
                   const Complex* upper, const Complex* x, Complex* y,
                   std::size_t n) {
  if (n < 4) {
    scalar::kTable.tridiag_apply(lower, diag, upper, x, y, n);
    return;
  }
  y[0] = diag[0] * x[0] + upper[0] * x[1];
  std::size_t i = 1;
  for (; i + 2 < n; i += 2) {
    __m256d acc = cmul(load2(diag + i), load2(x + i));
    acc = _mm256_add_pd(acc, cmul(load2(lower + i - 1), load2(x + i - 1)));
    acc = _mm256_add_pd(acc, cmul(load2(upper + i), load2(x + i + 1)));
    store2(y + i, acc);
  }
  for (; i + 1 < n; ++i) {
    y[i] = lower[i - 1] * x[i - 1] + diag[i] * x[i] + upper[i] * x[i + 1];
  }
  y[n - 1] = lower[n - 2] * x[n - 2] + diag[n - 1] * x[n - 1];
}

void axpby(double a, const Complex* x, double b, Complex* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vb = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    store2(y + i, _mm256_fmadd_pd(va, load2(x + i), _mm256_mul_pd(vb, load2(y + i))));
  }
  for (; i < n; ++i) y[i] = a * x[i] + b * y[i];
}

void scale_by(const double* s, const Complex* x, Complex* y, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    store2(y + i, _mm256_mul_pd(load_weights_dup(s + i), load2(x + i)));
  }
  for (; i < n; ++i) y[i] = s[i] * x[i];
}

}  // namespace

const KernelTable kTable{&weighted_sum_sq, &weighted_dot, &tridiag_apply,
                         &axpby,           &scale_by,     "avx2"};

}  // namespace tclab::kernels::avx2
