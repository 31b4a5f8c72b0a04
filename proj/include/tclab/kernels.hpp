#pragma once

// Data-parallel inner loops shared by the numerics layer.
//
// Every kernel has a portable scalar reference implementation. On x86-64 an
// AVX2+FMA variant is compiled into a separate translation unit and selected
// at runtime when the CPU reports support. TCLAB_SIMD=scalar in the
// environment pins the scalar path.

#include <complex>
#include <cstddef>
#include <string_view>

namespace tclab::kernels {

using Complex = std::complex<double>;

enum class Isa { scalar, avx2 };

struct KernelTable {
  /// sum_i w[i] * |f[i]|^2; w == nullptr means unit weights.
  double (*weighted_sum_sq)(const Complex* f, const double* w, std::size_t n);
  /// sum_i w[i] * f[i] * conj(g[i]); w == nullptr means unit weights.
  Complex (*weighted_dot)(const Complex* f, const Complex* g, const double* w,
                          std::size_t n);
  /// y[i] = lower[i-1] x[i-1] + diag[i] x[i] + upper[i] x[i+1], zero outside.
  void (*tridiag_apply)(const Complex* lower, const Complex* diag,
                        const Complex* upper, const Complex* x, Complex* y,
                        std::size_t n);
  /// y[i] = a * x[i] + b * y[i] for real a, b.
  void (*axpby)(double a, const Complex* x, double b, Complex* y, std::size_t n);
  /// y[i] = s[i] * x[i] with real s.
  void (*scale_by)(const double* s, const Complex* x, Complex* y, std::size_t n);
  std::string_view name;
};

bool supported(Isa isa) noexcept;

/// Table for a specific instruction set; falls back to scalar if unsupported.
const KernelTable& table(Isa isa) noexcept;

/// Table chosen once per process (best supported, unless TCLAB_SIMD=scalar).
const KernelTable& active() noexcept;

Isa active_isa() noexcept;

namespace scalar {
extern const KernelTable kTable;
}

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
extern const KernelTable kTable;
}
#endif

}  // namespace tclab::kernels
