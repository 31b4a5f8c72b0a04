#include <cstdlib>
#include <string_view>

#include "tclab/kernels.hpp"

namespace tclab::kernels {

bool supported(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(__x86_64__) || defined(_M_X64)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table(Isa isa) noexcept {
#if defined(__x86_64__) || defined(_M_X64)
  if (isa == Isa::avx2 && supported(Isa::avx2)) return avx2::kTable;
#endif
  (void)isa;
  return scalar::kTable;
}

namespace {

Isa select_isa() noexcept {
  if (const char* env = std::getenv("TCLAB_SIMD")) {
    if (std::string_view(env) == "scalar") return Isa::scalar;
  }
  return supported(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

}  // namespace

Isa active_isa() noexcept {
  static const Isa isa = select_isa();
  return isa;
}

const KernelTable& active() noexcept {
  static const KernelTable& t = table(active_isa());
  return t;
}

}  // namespace tclab::kernels
