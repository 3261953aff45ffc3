#include "sparse_ridge/kernels.hpp"

#include <cstdlib>
#include <string>

namespace sridge::kernels {

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(SRIDGE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table(Isa isa) {
#if defined(SRIDGE_HAVE_AVX2)
  if (isa == Isa::avx2) return detail::avx2_table;
#endif
  (void)isa;
  return detail::scalar_table;
}

static Isa pick_isa() {
  if (const char* env = std::getenv("SRIDGE_SIMD")) {
    if (std::string(env) == "scalar") return Isa::scalar;
  }
  return isa_available(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

Isa active_isa() {
  static const Isa isa = pick_isa();
  return isa;
}

std::string_view isa_name(Isa isa) {
  return isa == Isa::avx2 ? "avx2" : "scalar";
}

}  // namespace sridge::kernels
