#pragma once

// Dense double-precision inner loops used by the greedy selector, the
// coordinate-descent engine and the relaxation solvers.
//
// Every kernel has a portable scalar reference implementation. When the
// library is built with AVX2 support and the running CPU reports AVX2+FMA,
// the vectorized variants are selected at first use. Setting the environment
// variable SRIDGE_SIMD=scalar forces the reference path.

#include <cstddef>
#include <span>
#include <string_view>

namespace sridge::kernels {

enum class Isa { scalar, avx2 };

struct KernelTable {
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // out[j] = column_j(A)^T w for a column-major n x p matrix with leading dim ld
  void (*gemv_t)(const double* a, std::size_t ld, std::size_t n, std::size_t p,
                 const double* w, double* out);
  // column_j(A) -= coef[j] * w for every column j
  void (*rank1_columns)(double* a, std::size_t ld, std::size_t n, std::size_t p,
                        const double* w, const double* coef);
};

const KernelTable& table(Isa isa);

/// True when the binary carries the variant and the CPU can execute it.
bool isa_available(Isa isa);

/// The ISA picked for this process (cached after the first call).
Isa active_isa();

std::string_view isa_name(Isa isa);

inline double dot(std::span<const double> a, std::span<const double> b) {
  return table(active_isa()).dot(a.data(), b.data(), a.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  table(active_isa()).axpy(alpha, x.data(), y.data(), x.size());
}

namespace detail {
extern const KernelTable scalar_table;
#if defined(SRIDGE_HAVE_AVX2)
extern const KernelTable avx2_table;
#endif
}  // namespace detail

}  // namespace sridge::kernels
