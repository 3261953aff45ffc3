#include "sparse_ridge/kernels.hpp"

namespace sridge::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void gemv_t_scalar(const double* a, std::size_t ld, std::size_t n, std::size_t p,
                   const double* w, double* out) {
  for (std::size_t j = 0; j < p; ++j) out[j] = dot_scalar(a + j * ld, w, n);
}

void rank1_columns_scalar(double* a, std::size_t ld, std::size_t n, std::size_t p,
                          const double* w, const double* coef) {
  for (std::size_t j = 0; j < p; ++j) axpy_scalar(-coef[j], w, a + j * ld, n);
}

}  // namespace

namespace detail {
const KernelTable scalar_table{dot_scalar, axpy_scalar, gemv_t_scalar, rank1_columns_scalar};
}

}  // namespace sridge::kernels
