#include <cmath>

#include "twopiece/kernels.hpp"

namespace twopiece::kernels::detail {
namespace {

void residuals_scalar(const double* y, const double* x, std::size_t n, const double* beta,
                      std::size_t k, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = y[i];
  for (std::size_t j = 0; j < k; ++j) {
    const double b = beta[j];
    const double* col = x + j * n;
    for (std::size_t i = 0; i < n; ++i) out[i] -= b * col[i];
  }
}

double sepd_power_sum_scalar(const double* r, std::size_t n, double inv_left, double inv_right,
                             int p) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = r[i] <= 0.0 ? -r[i] * inv_left : r[i] * inv_right;
    sum += ipow(a, p);
  }
  return sum;
}

double sgld_sum_scalar(const double* r, std::size_t n, double inv_left, double inv_right) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = r[i] <= 0.0 ? -r[i] * inv_left : r[i] * inv_right;
    sum += a + 2.0 * std::log1p(std::exp(-a));
  }
  return sum;
}

double sum_squares_scalar(const double* r, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += r[i] * r[i];
  return sum;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{residuals_scalar, sepd_power_sum_scalar, sgld_sum_scalar,
                                 sum_squares_scalar};
  return table;
}

}  // namespace twopiece::kernels::detail
