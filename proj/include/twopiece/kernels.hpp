#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace twopiece::kernels {

// Hot loops of the log-likelihood: residual formation and the per-family
// residual sums. Each exists as a scalar reference and, on x86-64, as an
// AVX2/FMA variant chosen at runtime. The two agree to rounding (different
// summation order and fused multiply-adds); tests pin that equivalence.
//
// Selection: AVX2 when the CPU reports avx2 and fma, unless the environment
// variable TWOPIECE_KERNELS=scalar is set.

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);
bool isa_available(Isa isa);
Isa active_isa();
// Overrides the runtime choice (tests, benchmarks). Throws if unavailable.
void set_active_isa(Isa isa);

struct KernelTable {
  // out[i] = y[i] - sum_j beta[j] * x[j * n + i], x column-major n-by-k.
  void (*residuals)(const double* y, const double* x, std::size_t n, const double* beta,
                    std::size_t k, double* out);
  // sum_i (|r_i| * s_i)^p with s_i = inv_left for r_i <= 0, inv_right otherwise.
  double (*sepd_power_sum)(const double* r, std::size_t n, double inv_left, double inv_right, int p);
  // sum_i a_i + 2 log1p(exp(-a_i)), a_i = |r_i| * s_i as above.
  double (*sgld_sum)(const double* r, std::size_t n, double inv_left, double inv_right);
  // sum_i r_i^2
  double (*sum_squares)(const double* r, std::size_t n);
};

const KernelTable& table(Isa isa);
const KernelTable& active();

// Convenience wrappers over the active table.
void residuals(std::span<const double> y, std::span<const double> x_colmajor,
               std::span<const double> beta, std::span<double> out);
double sepd_power_sum(std::span<const double> r, double inv_left, double inv_right, int p);
double sgld_sum(std::span<const double> r, double inv_left, double inv_right);
double sum_squares(std::span<const double> r);

namespace detail {
const KernelTable& scalar_table();
const KernelTable* avx2_table();  // nullptr when not compiled in

// x^p for integer p >= 1 by binary exponentiation; the vector kernels use the
// same multiplication order.
inline double ipow(double x, int p) {
  double result = 1.0;
  double base = x;
  while (p > 0) {
    if (p & 1) result *= base;
    base *= base;
    p >>= 1;
  }
  return result;
}
}  // namespace detail

}  // namespace twopiece::kernels
