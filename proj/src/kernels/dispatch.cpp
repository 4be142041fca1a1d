#include <atomic>
#include <cstdlib>
#include <string>

#include "twopiece/errors.hpp"
#include "twopiece/kernels.hpp"

namespace twopiece::kernels {
namespace detail {
#ifndef TWOPIECE_HAVE_AVX2_TU
const KernelTable* avx2_table() { return nullptr; }
#endif
}  // namespace detail

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa initial_isa() {
  if (const char* env = std::getenv("TWOPIECE_KERNELS"); env && std::string(env) == "scalar") {
    return Isa::scalar;
  }
  return isa_available(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& active_slot() {
  static std::atomic<Isa> slot{initial_isa()};
  return slot;
}

}  // namespace

std::string_view to_string(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) {
  if (isa == Isa::scalar) return true;
  static const bool avx2 = detail::avx2_table() != nullptr && cpu_has_avx2();
  return avx2;
}

Isa active_isa() { return active_slot().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (!isa_available(isa)) {
    throw ConfigError("kernel ISA '" + std::string(to_string(isa)) + "' is not available on this CPU");
  }
  active_slot().store(isa, std::memory_order_relaxed);
}

const KernelTable& table(Isa isa) {
  if (isa == Isa::avx2) {
    if (!isa_available(Isa::avx2)) throw ConfigError("AVX2 kernels unavailable");
    return *detail::avx2_table();
  }
  return detail::scalar_table();
}

const KernelTable& active() { return table(active_isa()); }

void residuals(std::span<const double> y, std::span<const double> x_colmajor,
               std::span<const double> beta, std::span<double> out) {
  const std::size_t n = y.size();
  if (out.size() != n || x_colmajor.size() != n * beta.size()) {
    throw DomainError("kernels::residuals: dimension mismatch");
  }
  active().residuals(y.data(), x_colmajor.data(), n, beta.data(), beta.size(), out.data());
}

double sepd_power_sum(std::span<const double> r, double inv_left, double inv_right, int p) {
  return active().sepd_power_sum(r.data(), r.size(), inv_left, inv_right, p);
}

double sgld_sum(std::span<const double> r, double inv_left, double inv_right) {
  return active().sgld_sum(r.data(), r.size(), inv_left, inv_right);
}

double sum_squares(std::span<const double> r) { return active().sum_squares(r.data(), r.size()); }

}  // namespace twopiece::kernels
