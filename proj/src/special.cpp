#include "twopiece/special.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "twopiece/errors.hpp"

namespace twopiece {
namespace {

void require_positive(double x, const char* fn) {
  if (!(x > 0.0)) {
    throw DomainError(std::string(fn) + ": argument must be positive, got " + std::to_string(x));
  }
}

// B_{2k} for k = 1..9.
constexpr std::array<double, 9> kBernoulli = {
    1.0 / 6.0,   -1.0 / 30.0,      1.0 / 42.0,     -1.0 / 30.0,   5.0 / 66.0,
    -691.0 / 2730.0, 7.0 / 6.0, -3617.0 / 510.0, 43867.0 / 798.0};

constexpr int kZetaTerms = 48;

// zeta(k) for k = 2..kZetaTerms+1 by Euler-Maclaurin summation with N = 16.
std::array<double, kZetaTerms + 2> make_zeta_table() {
  std::array<double, kZetaTerms + 2> zeta{};
  constexpr int n_head = 16;
  for (int k = 2; k < kZetaTerms + 2; ++k) {
    double s = 0.0;
    for (int n = n_head - 1; n >= 1; --n) s += std::pow(static_cast<double>(n), -k);
    const double big_n = n_head;
    s += std::pow(big_n, 1.0 - k) / (k - 1) + 0.5 * std::pow(big_n, -k);
    // sum_j B_{2j}/(2j)! * k(k+1)...(k+2j-2) * N^{-k-2j+1}
    double rising = k;  // k(k+1)...(k+2j-2), starts at j = 1
    double fact = 2.0;  // (2j)!
    for (int j = 1; j <= 6; ++j) {
      s += kBernoulli[j - 1] / fact * rising * std::pow(big_n, -k - 2 * j + 1);
      rising *= (k + 2 * j - 1) * static_cast<double>(k + 2 * j);
      fact *= (2 * j + 1) * static_cast<double>(2 * j + 2);
    }
    zeta[k] = s;
  }
  return zeta;
}

const std::array<double, kZetaTerms + 2>& zeta_table() {
  static const auto table = make_zeta_table();
  return table;
}

// log Gamma(1 + z) = -gamma z + sum_{k>=2} zeta(k) (-z)^k / k, for |z| <= 0.25.
double log_gamma_1p_series(double z) {
  const auto& zeta = zeta_table();
  double sum = 0.0;
  double power = -z;
  for (int k = 2; k < kZetaTerms + 2; ++k) {
    power *= -z;
    const double term = zeta[k] * power / k;
    sum += term;
    if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
  }
  return -kEulerGamma * z + sum;
}

double stirling_log_gamma(double x) {
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double series = 0.0;
  double pw = inv;
  for (int k = 1; k <= 8; ++k) {
    series += kBernoulli[k - 1] / (2.0 * k * (2.0 * k - 1.0)) * pw;
    pw *= inv2;
  }
  constexpr double half_log_two_pi = 0.91893853320467274178032973640561764;
  return (x - 0.5) * std::log(x) - x + half_log_two_pi + series;
}

}  // namespace

double log_gamma(double x) {
  require_positive(x, "log_gamma");
  if (std::isinf(x)) return x;
  if (std::abs(x - 1.0) <= 0.25) return log_gamma_1p_series(x - 1.0);
  if (std::abs(x - 2.0) <= 0.25) {
    const double z = x - 2.0;
    return std::log1p(z) + log_gamma_1p_series(z);
  }
  if (x >= 10.0) return stirling_log_gamma(x);
  // Shift upward: Gamma(x) = Gamma(x + n) / (x (x+1) ... (x+n-1)).
  double prod = 1.0;
  double shifted = x;
  while (shifted < 10.0) {
    prod *= shifted;
    shifted += 1.0;
  }
  return stirling_log_gamma(shifted) - std::log(prod);
}

double digamma(double x) {
  require_positive(x, "digamma");
  if (std::isinf(x)) return x;
  double acc = 0.0;
  while (x < 10.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double series = 0.0;
  double pw = inv2;
  for (int k = 1; k <= 8; ++k) {
    series += kBernoulli[k - 1] / (2.0 * k) * pw;
    pw *= inv2;
  }
  return acc + std::log(x) - 0.5 * inv - series;
}

double log_beta(double a, double b) {
  require_positive(a, "log_beta");
  require_positive(b, "log_beta");
  return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

double log_beta_symmetric_diff(double a, double b) {
  require_positive(a, "log_beta_symmetric_diff");
  require_positive(b, "log_beta_symmetric_diff");
  const bool integral = std::floor(a) == a && std::floor(b) == b;
  if (!integral || std::abs(b - a) > 64.0) return log_beta(b, b) - log_beta(a, a);
  // B(k+1, k+1) / B(k, k) = k / (2 (2k + 1)) = 1 / (4 (1 + 1/(2k)))
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  double sum = 0.0;
  for (double k = lo; k < hi; k += 1.0) sum -= std::log1p(0.5 / k);
  sum -= (hi - lo) * 2.0 * std::numbers::ln2;
  return b >= a ? sum : -sum;
}

double softplus(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

}  // namespace twopiece
