#include "twopiece/kl.hpp"

#include <cmath>
#include <limits>

#include "twopiece/density.hpp"
#include "twopiece/errors.hpp"
#include "twopiece/special.hpp"

namespace twopiece {
namespace {

void check_tail(double p, double p_prime, const char* fn) {
  if (!(p >= 1.0) || !(p_prime >= 1.0)) {
    throw DomainError(std::string(fn) + ": tail parameters must be >= 1");
  }
}

}  // namespace

double kl_sepd_real(double p, double p_prime) {
  check_tail(p, p_prime, "kl_sepd");
  if (p == p_prime) return 0.0;
  const double log_ratio_term = (p_prime / p) * std::log(p) - std::log(p_prime) +
                                log_gamma((p_prime + 1.0) / p) - log_gamma(1.0 / p);
  return sepd_log_norm_const(p) - sepd_log_norm_const(p_prime) - 1.0 / p + std::exp(log_ratio_term);
}

double kl_sgld_real(double p, double p_prime) {
  check_tail(p, p_prime, "kl_sgld");
  if (p == p_prime) return 0.0;
  return log_beta_symmetric_diff(p, p_prime) + 2.0 * (p - p_prime) * (digamma(p) - digamma(2.0 * p));
}

double kl_sepd(int p, int p_prime) { return kl_sepd_real(p, p_prime); }
double kl_sgld(int p, int p_prime) { return kl_sgld_real(p, p_prime); }

double kl_closed_form(Family family, int p, int p_prime) {
  switch (family) {
    case Family::sepd:
      return kl_sepd(p, p_prime);
    case Family::sgld:
      return kl_sgld(p, p_prime);
    default:
      throw DomainError("kl_closed_form: family must be sepd or sgld");
  }
}

double kl_numeric(Family family, const TwoPieceParams& params_p,
                  const TwoPieceParams& params_p_prime, const QuadratureOptions& options) {
  if (params_p.alpha() != params_p_prime.alpha() || params_p.mu() != params_p_prime.mu() ||
      params_p.sigma() != params_p_prime.sigma()) {
    throw DomainError("kl_numeric: parameter sets must differ in p only");
  }
  if (family != Family::sepd && family != Family::sgld) {
    throw DomainError("kl_numeric: family must be sepd or sgld");
  }
  if (params_p.p() == params_p_prime.p()) return 0.0;
  auto integrand = [&](double y) {
    const double log_f = two_piece_log_pdf(y, family, params_p);
    if (log_f == -std::numeric_limits<double>::infinity()) return 0.0;
    const double f = std::exp(log_f);
    if (f == 0.0) return 0.0;
    return f * (log_f - two_piece_log_pdf(y, family, params_p_prime));
  };
  const double mu = params_p.mu();
  const double sigma = params_p.sigma();
  const double alpha = params_p.alpha();
  QuadratureOptions left = options;
  left.scale = 2.0 * alpha * sigma;
  QuadratureOptions right = options;
  right.scale = 2.0 * (1.0 - alpha) * sigma;
  const double inf = std::numeric_limits<double>::infinity();
  // Tolerance is split evenly between the two half-lines.
  left.abs_tol *= 0.5;
  right.abs_tol *= 0.5;
  const auto lo = integrate(integrand, -inf, mu, left);
  const auto hi = integrate(integrand, mu, inf, right);
  return lo.value + hi.value;
}

}  // namespace twopiece
