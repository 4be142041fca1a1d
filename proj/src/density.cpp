#include "twopiece/density.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "twopiece/errors.hpp"
#include "twopiece/special.hpp"

namespace twopiece {

std::string_view to_string(Family family) {
  switch (family) {
    case Family::sepd:
      return "sepd";
    case Family::sgld:
      return "sgld";
    case Family::beta_logistic:
      return "beta-logistic";
  }
  throw DomainError("unknown family tag");
}

Family family_from_string(std::string_view name) {
  if (name == "sepd") return Family::sepd;
  if (name == "sgld") return Family::sgld;
  if (name == "beta-logistic" || name == "bb") return Family::beta_logistic;
  throw DomainError("unknown family '" + std::string(name) + "'");
}

TwoPieceParams::TwoPieceParams(double alpha, int p, double mu, double sigma)
    : alpha_(alpha), p_(p), mu_(mu), sigma_(sigma) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  if (p < 1) throw DomainError("tail parameter p must be an integer >= 1");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("sigma must be positive");
  if (!std::isfinite(mu)) throw DomainError("mu must be finite");
}

double sepd_log_norm_const(double p) {
  return -std::numbers::ln2 - std::log(p) / p - log_gamma(1.0 + 1.0 / p);
}

namespace detail {

double exp_power_base_log_pdf(double x, double p) {
  return sepd_log_norm_const(p) - std::pow(std::abs(x), p) / p;
}

double gen_logistic_base_log_pdf(double x, double p) {
  // p x - 2p log(1 + e^x) is even in x: -p (|x| + 2 log1p(e^{-|x|})).
  const double a = std::abs(x);
  return -p * (a + 2.0 * std::log1p(std::exp(-a))) - log_beta(p, p);
}

namespace {

template <class Base>
double two_piece_std(double z, double alpha, Base&& base) {
  const double half_scale = z <= 0.0 ? 2.0 * alpha : 2.0 * (1.0 - alpha);
  return base(z / half_scale);
}

}  // namespace

double sepd_std_log_pdf(double z, double alpha, double p) {
  return two_piece_std(z, alpha, [p](double x) { return exp_power_base_log_pdf(x, p); });
}

double sgld_std_log_pdf(double z, double alpha, double p) {
  return two_piece_std(z, alpha, [p](double x) { return gen_logistic_base_log_pdf(x, p); });
}

}  // namespace detail

double two_piece_log_pdf(double y, Family family, const TwoPieceParams& params) {
  const double z = (y - params.mu()) / params.sigma();
  double log_std = 0.0;
  switch (family) {
    case Family::sepd:
      log_std = detail::sepd_std_log_pdf(z, params.alpha(), params.p());
      break;
    case Family::sgld:
      log_std = detail::sgld_std_log_pdf(z, params.alpha(), params.p());
      break;
    default:
      throw DomainError("two_piece_log_pdf: family '" + std::string(to_string(family)) +
                        "' is not a two-piece family");
  }
  return log_std - std::log(params.sigma());
}

double sepd_log_pdf(double y, const TwoPieceParams& params) {
  return two_piece_log_pdf(y, Family::sepd, params);
}

double sgld_log_pdf(double y, const TwoPieceParams& params) {
  return two_piece_log_pdf(y, Family::sgld, params);
}

double bb_log_pdf(double x, int p, double mu, double sigma) {
  if (p < 1) throw DomainError("bb_log_pdf: p must be >= 1");
  if (!(sigma > 0.0)) throw DomainError("bb_log_pdf: sigma must be positive");
  return detail::gen_logistic_base_log_pdf((x - mu) / sigma, p) - std::log(sigma);
}

double sepd_pdf(double y, const TwoPieceParams& params) { return std::exp(sepd_log_pdf(y, params)); }
double sgld_pdf(double y, const TwoPieceParams& params) { return std::exp(sgld_log_pdf(y, params)); }
double two_piece_pdf(double y, Family family, const TwoPieceParams& params) {
  return std::exp(two_piece_log_pdf(y, family, params));
}

}  // namespace twopiece
