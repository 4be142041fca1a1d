#include "twopiece/sampling.hpp"

#include <cmath>
#include <limits>

#include "twopiece/density.hpp"
#include "twopiece/errors.hpp"

namespace twopiece {
namespace {

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// Marsaglia-Tsang for shape >= 1, returning log of the variate.
double log_gamma_mt(RngStream& stream, double shape) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = stream.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = stream.uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return std::log(d) + std::log(v);
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return std::log(d) + std::log(v);
  }
}

void check_shape(double shape) {
  if (!(shape > 0.0) || !std::isfinite(shape)) throw DomainError("gamma shape must be positive");
}

}  // namespace

double sample_log_gamma(RngStream& stream, double shape) {
  check_shape(shape);
  if (shape >= 1.0) return log_gamma_mt(stream, shape);
  const double boosted = log_gamma_mt(stream, shape + 1.0);
  return boosted + std::log(stream.uniform()) / shape;
}

double sample_gamma(RngStream& stream, double shape) {
  return std::exp(sample_log_gamma(stream, shape));
}

double sample_beta(RngStream& stream, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("beta shapes must be positive");
  const double lx = sample_log_gamma(stream, a);
  const double ly = sample_log_gamma(stream, b);
  // X / (X + Y) = 1 / (1 + exp(ly - lx)), always strictly inside (0, 1) unless
  // the log ratio exceeds the double range.
  const double t = 1.0 / (1.0 + std::exp(ly - lx));
  constexpr double tiny = std::numeric_limits<double>::denorm_min();
  return std::min(std::max(t, tiny), std::nextafter(1.0, 0.0));
}

double sample_bb(RngStream& stream, int p, double mu, double sigma) {
  if (p < 1) throw DomainError("sample_bb: p must be >= 1");
  if (!(sigma > 0.0)) throw DomainError("sample_bb: sigma must be positive");
  // logit(T) with T = X / (X + Y) is exactly log X - log Y; working from the
  // logs avoids forming 1 - T.
  const double lx = sample_log_gamma(stream, p);
  const double ly = sample_log_gamma(stream, p);
  return mu + sigma * (lx - ly);
}

namespace detail {

double sepd_transform_log(double u, double log_w1, double log_w2, double alpha, int p) {
  const double s = sign(u - alpha);
  const double inv_p = 1.0 / p;
  // 1 / (2 K(p) Gamma(1 + 1/p)) = p^{1/p}
  const double inv_c = std::pow(static_cast<double>(p), inv_p);
  double z = 0.0;
  if (s - 1.0 != 0.0) z += alpha * std::exp(log_w1 * inv_p) * (s - 1.0) * inv_c;
  if (s + 1.0 != 0.0) z += (1.0 - alpha) * std::exp(log_w2 * inv_p) * (s + 1.0) * inv_c;
  return z;
}

double sepd_transform(double u, double w1, double w2, double alpha, int p) {
  return sepd_transform_log(u, std::log(w1), std::log(w2), alpha, p);
}

double sgld_transform(double u, double w1, double w2, double alpha) {
  const double s = sign(u - alpha);
  return alpha * std::abs(w1) * (s - 1.0) + (1.0 - alpha) * std::abs(w2) * (s + 1.0);
}

}  // namespace detail

double sample_sepd(RngStream& stream, const TwoPieceParams& params) {
  const double u = stream.uniform();
  const double shape = 1.0 / params.p();
  const double lw1 = sample_log_gamma(stream, shape);
  const double lw2 = sample_log_gamma(stream, shape);
  return params.mu() +
         params.sigma() * detail::sepd_transform_log(u, lw1, lw2, params.alpha(), params.p());
}

double sample_sgld(RngStream& stream, const TwoPieceParams& params) {
  const double u = stream.uniform();
  const double w1 = sample_bb(stream, params.p(), 0.0, 1.0);
  const double w2 = sample_bb(stream, params.p(), 0.0, 1.0);
  return params.mu() + params.sigma() * detail::sgld_transform(u, w1, w2, params.alpha());
}

double sample_two_piece(RngStream& stream, Family family, const TwoPieceParams& params) {
  switch (family) {
    case Family::sepd:
      return sample_sepd(stream, params);
    case Family::sgld:
      return sample_sgld(stream, params);
    case Family::beta_logistic:
      return sample_bb(stream, params.p(), params.mu(), params.sigma());
  }
  throw DomainError("unknown family tag");
}

std::vector<double> sample_n(RngStream& stream, Family family, const TwoPieceParams& params,
                             std::size_t n) {
  std::vector<double> out(n);
  for (auto& x : out) x = sample_two_piece(stream, family, params);
  return out;
}

}  // namespace twopiece
