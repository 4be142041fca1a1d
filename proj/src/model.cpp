#include "twopiece/model.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "twopiece/density.hpp"
#include "twopiece/errors.hpp"
#include "twopiece/kernels.hpp"
#include "twopiece/special.hpp"

namespace twopiece {

std::string_view to_string(ModelKind kind) { return kind == ModelKind::ar1 ? "ar1" : "regression"; }

std::string_view to_string(ErrorDistribution errors) {
  switch (errors) {
    case ErrorDistribution::sepd:
      return "sepd";
    case ErrorDistribution::sgld:
      return "sgld";
    case ErrorDistribution::normal:
      return "normal";
  }
  return "unknown";
}

ErrorDistribution error_distribution_for(Family family) {
  switch (family) {
    case Family::sepd:
      return ErrorDistribution::sepd;
    case Family::sgld:
      return ErrorDistribution::sgld;
    default:
      throw DomainError("no error distribution for family " + std::string(to_string(family)));
  }
}

ModelSpec ModelSpec::autoregressive(std::span<const double> series, ErrorDistribution errors) {
  if (series.size() < 3) throw DataError("AR(1) model needs at least 3 observations");
  for (double v : series) {
    if (!std::isfinite(v)) throw DataError("AR(1) model: series contains non-finite values");
  }
  const auto t = static_cast<Eigen::Index>(series.size());
  ModelSpec m;
  m.kind_ = ModelKind::ar1;
  m.errors_ = errors;
  m.y_ = Eigen::Map<const Eigen::VectorXd>(series.data() + 1, t - 1);
  m.x_ = Eigen::Map<const Eigen::VectorXd>(series.data(), t - 1);
  m.gram_ = m.x_.transpose() * m.x_;
  if (!(m.gram_(0, 0) > 0.0)) throw DataError("AR(1) model: lagged series is identically zero");
  m.g_ = static_cast<double>(t);
  m.names_ = {"phi1"};
  return m;
}

ModelSpec ModelSpec::regression(Eigen::VectorXd y, Eigen::MatrixXd x, ErrorDistribution errors,
                                std::vector<std::string> coefficient_names) {
  if (y.size() != x.rows()) throw DataError("regression: response and design row counts differ");
  if (x.cols() < 1) throw DataError("regression: design has no columns");
  if (y.size() <= x.cols()) throw DataError("regression: need more observations than coefficients");
  if (!y.allFinite() || !x.allFinite()) throw DataError("regression: non-finite data");
  ModelSpec m;
  m.kind_ = ModelKind::regression;
  m.errors_ = errors;
  m.y_ = std::move(y);
  m.x_ = std::move(x);
  m.gram_ = m.x_.transpose() * m.x_;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m.gram_);
  if (lu.rank() < m.gram_.rows()) throw DataError("regression: X'X is singular");
  m.g_ = static_cast<double>(m.y_.size());
  if (coefficient_names.empty()) {
    for (Eigen::Index j = 0; j < m.x_.cols(); ++j) coefficient_names.push_back("beta" + std::to_string(j));
  }
  if (coefficient_names.size() != static_cast<std::size_t>(m.x_.cols())) {
    throw DataError("regression: coefficient name count does not match design columns");
  }
  m.names_ = std::move(coefficient_names);
  return m;
}

Eigen::VectorXd ModelSpec::ols() const { return gram_.ldlt().solve(x_.transpose() * y_); }

double ModelSpec::ols_residual_sd() const {
  const Eigen::VectorXd r = y_ - x_ * ols();
  const double dof = static_cast<double>(n() > k() ? n() - k() : 1);
  return std::sqrt(r.squaredNorm() / dof);
}

double error_log_likelihood(ErrorDistribution errors, std::span<const double> residuals,
                            const ErrorParams& params) {
  constexpr double neg_inf = -std::numeric_limits<double>::infinity();
  const double sigma = params.sigma;
  if (!(sigma > 0.0) || !std::isfinite(sigma)) return neg_inf;
  const double n = static_cast<double>(residuals.size());
  if (errors == ErrorDistribution::normal) {
    const double ss = kernels::sum_squares(residuals);
    return -0.5 * n * std::log(2.0 * std::numbers::pi) - n * std::log(sigma) - 0.5 * ss / (sigma * sigma);
  }
  const double alpha = params.alpha;
  if (!(alpha > 0.0 && alpha < 1.0) || params.p < 1) return neg_inf;
  const double inv_left = 1.0 / (2.0 * alpha * sigma);
  const double inv_right = 1.0 / (2.0 * (1.0 - alpha) * sigma);
  const double p = params.p;
  double value;
  if (errors == ErrorDistribution::sepd) {
    const double power_sum = kernels::sepd_power_sum(residuals, inv_left, inv_right, params.p);
    value = n * (sepd_log_norm_const(p) - std::log(sigma)) - power_sum / p;
  } else {
    const double s = kernels::sgld_sum(residuals, inv_left, inv_right);
    value = -n * (log_beta(p, p) + std::log(sigma)) - p * s;
  }
  return std::isnan(value) ? neg_inf : value;
}

double log_likelihood(const ModelSpec& model, std::span<const double> beta, const ErrorParams& params) {
  if (beta.size() != model.k()) throw DomainError("log_likelihood: coefficient dimension mismatch");
  std::vector<double> r(model.n());
  kernels::residuals({model.response().data(), model.n()}, {model.design().data(), model.n() * model.k()},
                     beta, r);
  return error_log_likelihood(model.errors(), r, params);
}

double loglik_ar_sepd(const ModelSpec& model, double phi1, const TwoPieceParams& params) {
  if (model.kind() != ModelKind::ar1) throw DomainError("loglik_ar_sepd: model is not AR(1)");
  if (params.mu() != 0.0) throw DomainError("loglik_ar_sepd: errors must have mu = 0");
  if (model.errors() != ErrorDistribution::sepd) throw DomainError("loglik_ar_sepd: model errors are not SEPD");
  const double beta[1] = {phi1};
  return log_likelihood(model, beta, {params.alpha(), params.p(), params.sigma()});
}

double loglik_reg_sgld(const ModelSpec& model, std::span<const double> beta, const TwoPieceParams& params) {
  if (params.mu() != 0.0) throw DomainError("loglik_reg_sgld: errors must have mu = 0");
  if (model.errors() != ErrorDistribution::sgld) throw DomainError("loglik_reg_sgld: model errors are not SGLD");
  return log_likelihood(model, beta, {params.alpha(), params.p(), params.sigma()});
}

}  // namespace twopiece
