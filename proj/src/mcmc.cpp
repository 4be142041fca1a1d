#include "twopiece/mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "twopiece/errors.hpp"
#include "twopiece/kernels.hpp"

namespace twopiece {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double logit(double a) { return std::log(a) - std::log1p(-a); }
double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

bool is_two_piece(ErrorDistribution e) { return e != ErrorDistribution::normal; }

int neighbour_count(int p, int p_max) { return (p == 1 || p == p_max) ? 1 : 2; }

}  // namespace

std::string_view to_string(Block block) {
  switch (block) {
    case Block::coefficients:
      return "coefficients";
    case Block::alpha:
      return "alpha";
    case Block::sigma:
      return "sigma";
    case Block::p:
      return "p";
  }
  return "unknown";
}

void MwgConfig::validate() const {
  if (n_iter < 1) throw ConfigError("mcmc: n_iter must be >= 1");
  if (n_burn < 0 || n_burn >= n_iter) throw ConfigError("mcmc: need 0 <= n_burn < n_iter");
  if (thin < 1) throw ConfigError("mcmc: thin must be >= 1");
  if (p_max < 2) throw ConfigError("mcmc: p_max must be >= 2");
  if (!(coef_scale >= 0.0) || !(alpha_scale >= 0.0) || !(sigma_scale >= 0.0)) {
    throw ConfigError("mcmc: proposal scales must be non-negative");
  }
  if (adapt && adapt_interval < 1) throw ConfigError("mcmc: adapt_interval must be >= 1");
  if (!(target_low > 0.0 && target_low < target_high && target_high < 1.0)) {
    throw ConfigError("mcmc: need 0 < target_low < target_high < 1");
  }
}

const std::vector<double>& Chain::column(std::string_view name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return draws[i];
  }
  throw DomainError("chain has no parameter '" + std::string(name) + "'");
}

bool Chain::has(std::string_view name) const {
  return std::find(names.begin(), names.end(), name) != names.end();
}

MwgSampler::MwgSampler(const ModelSpec& model, const TailPrior* tail_prior, const MwgConfig& config,
                       RngStream& stream)
    : model_(model),
      prior_(tail_prior),
      config_(config),
      stream_(stream),
      zellner_(model.gram(), model.g()),
      two_piece_(is_two_piece(model.errors())),
      coef_scale_(config.coef_scale),
      alpha_scale_(config.alpha_scale),
      sigma_scale_(config.sigma_scale) {
  config_.validate();
  if (two_piece_) {
    if (prior_ == nullptr) throw ConfigError("mcmc: two-piece errors need a tail prior");
    if (prior_->p_max() != config_.p_max) {
      throw ConfigError("mcmc: config p_max " + std::to_string(config_.p_max) +
                        " differs from tail prior p_max " + std::to_string(prior_->p_max()));
    }
    if (error_distribution_for(prior_->family()) != model.errors()) {
      throw ConfigError("mcmc: tail prior family does not match the model's error distribution");
    }
  }

  const double s = model.ols_residual_sd();
  if (config_.initial) {
    state_ = *config_.initial;
    if (state_.beta.size() != static_cast<Eigen::Index>(model.k())) {
      throw ConfigError("mcmc: initial coefficient vector has wrong dimension");
    }
    if (!(state_.sigma > 0.0) || !(state_.alpha > 0.0 && state_.alpha < 1.0) || state_.p < 1 ||
        state_.p > config_.p_max) {
      throw ConfigError("mcmc: initial state outside the support");
    }
  } else {
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw NumericalError("mcmc: least-squares residuals are degenerate (zero variance)");
    }
    state_.beta = model.ols();
    state_.sigma = s;
    state_.alpha = 0.5;
    state_.p = std::min(2, config_.p_max);
  }
  const double proposal_sd = (s > 0.0 && std::isfinite(s)) ? s : 1.0;
  const Eigen::MatrixXd cov = proposal_sd * proposal_sd * model.gram().inverse();
  coef_chol_ = cov.llt().matrixL();

  resid_.resize(model.n());
  resid_prop_.resize(model.n());
  compute_residuals(state_.beta, resid_);
  loglik_ = config_.use_likelihood ? loglik_from_residuals(resid_, state_.alpha, state_.p, state_.sigma) : 0.0;
  if (config_.use_likelihood && !std::isfinite(loglik_)) {
    throw NumericalError("mcmc: log-likelihood at the initial state is not finite");
  }
}

void MwgSampler::compute_residuals(const Eigen::VectorXd& beta, std::vector<double>& out) const {
  kernels::active().residuals(model_.response().data(), model_.design().data(), model_.n(), beta.data(),
                              model_.k(), out.data());
}

double MwgSampler::loglik_from_residuals(const std::vector<double>& r, double alpha, int p,
                                         double sigma) const {
  return error_log_likelihood(model_.errors(), r, {alpha, p, sigma});
}

double MwgSampler::log_likelihood(const McmcState& s) const {
  std::vector<double> r(model_.n());
  compute_residuals(s.beta, r);
  return loglik_from_residuals(r, s.alpha, s.p, s.sigma);
}

double MwgSampler::log_posterior(const McmcState& s) const {
  double lp = zellner_.log_density(s.beta) + log_location_scale_prior(0.0, s.sigma);
  if (two_piece_) lp += prior_->log_mass(s.p) + log_alpha_prior(s.alpha);
  if (!std::isfinite(lp)) return kNegInf;
  if (config_.use_likelihood) lp += log_likelihood(s);
  return lp;
}

bool MwgSampler::accept(double log_ratio) {
  const double u = stream_.uniform();
  return !std::isnan(log_ratio) && std::log(u) < log_ratio;
}

void MwgSampler::record(Block block, const McmcState& proposed, double log_ratio, bool accepted) {
  if (recording_) records_.push_back({block, state_, proposed, log_ratio, accepted});
}

void MwgSampler::update_coefficients() {
  const auto k = static_cast<Eigen::Index>(model_.k());
  Eigen::VectorXd z(k);
  for (Eigen::Index j = 0; j < k; ++j) z[j] = stream_.normal();
  Eigen::VectorXd beta_prop = state_.beta + coef_scale_ * (coef_chol_ * z);
  compute_residuals(beta_prop, resid_prop_);
  const double ll_prop = config_.use_likelihood
                             ? loglik_from_residuals(resid_prop_, state_.alpha, state_.p, state_.sigma)
                             : 0.0;
  const double log_ratio = ll_prop - loglik_ + zellner_.log_density(beta_prop) - zellner_.log_density(state_.beta);
  const bool ok = accept(log_ratio);
  if (recording_) {
    McmcState prop = state_;
    prop.beta = beta_prop;
    record(Block::coefficients, prop, log_ratio, ok);
  }
  ++coef_.attempted;
  ++coef_window_.attempted;
  if (ok) {
    state_.beta = std::move(beta_prop);
    resid_.swap(resid_prop_);
    loglik_ = ll_prop;
    ++coef_.accepted;
    ++coef_window_.accepted;
  }
}

void MwgSampler::update_alpha() {
  const double eta = logit(state_.alpha) + alpha_scale_ * stream_.normal();
  const double alpha_prop = logistic(eta);
  double log_ratio = kNegInf;
  double ll_prop = kNegInf;
  if (alpha_prop > 0.0 && alpha_prop < 1.0) {
    ll_prop = config_.use_likelihood ? loglik_from_residuals(resid_, alpha_prop, state_.p, state_.sigma) : 0.0;
    const double log_jac_prop = std::log(alpha_prop) + std::log1p(-alpha_prop);
    const double log_jac_cur = std::log(state_.alpha) + std::log1p(-state_.alpha);
    log_ratio = ll_prop - loglik_ + log_alpha_prior(alpha_prop) - log_alpha_prior(state_.alpha) +
                log_jac_prop - log_jac_cur;
  }
  const bool ok = accept(log_ratio);
  if (recording_) {
    McmcState prop = state_;
    prop.alpha = alpha_prop;
    record(Block::alpha, prop, log_ratio, ok);
  }
  ++alpha_.attempted;
  ++alpha_window_.attempted;
  if (ok) {
    state_.alpha = alpha_prop;
    loglik_ = ll_prop;
    ++alpha_.accepted;
    ++alpha_window_.accepted;
  }
}

void MwgSampler::update_sigma() {
  const double log_sigma_prop = std::log(state_.sigma) + sigma_scale_ * stream_.normal();
  const double sigma_prop = std::exp(log_sigma_prop);
  double log_ratio = kNegInf;
  double ll_prop = kNegInf;
  if (sigma_prop > 0.0 && std::isfinite(sigma_prop)) {
    ll_prop = config_.use_likelihood ? loglik_from_residuals(resid_, state_.alpha, state_.p, sigma_prop) : 0.0;
    // prior 1/sigma times Jacobian sigma
    log_ratio = ll_prop - loglik_ + log_location_scale_prior(0.0, sigma_prop) -
                log_location_scale_prior(0.0, state_.sigma) + log_sigma_prop - std::log(state_.sigma);
  }
  const bool ok = accept(log_ratio);
  if (recording_) {
    McmcState prop = state_;
    prop.sigma = sigma_prop;
    record(Block::sigma, prop, log_ratio, ok);
  }
  ++sigma_.attempted;
  ++sigma_window_.attempted;
  if (ok) {
    state_.sigma = sigma_prop;
    loglik_ = ll_prop;
    ++sigma_.accepted;
    ++sigma_window_.accepted;
  }
}

void MwgSampler::update_p() {
  const int p_max = config_.p_max;
  const int p = state_.p;
  int p_prop;
  if (p == 1) {
    p_prop = 2;
  } else if (p == p_max) {
    p_prop = p_max - 1;
  } else {
    p_prop = stream_.uniform() < 0.5 ? p - 1 : p + 1;
  }
  const double log_hastings =
      std::log(static_cast<double>(neighbour_count(p, p_max))) -
      std::log(static_cast<double>(neighbour_count(p_prop, p_max)));
  const double ll_prop =
      config_.use_likelihood ? loglik_from_residuals(resid_, state_.alpha, p_prop, state_.sigma) : 0.0;
  const double log_ratio = ll_prop - loglik_ + prior_->log_mass(p_prop) - prior_->log_mass(p) + log_hastings;
  const bool ok = accept(log_ratio);
  if (recording_) {
    McmcState prop = state_;
    prop.p = p_prop;
    record(Block::p, prop, log_ratio, ok);
  }
  ++p_.attempted;
  if (ok) {
    state_.p = p_prop;
    loglik_ = ll_prop;
    ++p_.accepted;
  }
}

void MwgSampler::adapt_scales() {
  auto tune = [this](double& scale, Counter& window) {
    if (window.attempted > 0) {
      const double rate = static_cast<double>(window.accepted) / static_cast<double>(window.attempted);
      if (rate < config_.target_low || rate > config_.target_high) {
        const double target = 0.5 * (config_.target_low + config_.target_high);
        scale *= std::exp(2.0 * (rate - target));
        scale = std::clamp(scale, 0.0, 1e3);
      }
    }
    window = {};
  };
  tune(coef_scale_, coef_window_);
  tune(alpha_scale_, alpha_window_);
  tune(sigma_scale_, sigma_window_);
}

void MwgSampler::sweep() {
  if (recording_) records_.clear();
  if (config_.update_coefficients) update_coefficients();
  if (two_piece_ && config_.update_alpha) update_alpha();
  if (config_.update_sigma) update_sigma();
  if (two_piece_ && config_.update_p) update_p();
  ++iteration_;
  if (config_.adapt && iteration_ <= config_.n_burn && iteration_ % config_.adapt_interval == 0) {
    adapt_scales();
  }
}

BlockAcceptance MwgSampler::acceptance_since_reset() const {
  auto rate = [](const Counter& c) {
    return c.attempted > 0 ? static_cast<double>(c.accepted) / static_cast<double>(c.attempted) : 0.0;
  };
  return {rate(coef_), rate(alpha_), rate(sigma_), rate(p_)};
}

void MwgSampler::reset_acceptance() { coef_ = alpha_ = sigma_ = p_ = {}; }

namespace {

Chain run_impl(const ModelSpec& model, const TailPrior* prior, const MwgConfig& config, RngStream& stream) {
  MwgSampler sampler(model, prior, config, stream);
  const bool two_piece = is_two_piece(model.errors());
  Chain chain;
  chain.names = model.coefficient_names();
  if (two_piece) {
    chain.names.push_back("alpha");
    chain.names.push_back("p");
  }
  chain.names.push_back("sigma");
  chain.draws.resize(chain.names.size());
  const std::size_t keep = static_cast<std::size_t>((config.n_iter - config.n_burn + config.thin - 1) / config.thin);
  for (auto& column : chain.draws) column.reserve(keep);

  for (int it = 0; it < config.n_burn; ++it) sampler.sweep();
  sampler.reset_acceptance();
  const std::size_t k = model.k();
  for (int it = config.n_burn; it < config.n_iter; ++it) {
    sampler.sweep();
    if ((it - config.n_burn) % config.thin != 0) continue;
    const McmcState& s = sampler.state();
    std::size_t col = 0;
    for (std::size_t j = 0; j < k; ++j) chain.draws[col++].push_back(s.beta[static_cast<Eigen::Index>(j)]);
    if (two_piece) {
      chain.draws[col++].push_back(s.alpha);
      chain.draws[col++].push_back(static_cast<double>(s.p));
    }
    chain.draws[col].push_back(s.sigma);
  }
  chain.acceptance = sampler.acceptance_since_reset();
  chain.seed = stream.seed();
  chain.config = config;
  chain.model_kind = model.kind();
  chain.errors = model.errors();
  return chain;
}

}  // namespace

Chain run_mwg(const ModelSpec& model, const TailPrior& tail_prior, const MwgConfig& config, RngStream& stream) {
  return run_impl(model, &tail_prior, config, stream);
}

Chain run_mwg(const ModelSpec& model, const MwgConfig& config, RngStream& stream) {
  if (is_two_piece(model.errors())) throw ConfigError("mcmc: two-piece errors need a tail prior");
  return run_impl(model, nullptr, config, stream);
}

}  // namespace twopiece
