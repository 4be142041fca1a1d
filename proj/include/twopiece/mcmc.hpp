#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "twopiece/model.hpp"
#include "twopiece/priors.hpp"
#include "twopiece/rng.hpp"
#include "twopiece/tail_prior.hpp"

namespace twopiece {

struct McmcState {
  Eigen::VectorXd beta;
  double alpha = 0.5;
  int p = 2;
  double sigma = 1.0;
};

struct MwgConfig {
  int n_iter = 20000;
  int n_burn = 5000;
  int thin = 1;
  int p_max = 100;

  // Random-walk scales. alpha moves on the logit scale and sigma on the log
  // scale; the coefficient step is a multiple of the least-squares standard
  // errors (Cholesky factor of s^2 (X'X)^{-1}).
  double coef_scale = 1.0;
  double alpha_scale = 0.1;
  double sigma_scale = 0.1;

  // Burn-in only: every adapt_interval iterations nudge each continuous scale
  // toward an acceptance rate inside [target_low, target_high]. Frozen after
  // burn-in.
  bool adapt = true;
  int adapt_interval = 50;
  double target_low = 0.2;
  double target_high = 0.4;

  bool use_likelihood = true;  // false samples the prior
  bool update_coefficients = true;
  bool update_alpha = true;
  bool update_sigma = true;
  bool update_p = true;

  std::optional<McmcState> initial;

  // Throws ConfigError on inconsistent settings.
  void validate() const;
};

enum class Block { coefficients, alpha, sigma, p };
std::string_view to_string(Block block);

struct BlockAcceptance {
  double coefficients = 0.0;
  double alpha = 0.0;
  double sigma = 0.0;
  double p = 0.0;
};

// Post-burn-in draws, one column per parameter: coefficients in model order,
// then alpha, p, sigma (alpha and p are absent for Gaussian errors).
struct Chain {
  std::vector<std::string> names;
  std::vector<std::vector<double>> draws;
  BlockAcceptance acceptance;
  std::uint64_t seed = 0;
  MwgConfig config;
  ModelKind model_kind = ModelKind::ar1;
  ErrorDistribution errors = ErrorDistribution::sepd;

  std::size_t size() const { return draws.empty() ? 0 : draws.front().size(); }
  // Throws DomainError for an unknown name.
  const std::vector<double>& column(std::string_view name) const;
  bool has(std::string_view name) const;
};

// One Metropolis-Hastings proposal, exposed so tests can check the acceptance
// ratio against an independent posterior evaluation.
struct ProposalRecord {
  Block block;
  McmcState current;
  McmcState proposed;
  double log_accept_ratio = 0.0;
  bool accepted = false;
};

// Metropolis-within-Gibbs over (beta, alpha, sigma, p). Each sweep updates the
// coefficient block (Gaussian random walk, likelihood x Zellner prior), alpha
// (logit random walk with Jacobian, Beta(1/2,1/2) prior), sigma (log random
// walk with Jacobian, 1/sigma prior) and p (nearest-neighbour proposal on
// {p-1, p+1} ∩ [1, p_max] with the Hastings correction at the edges, tail
// prior masses).
class MwgSampler {
 public:
  // tail_prior may be null only for Gaussian errors.
  MwgSampler(const ModelSpec& model, const TailPrior* tail_prior, const MwgConfig& config,
             RngStream& stream);

  void sweep();
  const McmcState& state() const noexcept { return state_; }
  int iteration() const noexcept { return iteration_; }

  // log pi(beta, alpha, p, sigma | y) up to a constant, in the natural
  // parameterization (no Jacobians).
  double log_posterior(const McmcState& s) const;
  double log_likelihood(const McmcState& s) const;

  void set_recording(bool on) { recording_ = on; }
  const std::vector<ProposalRecord>& last_sweep() const noexcept { return records_; }

  BlockAcceptance acceptance_since_reset() const;
  void reset_acceptance();
  double coef_scale() const noexcept { return coef_scale_; }
  double alpha_scale() const noexcept { return alpha_scale_; }
  double sigma_scale() const noexcept { return sigma_scale_; }

 private:
  double loglik_from_residuals(const std::vector<double>& r, double alpha, int p, double sigma) const;
  void compute_residuals(const Eigen::VectorXd& beta, std::vector<double>& out) const;
  void update_coefficients();
  void update_alpha();
  void update_sigma();
  void update_p();
  void adapt_scales();
  bool accept(double log_ratio);
  void record(Block block, const McmcState& proposed, double log_ratio, bool accepted);

  const ModelSpec& model_;
  const TailPrior* prior_;
  MwgConfig config_;
  RngStream& stream_;
  ZellnerPrior zellner_;
  Eigen::MatrixXd coef_chol_;
  bool two_piece_;

  McmcState state_;
  std::vector<double> resid_;
  std::vector<double> resid_prop_;
  double loglik_ = 0.0;
  int iteration_ = 0;

  double coef_scale_;
  double alpha_scale_;
  double sigma_scale_;
  struct Counter {
    long attempted = 0;
    long accepted = 0;
  };
  Counter coef_, alpha_, sigma_, p_;
  Counter coef_window_, alpha_window_, sigma_window_;

  bool recording_ = false;
  std::vector<ProposalRecord> records_;
};

// Runs config.n_iter sweeps and keeps every thin-th draw after n_burn.
Chain run_mwg(const ModelSpec& model, const TailPrior& tail_prior, const MwgConfig& config,
              RngStream& stream);
// Gaussian-error models (no alpha, no p).
Chain run_mwg(const ModelSpec& model, const MwgConfig& config, RngStream& stream);

}  // namespace twopiece
