#pragma once

#include <Eigen/Dense>

namespace twopiece {

// Jeffreys prior on the skewness: Beta(1/2, 1/2). -inf outside (0, 1).
double log_alpha_prior(double alpha);

// Improper location-scale prior pi(mu, sigma) ∝ 1/sigma. -inf for sigma <= 0.
// Only ever used inside Metropolis-Hastings ratios.
double log_location_scale_prior(double mu, double sigma);

// Zellner g-prior on regression coefficients, beta ~ N(0, g (X'X)^{-1}).
// Log-density up to its normalizing constant: -beta' X'X beta / (2 g).
class ZellnerPrior {
 public:
  ZellnerPrior(const Eigen::MatrixXd& gram, double g);
  double log_density(const Eigen::VectorXd& beta) const;
  double g() const noexcept { return g_; }
  const Eigen::MatrixXd& gram() const noexcept { return gram_; }

 private:
  Eigen::MatrixXd gram_;
  double g_;
};

}  // namespace twopiece
