#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "twopiece/params.hpp"

namespace twopiece {

enum class ModelKind { ar1, regression };
enum class ErrorDistribution { sepd, sgld, normal };

std::string_view to_string(ModelKind kind);
std::string_view to_string(ErrorDistribution errors);
ErrorDistribution error_distribution_for(Family family);

// Linear model y = X beta + eps with iid errors of mode zero (mean zero for the
// Gaussian baseline), plus the Zellner g-prior on beta: N(0, g (X'X)^{-1}).
//
//  - AR(1): y_t = phi1 y_{t-1} + eps_t, likelihood conditional on y_1, so the
//    response is y_2..y_T, the single regressor is y_1..y_{T-1}, and g = T.
//  - Regression: caller-supplied X (intercept column included) with g = n.
class ModelSpec {
 public:
  static ModelSpec autoregressive(std::span<const double> series, ErrorDistribution errors);
  static ModelSpec regression(Eigen::VectorXd y, Eigen::MatrixXd x, ErrorDistribution errors,
                              std::vector<std::string> coefficient_names = {});

  ModelKind kind() const noexcept { return kind_; }
  ErrorDistribution errors() const noexcept { return errors_; }
  const Eigen::VectorXd& response() const noexcept { return y_; }
  const Eigen::MatrixXd& design() const noexcept { return x_; }  // column-major
  const Eigen::MatrixXd& gram() const noexcept { return gram_; }
  double g() const noexcept { return g_; }
  std::size_t n() const noexcept { return static_cast<std::size_t>(y_.size()); }
  std::size_t k() const noexcept { return static_cast<std::size_t>(x_.cols()); }
  const std::vector<std::string>& coefficient_names() const noexcept { return names_; }

  // Least-squares fit and its residual standard deviation (divisor n - k).
  Eigen::VectorXd ols() const;
  double ols_residual_sd() const;

 private:
  ModelSpec() = default;
  ModelKind kind_ = ModelKind::ar1;
  ErrorDistribution errors_ = ErrorDistribution::sepd;
  Eigen::VectorXd y_;
  Eigen::MatrixXd x_;
  Eigen::MatrixXd gram_;
  double g_ = 1.0;
  std::vector<std::string> names_;
};

// Error-distribution parameters without validation; the likelihoods return
// -inf for anything outside the support so MH simply rejects it.
struct ErrorParams {
  double alpha = 0.5;
  int p = 2;
  double sigma = 1.0;
};

// Log-likelihood of a residual vector under mode-zero errors.
double error_log_likelihood(ErrorDistribution errors, std::span<const double> residuals,
                            const ErrorParams& params);

double log_likelihood(const ModelSpec& model, std::span<const double> beta, const ErrorParams& params);

// sum_{t=2}^T log f_SEPD(y_t - phi1 y_{t-1}; alpha, p, 0, sigma)
double loglik_ar_sepd(const ModelSpec& model, double phi1, const TwoPieceParams& params);
// sum_i log f_SGLD(y_i - x_i' beta; alpha, p, 0, sigma)
double loglik_reg_sgld(const ModelSpec& model, std::span<const double> beta,
                       const TwoPieceParams& params);

}  // namespace twopiece
