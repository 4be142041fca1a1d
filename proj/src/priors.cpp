#include "twopiece/priors.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "twopiece/errors.hpp"

namespace twopiece {

double log_alpha_prior(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) return -std::numeric_limits<double>::infinity();
  // 1 / (pi sqrt(alpha (1 - alpha)))
  return -std::log(std::numbers::pi) - 0.5 * (std::log(alpha) + std::log1p(-alpha));
}

double log_location_scale_prior(double /*mu*/, double sigma) {
  if (!(sigma > 0.0)) return -std::numeric_limits<double>::infinity();
  return -std::log(sigma);
}

ZellnerPrior::ZellnerPrior(const Eigen::MatrixXd& gram, double g) : gram_(gram), g_(g) {
  if (!(g > 0.0)) throw DomainError("Zellner prior: g must be positive");
  if (gram.rows() != gram.cols() || gram.rows() == 0) throw DomainError("Zellner prior: gram must be square");
}

double ZellnerPrior::log_density(const Eigen::VectorXd& beta) const {
  return -0.5 * beta.dot(gram_ * beta) / g_;
}

}  // namespace twopiece
