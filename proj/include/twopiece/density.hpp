#pragma once

#include "twopiece/params.hpp"

namespace twopiece {

// Log-densities of the two-piece family
//
//   g(y) = f((y - mu) / (2 alpha sigma)) / sigma           y <= mu
//   g(y) = f((y - mu) / (2 (1 - alpha) sigma)) / sigma     y >  mu
//
// with f the exponential-power base (SEPD) or the type-III generalized
// logistic base (SGLD). Each public function evaluates the standardized form
// once and subtracts log(sigma), so location-scale equivariance holds exactly.
// The boundary y == mu belongs to the left branch.

double sepd_log_pdf(double y, const TwoPieceParams& params);
double sgld_log_pdf(double y, const TwoPieceParams& params);
double two_piece_log_pdf(double y, Family family, const TwoPieceParams& params);

// Type-III generalized logistic: the logistic pushed through Beta(p, p).
double bb_log_pdf(double x, int p, double mu, double sigma);

double sepd_pdf(double y, const TwoPieceParams& params);
double sgld_pdf(double y, const TwoPieceParams& params);
double two_piece_pdf(double y, Family family, const TwoPieceParams& params);

// log K(p) = -log(2 p^{1/p} Gamma(1 + 1/p)), the SEPD normalizing constant.
double sepd_log_norm_const(double p);

namespace detail {

// Standardized (mu = 0, sigma = 1) forms taking a real tail parameter, so
// numerical oracles can probe continuity in p. No validation.
double sepd_std_log_pdf(double z, double alpha, double p);
double sgld_std_log_pdf(double z, double alpha, double p);

// Symmetric base densities at unit scale.
double exp_power_base_log_pdf(double x, double p);
double gen_logistic_base_log_pdf(double x, double p);

}  // namespace detail
}  // namespace twopiece
