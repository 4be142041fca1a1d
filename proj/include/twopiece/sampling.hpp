#pragma once

#include <vector>

#include "twopiece/params.hpp"
#include "twopiece/rng.hpp"

namespace twopiece {

// Gamma(shape, 1) by Marsaglia-Tsang squeeze/rejection; shapes below one use
// the boost G(a) = G(a + 1) U^{1/a}. Exact in distribution.
double sample_gamma(RngStream& stream, double shape);
// log of a Gamma(shape, 1) variate, formed without ever leaving log space so
// that tiny shapes cannot underflow to zero.
double sample_log_gamma(RngStream& stream, double shape);

// Beta(a, b) as X / (X + Y) for independent gammas.
double sample_beta(RngStream& stream, double a, double b);

// Type-III generalized logistic: mu + sigma * logit(T), T ~ Beta(p, p).
double sample_bb(RngStream& stream, int p, double mu, double sigma);

// Two-piece variates built from U ~ U(0,1) and two base draws W1, W2: the left
// branch (U < alpha) scales |W1| by -2 alpha, the right branch scales |W2| by
// 2 (1 - alpha), and U == alpha gives 0.
double sample_sepd(RngStream& stream, const TwoPieceParams& params);
double sample_sgld(RngStream& stream, const TwoPieceParams& params);
double sample_two_piece(RngStream& stream, Family family, const TwoPieceParams& params);

std::vector<double> sample_n(RngStream& stream, Family family, const TwoPieceParams& params,
                             std::size_t n);

namespace detail {

// Standardized SEPD variate from explicit inputs, W1 and W2 ~ Gamma(1/p, 1):
//   Z = alpha W1^{1/p} [sign(U - alpha) - 1] / c + (1 - alpha) W2^{1/p} [sign(U - alpha) + 1] / c
// with c = 2 K(p) Gamma(1 + 1/p) = p^{-1/p}.
double sepd_transform(double u, double w1, double w2, double alpha, int p);
// Same, taking log W1 and log W2.
double sepd_transform_log(double u, double log_w1, double log_w2, double alpha, int p);
// Standardized SGLD variate, W1 and W2 type-III generalized logistic draws:
//   Z = alpha |W1| [sign(U - alpha) - 1] + (1 - alpha) |W2| [sign(U - alpha) + 1]
double sgld_transform(double u, double w1, double w2, double alpha);

}  // namespace detail
}  // namespace twopiece
