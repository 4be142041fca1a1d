#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "twopiece/density.hpp"
#include "twopiece/errors.hpp"
#include "twopiece/special.hpp"

using namespace twopiece;
using namespace twopiece::testing;

namespace {

double log_k(double p) { return -std::log(2.0) - std::log(p) / p - boost::math::lgamma(1.0 + 1.0 / p); }

}  // namespace

TEST_SUITE("density") {
  TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(TwoPieceParams(0.0, 2), DomainError);
    CHECK_THROWS_AS(TwoPieceParams(1.0, 2), DomainError);
    CHECK_THROWS_AS(TwoPieceParams(0.5, 0), DomainError);
    CHECK_THROWS_AS(TwoPieceParams(0.5, 2, 0.0, 0.0), DomainError);
    CHECK_THROWS_AS(TwoPieceParams(std::nan(""), 2), DomainError);
    CHECK_NOTHROW(TwoPieceParams(0.01, 1, -5.0, 1e-3));
  }

  TEST_CASE("SEPD at p = 2, alpha = 1/2 is the standard normal") {
    const TwoPieceParams prm(0.5, 2);
    for (double y : {-3.0, -1.0, 0.0, 0.4, 2.5}) {
      CHECK(sepd_pdf(y, prm) == doctest::Approx(normal_pdf(y)).epsilon(1e-13));
    }
    CHECK(sepd_log_pdf(0.0, prm) == doctest::Approx(std::log(0.3989422804014327)).epsilon(1e-14));
  }

  TEST_CASE("SEPD value at the mode is log K(p) - log sigma") {
    for (int p : {1, 2, 3, 7, 50}) {
      const TwoPieceParams prm(0.3, p, 1.5, 2.0);
      CHECK(sepd_log_pdf(1.5, prm) == doctest::Approx(log_k(p) - std::log(2.0)).epsilon(1e-13));
      CHECK(sepd_log_norm_const(p) == doctest::Approx(log_k(p)).epsilon(1e-13));
    }
  }

  TEST_CASE("SGLD reduces to the logistic and has the stated mode value") {
    CHECK(sgld_pdf(0.0, TwoPieceParams(0.5, 1)) == doctest::Approx(0.25).epsilon(1e-15));
    for (int p : {1, 2, 9, 40}) {
      const TwoPieceParams prm(0.7, p, -2.0, 3.0);
      const double expected = -std::log(3.0) - boost::math::lgamma(p) * 2 + boost::math::lgamma(2.0 * p) -
                              2.0 * p * std::log(2.0);
      CHECK(sgld_log_pdf(-2.0, prm) == doctest::Approx(expected).epsilon(1e-12));
    }
  }

  TEST_CASE("Beta-logistic density") {
    CHECK(std::exp(bb_log_pdf(0.0, 1, 0.0, 1.0)) == doctest::Approx(0.25).epsilon(1e-15));
    for (int p : {1, 3, 10}) {
      for (double d : {0.1, 1.0, 4.0, 30.0}) {
        CHECK(bb_log_pdf(1.0 + d, p, 1.0, 2.0) == doctest::Approx(bb_log_pdf(1.0 - d, p, 1.0, 2.0)).epsilon(1e-14));
        // alpha = 1/2 SGLD is the base density at scale sigma
        CHECK(sgld_log_pdf(1.0 + d, TwoPieceParams(0.5, p, 1.0, 2.0)) ==
              doctest::Approx(bb_log_pdf(1.0 + d, p, 1.0, 2.0)).epsilon(1e-14));
      }
    }
  }

  TEST_CASE("dispatch agrees exactly with the family functions") {
    const TwoPieceParams prm(0.27, 4, 0.3, 1.7);
    for (double y = -6.0; y <= 6.0; y += 0.37) {
      CHECK(two_piece_log_pdf(y, Family::sepd, prm) == sepd_log_pdf(y, prm));
      CHECK(two_piece_log_pdf(y, Family::sgld, prm) == sgld_log_pdf(y, prm));
    }
    CHECK_THROWS_AS(two_piece_log_pdf(0.0, Family::beta_logistic, prm), DomainError);
  }

  TEST_CASE("location-scale equivariance is exact") {
    for (Family f : {Family::sepd, Family::sgld}) {
      const TwoPieceParams prm(0.35, 3, 2.0, 0.5);
      const TwoPieceParams std_prm(0.35, 3, 0.0, 1.0);
      for (double y = -3.0; y <= 5.0; y += 0.25) {
        const double z = (y - 2.0) / 0.5;
        CHECK(two_piece_log_pdf(y, f, prm) == two_piece_log_pdf(z, f, std_prm) - std::log(0.5));
      }
    }
  }

  TEST_CASE("normalization, left mass and mode on the grid") {
    for (Family f : {Family::sepd, Family::sgld}) {
      for (double alpha : {0.2, 0.5, 0.8}) {
        for (int p : {1, 2, 5, 10, 20}) {
          for (double sigma : {0.5, 1.0, 2.0}) {
            const TwoPieceParams prm(alpha, p, 0.7, sigma);
            auto pdf = [&](double y) { return two_piece_pdf(y, f, prm); };
            boost::math::quadrature::exp_sinh<double> rule;
            const double left = rule.integrate([&](double t) { return pdf(0.7 - t); });
            const double right = rule.integrate([&](double t) { return pdf(0.7 + t); });
            CHECK_MESSAGE(std::abs(left + right - 1.0) < 1e-8, to_string(f) << " " << alpha << " " << p << " " << sigma);
            CHECK(std::abs(left - alpha) < 1e-8);
            const double at_mode = pdf(0.7);
            for (double y = -10.0; y <= 10.0; y += 0.1) CHECK(pdf(y) <= at_mode);
          }
        }
      }
    }
  }

  TEST_CASE("the mode boundary takes the left branch") {
    // Both branches give the same value at the mode, so the result equals the
    // left-branch formula and is independent of alpha.
    for (double alpha : {0.1, 0.5, 0.9}) {
      CHECK(sepd_log_pdf(0.0, TwoPieceParams(alpha, 3)) == sepd_log_pdf(0.0, TwoPieceParams(0.5, 3)));
    }
  }

  TEST_CASE("log densities stay finite or -inf, never NaN, far in the tails") {
    for (int p : {1, 2, 10, 100, 200}) {
      for (double z : {-1e4, -1e2, -1.0, 0.0, 1.0, 1e2, 1e4}) {
        const TwoPieceParams prm(0.3, p);
        const double s = sepd_log_pdf(z, prm);
        const double g = sgld_log_pdf(z, prm);
        CHECK_FALSE(std::isnan(s));
        CHECK(std::isfinite(g));
        CHECK(s < std::numeric_limits<double>::infinity());
        // SEPD stays finite while |z/(2 alpha)|^p / p is representable
        if (p * std::log(std::abs(z) / 0.6 + 1e-300) < 700.0) CHECK(std::isfinite(s));
      }
    }
  }
}
