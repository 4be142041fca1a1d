#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "twopiece/errors.hpp"
#include "twopiece/rng.hpp"
#include "twopiece/scoring.hpp"

using namespace twopiece;
using namespace twopiece::testing;

namespace {

// Direct O(M^2) enumeration of the energy form.
double crps_pairs(const std::vector<double>& x, double y) {
  const double m = static_cast<double>(x.size());
  double a = 0, b = 0;
  for (double u : x) {
    a += std::abs(u - y);
    for (double v : x) b += std::abs(u - v);
  }
  return a / m - 0.5 * b / (m * m);
}

}  // namespace

TEST_SUITE("scoring") {
  TEST_CASE("rmse") {
    CHECK(rmse(std::vector<double>{1, 2}, std::vector<double>{1, 4}) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    const std::vector<double> y{0.3, -2.0, 5.5};
    CHECK(rmse(y, y) == 0.0);
    const std::vector<double> f{1.0, 0.0, 2.0};
    const double base = rmse(f, y);
    std::vector<double> f3, y3;
    for (std::size_t i = 0; i < 3; ++i) {
      f3.push_back(-3 * f[i]);
      y3.push_back(-3 * y[i]);
    }
    CHECK(rmse(f3, y3) == doctest::Approx(3 * base).epsilon(1e-14));
    CHECK_THROWS_AS(rmse(std::vector<double>{}, std::vector<double>{}), DomainError);
    CHECK_THROWS_AS(rmse(f, std::vector<double>{1.0}), DomainError);
  }

  TEST_CASE("crps of a point mass is the absolute error") {
    for (double c : {-1.5, 0.0, 3.25}) {
      for (double y : {-2.0, 0.0, 3.25, 10.0}) {
        CHECK(crps_mc(std::vector<double>(50, c), y) == std::abs(y - c));
      }
    }
  }

  TEST_CASE("two-draw example") {
    CHECK(crps_mc(std::vector<double>{0, 2}, 1.0) == 0.5);
    CHECK(crps_pairs({0, 2}, 1.0) == 0.5);
    CHECK_THROWS_AS(crps_mc(std::vector<double>{1.0}, 0.0), DomainError);
  }

  TEST_CASE("crps forms agree") {
    RngStream r(5);
    for (std::size_t m : {2u, 3u, 10u, 101u, 500u}) {
      std::vector<double> x(m);
      for (double& v : x) v = r.normal() * 2 + 0.3;
      for (double y : {-5.0, -0.1, 0.3, 1.7, 9.0}) {
        const double e = crps_mc(x, y);
        CHECK(e >= 0);
        CHECK(e == doctest::Approx(crps_sorted_integral(x, y)).epsilon(1e-12).scale(1.0));
        CHECK(e == doctest::Approx(crps_pairs(x, y)).epsilon(1e-11).scale(1.0));
        std::vector<double> shuffled = x;
        std::reverse(shuffled.begin(), shuffled.end());
        std::rotate(shuffled.begin(), shuffled.begin() + static_cast<long>(m / 2), shuffled.end());
        CHECK(crps_mc(shuffled, y) == doctest::Approx(e).epsilon(1e-13).scale(1.0));
        std::vector<double> neg;
        for (double v : x) neg.push_back(-v);
        CHECK(crps_mc(neg, -y) == doctest::Approx(e).epsilon(1e-12).scale(1.0));
      }
    }
  }

  TEST_CASE("Monte Carlo crps of Gaussian draws matches the closed form") {
    RngStream r(6);
    std::vector<double> x(100000);
    for (double& v : x) v = r.normal();
    CHECK(gaussian_crps(0.0, 1.0, 0.0) == doctest::Approx(0.2336949772).epsilon(1e-9));
    for (double y : {0.0, 0.8, -2.0}) {
      CHECK(std::abs(crps_mc(x, y) - gaussian_crps(0.0, 1.0, y)) < 0.01);
    }
  }

  TEST_CASE("log score mixtures") {
    const double l0 = std::log(normal_pdf(0.0));
    auto s = log_score_mixture(std::vector<double>{l0});
    CHECK(s.value == doctest::Approx(std::log(0.3989422804)).epsilon(1e-9));
    CHECK_FALSE(s.underflow);
    const double la = std::log(0.1), lb = std::log(0.5);
    CHECK(log_score_mixture(std::vector<double>{la, lb}).value == doctest::Approx(std::log(0.3)).epsilon(1e-14));
    // far below double range in linear space
    CHECK(log_score_mixture(std::vector<double>{-2000.0, -2000.0}).value == doctest::Approx(-2000.0));
    s = log_score_mixture(std::vector<double>{-INFINITY, -INFINITY});
    CHECK(s.underflow);
    CHECK(s.value == -INFINITY);
    // moving toward the mode increases the score
    double prev = -INFINITY;
    for (double y : {-4.0, -2.0, -1.0, -0.5, 0.0}) {
      const double v = log_score_mixture(std::vector<double>{std::log(normal_pdf(y))}).value;
      CHECK(v > prev);
      prev = v;
    }
  }

  TEST_CASE("standardized first differences") {
    CHECK_THROWS_AS(standardize_first_differences(std::vector<double>{1, 2, 3, 4}), DataError);
    CHECK_THROWS_AS(standardize_first_differences(std::vector<double>{1, 2}), DataError);
    RngStream r(7);
    std::vector<double> y(50);
    for (double& v : y) v = r.normal() * 3 + 10;
    const auto z = standardize_first_differences(y);
    CHECK(z.size() == y.size() - 1);
    double m = 0, ss = 0;
    for (double v : z) m += v;
    m /= static_cast<double>(z.size());
    for (double v : z) ss += (v - m) * (v - m);
    CHECK(std::abs(m) < 1e-12);
    CHECK(std::sqrt(ss / static_cast<double>(z.size() - 1)) == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("comparison table") {
    ModelRecords base{"normal-ar", {}};
    ModelRecords other{"sepd-ar", {}};
    for (std::size_t t = 0; t < 4; ++t) {
      ForecastRecord r;
      r.t = t;
      r.realized = static_cast<double>(t);
      r.point_forecast = r.realized + 1.0;
      r.log_score = -1.0;
      r.crps = 0.5;
      base.records.push_back(r);
      r.point_forecast = r.realized + 0.5;
      r.log_score = -0.8;
      r.crps = 0.25;
      other.records.push_back(r);
    }
    std::vector<ModelRecords> models{base, base, other};
    models[1].model = "copy";
    const auto table = comparison_table(models);
    REQUIRE(table.size() == 3);
    CHECK(table[0].baseline);
    CHECK(table[0].rmse == 1.0);
    CHECK(table[0].log_score == -1.0);
    CHECK(table[0].crps == 0.5);
    CHECK(table[1].rmse == 1.0);
    CHECK(table[1].log_score == 0.0);
    CHECK(table[1].crps == 1.0);
    CHECK(table[2].rmse == 0.5);
    CHECK(table[2].log_score == doctest::Approx(0.2));
    CHECK(table[2].crps == 0.5);

    models[2].records[1].realized = 99;
    CHECK_THROWS_AS(comparison_table(models), DomainError);
  }
}
