#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "twopiece/errors.hpp"
#include "twopiece/forecasting.hpp"
#include "twopiece/sampling.hpp"

using namespace twopiece;

namespace {

std::vector<double> sepd_ar(std::uint64_t seed, std::size_t n) {
  RngStream s(seed);
  const TwoPieceParams e(0.3, 1);
  std::vector<double> y{sample_sepd(s, e)};
  while (y.size() < n) y.push_back(0.4 * y.back() + sample_sepd(s, e));
  return y;
}

// Records the largest index read since the last reset.
class TrackingSource final : public SeriesSource {
 public:
  explicit TrackingSource(std::vector<double> v) : v_(std::move(v)) {}
  std::size_t size() const override { return v_.size(); }
  double at(std::size_t i) const override {
    max_read_ = std::max<long>(max_read_, static_cast<long>(i));
    return v_[i];
  }
  long take_max() const {
    const long m = max_read_;
    max_read_ = -1;
    return m;
  }

 private:
  std::vector<double> v_;
  mutable long max_read_ = -1;
};

ForecastConfig quick(ForecastModel model) {
  ForecastConfig c;
  c.window = 30;
  c.model = model;
  c.mcmc.n_iter = 400;
  c.mcmc.n_burn = 100;
  c.mcmc.p_max = 20;
  c.ols_draws = 200;
  c.seed = 9;
  return c;
}

}  // namespace

TEST_SUITE("forecasting") {
  TEST_CASE("one record per origin") {
    const auto y = sepd_ar(1, 40);
    for (auto model : {ForecastModel::ols_ar, ForecastModel::bayes_normal_ar, ForecastModel::sepd_ar}) {
      const auto rec = rolling_forecast(y, quick(model));
      REQUIRE(rec.size() == 10);
      for (std::size_t i = 0; i < rec.size(); ++i) {
        CHECK(rec[i].t == 29 + i);
        CHECK(rec[i].realized == y[30 + i]);
        CHECK(rec[i].crps >= 0);
        CHECK(std::isfinite(rec[i].log_score));
        CHECK(rec[i].predictive_draws.size() >= 2);
      }
    }
    auto cfg = quick(ForecastModel::ols_ar);
    cfg.standardize = Standardize::window;
    CHECK(rolling_forecast(y, cfg).size() == 9);
    cfg.standardize = Standardize::full;
    CHECK(rolling_forecast(y, cfg).size() == 9);
  }

  TEST_CASE("constant series") {
    const std::vector<double> y(40, 2.5);
    const auto rec = rolling_forecast(y, quick(ForecastModel::ols_ar));
    for (const auto& r : rec) {
      CHECK(r.point_forecast == 2.5);
      CHECK(r.crps == 0.0);
    }
    CHECK_THROWS_AS(rolling_forecast(y, quick(ForecastModel::sepd_ar)), NumericalError);
    auto diff = quick(ForecastModel::ols_ar);
    diff.standardize = Standardize::window;
    CHECK_THROWS_AS(rolling_forecast(y, diff), DataError);
  }

  TEST_CASE("no step reads beyond its origin before the forecast is formed") {
    for (auto st : {Standardize::none, Standardize::window}) {
      for (auto model : {ForecastModel::ols_ar, ForecastModel::sepd_ar}) {
        TrackingSource src(sepd_ar(2, 38));
        auto cfg = quick(model);
        cfg.standardize = st;
        std::size_t calls = 0;
        cfg.before_realized = [&](std::size_t t) {
          CHECK(src.take_max() <= static_cast<long>(t));
          ++calls;
        };
        const auto rec = rolling_forecast(src, cfg);
        CHECK(calls == rec.size());
      }
    }
  }

  TEST_CASE("window standardization uses window statistics only") {
    auto y = sepd_ar(3, 36);
    auto cfg = quick(ForecastModel::ols_ar);
    cfg.standardize = Standardize::window;
    const auto a = rolling_forecast(y, cfg);
    // Perturbing the far future must not change the first forecast.
    y.back() += 100.0;
    const auto b = rolling_forecast(y, cfg);
    CHECK(a.front().point_forecast == b.front().point_forecast);
    CHECK(a.front().realized == b.front().realized);
    // realized value standardized with the window's difference statistics
    std::vector<double> d;
    for (std::size_t i = 1; i <= 30; ++i) d.push_back(y[i] - y[i - 1]);
    double m = 0, ss = 0;
    for (double v : d) m += v;
    m /= 30;
    for (double v : d) ss += (v - m) * (v - m);
    const double sd = std::sqrt(ss / 29);
    CHECK(a.front().realized == doctest::Approx((y[31] - y[30] - m) / sd).epsilon(1e-12));
  }

  TEST_CASE("seeded runs repeat exactly; refits can be spaced out") {
    const auto y = sepd_ar(4, 40);
    auto cfg = quick(ForecastModel::sepd_ar);
    const auto a = rolling_forecast(y, cfg);
    const auto b = rolling_forecast(y, cfg);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].predictive_draws == b[i].predictive_draws);
      CHECK(a[i].log_score == b[i].log_score);
    }
    cfg.refit_every = 5;
    cfg.draw_thin = 3;
    const auto c = rolling_forecast(y, cfg);
    CHECK(c.size() == a.size());
    CHECK(c.front().predictive_draws.size() == 100);
  }

  TEST_CASE("input validation") {
    const auto y = sepd_ar(5, 40);
    auto cfg = quick(ForecastModel::ols_ar);
    cfg.window = 2;
    CHECK_THROWS_AS(rolling_forecast(y, cfg), DomainError);
    cfg.window = 40;
    CHECK_THROWS_AS(rolling_forecast(y, cfg), DomainError);
    cfg.window = 30;
    cfg.refit_every = 0;
    CHECK_THROWS_AS(rolling_forecast(y, cfg), ConfigError);
    CHECK_THROWS_AS(forecast_model_from_string("arima"), ConfigError);
    CHECK(forecast_model_from_string("normal-ar") == ForecastModel::bayes_normal_ar);
    CHECK(standardize_from_string("std-diff") == Standardize::window);
  }
}
