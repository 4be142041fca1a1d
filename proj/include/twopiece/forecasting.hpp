#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "twopiece/mcmc.hpp"
#include "twopiece/scoring.hpp"

namespace twopiece {

// Read-only indexed series. rolling_forecast reads through this interface so
// tests can observe exactly which observations each step touches.
class SeriesSource {
 public:
  virtual ~SeriesSource() = default;
  virtual std::size_t size() const = 0;
  virtual double at(std::size_t i) const = 0;
};

class VectorSource final : public SeriesSource {
 public:
  explicit VectorSource(std::span<const double> values) : values_(values) {}
  std::size_t size() const override { return values_.size(); }
  double at(std::size_t i) const override { return values_[i]; }

 private:
  std::span<const double> values_;
};

enum class ForecastModel { ols_ar, bayes_normal_ar, sepd_ar };
std::string_view to_string(ForecastModel model);
ForecastModel forecast_model_from_string(std::string_view name);

enum class Standardize {
  none,    // model the series as given
  window,  // first differences standardized with estimation-window statistics
  full,    // first differences standardized once with full-sample statistics
};
std::string_view to_string(Standardize s);
Standardize standardize_from_string(std::string_view name);

struct ForecastConfig {
  std::size_t window = 120;  // R
  ForecastModel model = ForecastModel::sepd_ar;
  Standardize standardize = Standardize::none;
  MwgConfig mcmc;            // defaults 20000 / 5000, p_max 100
  int refit_every = 1;       // Bayesian models: refit every k origins, reusing the last posterior between
  std::size_t draw_thin = 1; // keep every k-th retained draw for the predictive
  std::size_t ols_draws = 15000;
  std::uint64_t seed = 1;

  // Instrumentation: called with the origin t right before the realized value
  // is read. Everything read before that call is the forecast's information set.
  std::function<void(std::size_t)> before_realized;
};

// One-step-ahead rolling forecasts. With standardize == none the origins are
// t = R-1 .. T-2 (0-based) and each fit uses observations t-R+1 .. t, giving
// T - R records. With differencing the fit uses the R differences ending at t
// (observations t-R .. t) and the records are in standardized units.
// Throws DomainError when R < 3 or the series is not longer than the window.
std::vector<ForecastRecord> rolling_forecast(const SeriesSource& series, const ForecastConfig& config);
std::vector<ForecastRecord> rolling_forecast(std::span<const double> series, const ForecastConfig& config);

}  // namespace twopiece
