#include "twopiece/forecasting.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "twopiece/density.hpp"
#include "twopiece/errors.hpp"
#include "twopiece/sampling.hpp"
#include "twopiece/tail_prior.hpp"

namespace twopiece {
namespace {

constexpr double kLogSqrt2Pi = 0.91893853320467274178;

// Posterior (or plug-in) draws of the AR(1) parameters.
struct ParameterDraws {
  std::vector<double> phi;
  std::vector<double> sigma;
  std::vector<double> alpha;  // empty for Gaussian errors
  std::vector<int> p;
};

ParameterDraws extract(const Chain& chain, std::size_t thin) {
  ParameterDraws d;
  const auto& phi = chain.column("phi1");
  const auto& sigma = chain.column("sigma");
  const bool two_piece = chain.has("alpha");
  for (std::size_t i = 0; i < chain.size(); i += thin) {
    d.phi.push_back(phi[i]);
    d.sigma.push_back(sigma[i]);
    if (two_piece) {
      d.alpha.push_back(chain.column("alpha")[i]);
      d.p.push_back(static_cast<int>(chain.column("p")[i]));
    }
  }
  return d;
}

double normal_log_pdf(double x, double mean, double sd) {
  const double z = (x - mean) / sd;
  return -0.5 * z * z - std::log(sd) - kLogSqrt2Pi;
}

struct Predictive {
  double point = 0.0;
  std::vector<double> draws;
  std::vector<double> mean;  // per-component location phi_m * y_t
  const ParameterDraws* params = nullptr;
  double ols_mean = 0.0;
  double ols_sd = 0.0;
  bool ols = false;

  LogScore log_score(double y) const {
    if (ols) {
      if (ols_sd > 0.0) return {normal_log_pdf(y, ols_mean, ols_sd), false};
      if (y == ols_mean) return {std::numeric_limits<double>::infinity(), false};
      return {-std::numeric_limits<double>::infinity(), true};
    }
    std::vector<double> logd(mean.size());
    for (std::size_t m = 0; m < mean.size(); ++m) {
      const double sigma = params->sigma[m];
      if (params->alpha.empty()) {
        logd[m] = normal_log_pdf(y, mean[m], sigma);
      } else {
        logd[m] = detail::sepd_std_log_pdf((y - mean[m]) / sigma, params->alpha[m], params->p[m]) - std::log(sigma);
      }
    }
    return log_score_mixture(logd);
  }
};

Predictive ols_predictive(std::span<const double> w, std::size_t n_draws, RngStream& stream) {
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 1; i < w.size(); ++i) {
    sxy += w[i] * w[i - 1];
    sxx += w[i - 1] * w[i - 1];
  }
  const double phi = sxx > 0.0 ? sxy / sxx : 0.0;
  double rss = 0.0;
  for (std::size_t i = 1; i < w.size(); ++i) {
    const double e = w[i] - phi * w[i - 1];
    rss += e * e;
  }
  Predictive pred;
  pred.ols = true;
  pred.ols_mean = phi * w.back();
  pred.ols_sd = std::sqrt(rss / static_cast<double>(w.size() - 2));
  pred.point = pred.ols_mean;
  pred.draws.resize(std::max<std::size_t>(n_draws, 2));
  for (double& v : pred.draws) v = pred.ols_mean + pred.ols_sd * stream.normal();
  return pred;
}

Predictive bayes_predictive(const ParameterDraws& d, double y_t, RngStream& stream) {
  Predictive pred;
  pred.params = &d;
  const std::size_t m = d.phi.size();
  pred.mean.resize(m);
  pred.draws.resize(m);
  double sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    pred.mean[i] = d.phi[i] * y_t;
    double eps;
    if (d.alpha.empty()) {
      eps = d.sigma[i] * stream.normal();
    } else {
      eps = sample_sepd(stream, TwoPieceParams(d.alpha[i], d.p[i], 0.0, d.sigma[i]));
    }
    pred.draws[i] = pred.mean[i] + eps;
    sum += pred.draws[i];
  }
  pred.point = sum / static_cast<double>(m);
  return pred;
}

}  // namespace

std::string_view to_string(ForecastModel model) {
  switch (model) {
    case ForecastModel::ols_ar:
      return "ols-ar";
    case ForecastModel::bayes_normal_ar:
      return "normal-ar";
    case ForecastModel::sepd_ar:
      return "sepd-ar";
  }
  return "unknown";
}

ForecastModel forecast_model_from_string(std::string_view name) {
  if (name == "ols-ar" || name == "ols") return ForecastModel::ols_ar;
  if (name == "normal-ar" || name == "bayes-normal-ar") return ForecastModel::bayes_normal_ar;
  if (name == "sepd-ar" || name == "ar-sepd") return ForecastModel::sepd_ar;
  throw ConfigError("unknown forecast model '" + std::string(name) + "'");
}

std::string_view to_string(Standardize s) {
  switch (s) {
    case Standardize::none:
      return "none";
    case Standardize::window:
      return "std-diff";
    case Standardize::full:
      return "std-diff-full";
  }
  return "unknown";
}

Standardize standardize_from_string(std::string_view name) {
  if (name == "none") return Standardize::none;
  if (name == "std-diff" || name == "window") return Standardize::window;
  if (name == "std-diff-full" || name == "full") return Standardize::full;
  throw ConfigError("unknown transform '" + std::string(name) + "'");
}

std::vector<ForecastRecord> rolling_forecast(const SeriesSource& series, const ForecastConfig& config) {
  const std::size_t r = config.window;
  if (r < 3) throw DomainError("rolling forecast: window must be at least 3");
  if (config.refit_every < 1) throw ConfigError("rolling forecast: refit_every must be >= 1");
  if (config.draw_thin < 1) throw ConfigError("rolling forecast: draw_thin must be >= 1");

  if (config.standardize == Standardize::full) {
    std::vector<double> raw(series.size());
    for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = series.at(i);
    const std::vector<double> z = standardize_first_differences(raw);
    ForecastConfig inner = config;
    inner.standardize = Standardize::none;
    VectorSource source(z);
    return rolling_forecast(source, inner);
  }

  const bool differenced = config.standardize == Standardize::window;
  const std::size_t first_origin = differenced ? r : r - 1;
  if (series.size() <= first_origin + 1) {
    throw DomainError("rolling forecast: window of " + std::to_string(r) + " exceeds the series of length " +
                      std::to_string(series.size()));
  }

  std::optional<TailPrior> prior;
  if (config.model == ForecastModel::sepd_ar) prior = build_tail_prior(Family::sepd, config.mcmc.p_max);

  std::vector<ForecastRecord> out;
  std::optional<ParameterDraws> posterior;
  std::vector<double> w(r);
  for (std::size_t t = first_origin, step = 0; t + 1 < series.size(); ++t, ++step) {
    double shift = 0.0;
    double scale = 1.0;
    if (differenced) {
      double prev = series.at(t - r);
      for (std::size_t i = 0; i < r; ++i) {
        const double cur = series.at(t - r + 1 + i);
        w[i] = cur - prev;
        prev = cur;
      }
      double mean = 0.0;
      for (double v : w) mean += v;
      mean /= static_cast<double>(r);
      double ss = 0.0;
      for (double v : w) ss += (v - mean) * (v - mean);
      const double sd = std::sqrt(ss / static_cast<double>(r - 1));
      if (!(sd > 0.0)) throw DataError("rolling forecast: zero-variance differences in window ending at " + std::to_string(t));
      for (double& v : w) v = (v - mean) / sd;
      shift = mean;
      scale = sd;
    } else {
      for (std::size_t i = 0; i < r; ++i) w[i] = series.at(t - r + 1 + i);
    }

    RngStream stream(derive_seed(config.seed, {step}));
    Predictive pred;
    if (config.model == ForecastModel::ols_ar) {
      pred = ols_predictive(w, config.ols_draws, stream);
    } else {
      if (!posterior || step % static_cast<std::size_t>(config.refit_every) == 0) {
        const auto errors =
            config.model == ForecastModel::sepd_ar ? ErrorDistribution::sepd : ErrorDistribution::normal;
        const ModelSpec model = ModelSpec::autoregressive(w, errors);
        const Chain chain = prior ? run_mwg(model, *prior, config.mcmc, stream) : run_mwg(model, config.mcmc, stream);
        posterior = extract(chain, config.draw_thin);
      }
      pred = bayes_predictive(*posterior, w.back(), stream);
    }

    if (config.before_realized) config.before_realized(t);
    double realized = series.at(t + 1);
    if (differenced) realized = (realized - series.at(t) - shift) / scale;

    ForecastRecord rec;
    rec.t = t;
    rec.point_forecast = pred.point;
    rec.realized = realized;
    const LogScore ls = pred.log_score(realized);
    rec.log_score = ls.value;
    rec.log_score_underflow = ls.underflow;
    rec.crps = crps_mc(pred.draws, realized);
    rec.predictive_draws = std::move(pred.draws);
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<ForecastRecord> rolling_forecast(std::span<const double> series, const ForecastConfig& config) {
  VectorSource source(series);
  return rolling_forecast(source, config);
}

}  // namespace twopiece
