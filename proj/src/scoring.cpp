#include "twopiece/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "twopiece/errors.hpp"

namespace twopiece {

double rmse(std::span<const double> forecasts, std::span<const double> realized) {
  if (forecasts.size() != realized.size()) throw DomainError("rmse: length mismatch");
  if (forecasts.empty()) throw DomainError("rmse: empty input");
  double ss = 0.0;
  for (std::size_t i = 0; i < forecasts.size(); ++i) {
    const double e = forecasts[i] - realized[i];
    ss += e * e;
  }
  return std::sqrt(ss / static_cast<double>(forecasts.size()));
}

LogScore log_score_mixture(std::span<const double> log_densities) {
  if (log_densities.empty()) throw DomainError("log score: no predictive draws");
  double m = -std::numeric_limits<double>::infinity();
  for (double v : log_densities) m = std::max(m, v);
  if (m == -std::numeric_limits<double>::infinity()) return {m, true};
  double s = 0.0;
  for (double v : log_densities) s += std::exp(v - m);
  return {m + std::log(s / static_cast<double>(log_densities.size())), false};
}

double crps_mc(std::span<const double> draws, double realized) {
  const std::size_t m = draws.size();
  if (m < 2) throw DomainError("crps: need at least two predictive draws");
  std::vector<double> x(draws.begin(), draws.end());
  std::sort(x.begin(), x.end());
  double abs_dev = 0.0;
  double pair_sum = 0.0;  // sum_{i<j} (x_j - x_i)
  const auto md = static_cast<double>(m);
  for (std::size_t k = 0; k < m; ++k) {
    abs_dev += std::abs(x[k] - realized);
    pair_sum += x[k] * (2.0 * static_cast<double>(k) - md + 1.0);
  }
  const double e1 = abs_dev / md;
  const double e2 = 2.0 * pair_sum / (md * md);
  return std::max(0.0, e1 - 0.5 * e2);
}

double crps_sorted_integral(std::span<const double> draws, double realized) {
  const std::size_t m = draws.size();
  if (m < 2) throw DomainError("crps: need at least two predictive draws");
  std::vector<double> x(draws.begin(), draws.end());
  x.push_back(realized);
  std::sort(x.begin(), x.end());
  std::vector<double> sorted_draws(draws.begin(), draws.end());
  std::sort(sorted_draws.begin(), sorted_draws.end());
  // Piecewise-constant integrand between consecutive breakpoints.
  double total = 0.0;
  std::size_t below = 0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    while (below < m && sorted_draws[below] <= x[i]) ++below;
    const double f = static_cast<double>(below) / static_cast<double>(m);
    const double h = x[i] >= realized ? 1.0 : 0.0;
    total += (f - h) * (f - h) * (x[i + 1] - x[i]);
  }
  return total;
}

std::vector<double> standardize_first_differences(std::span<const double> series) {
  if (series.size() < 3) throw DataError("standardize: need at least three observations");
  std::vector<double> d(series.size() - 1);
  for (std::size_t i = 1; i < series.size(); ++i) d[i - 1] = series[i] - series[i - 1];
  double mean = 0.0;
  for (double v : d) mean += v;
  mean /= static_cast<double>(d.size());
  double ss = 0.0;
  for (double v : d) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(d.size() - 1));
  if (!(sd > 0.0)) throw DataError("standardize: first differences have zero variance");
  for (double& v : d) v = (v - mean) / sd;
  return d;
}

ModelScores score_records(const ModelRecords& records) {
  if (records.records.empty()) throw DomainError("scores: no forecast records for " + records.model);
  std::vector<double> point;
  std::vector<double> realized;
  double ls = 0.0;
  double crps = 0.0;
  for (const auto& r : records.records) {
    point.push_back(r.point_forecast);
    realized.push_back(r.realized);
    ls += r.log_score;
    crps += r.crps;
  }
  const auto n = static_cast<double>(records.records.size());
  return {records.model, rmse(point, realized), ls / n, crps / n};
}

std::vector<ComparisonRow> comparison_table(std::span<const ModelRecords> models) {
  if (models.empty()) throw DomainError("comparison table: no models");
  const auto& base = models.front().records;
  for (const auto& m : models) {
    if (m.records.size() != base.size()) throw DomainError("comparison table: misaligned evaluation periods");
    for (std::size_t i = 0; i < base.size(); ++i) {
      if (m.records[i].t != base[i].t || m.records[i].realized != base[i].realized) {
        throw DomainError("comparison table: misaligned evaluation periods for " + m.model);
      }
    }
  }
  const ModelScores b = score_records(models.front());
  std::vector<ComparisonRow> rows;
  rows.push_back({b.model, true, b.rmse, b.mean_log_score, b.mean_crps});
  for (std::size_t i = 1; i < models.size(); ++i) {
    const ModelScores s = score_records(models[i]);
    rows.push_back({s.model, false, s.rmse / b.rmse, s.mean_log_score - b.mean_log_score, s.mean_crps / b.mean_crps});
  }
  return rows;
}

}  // namespace twopiece
