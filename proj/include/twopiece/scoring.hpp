#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace twopiece {

// sqrt(mean((forecast - realized)^2)). Throws DomainError on empty input or a
// length mismatch.
double rmse(std::span<const double> forecasts, std::span<const double> realized);

struct LogScore {
  double value = 0.0;
  bool underflow = false;  // mixture density is zero at the realized value
};

// log( (1/M) sum_m exp(log_densities[m]) ), evaluated stably.
LogScore log_score_mixture(std::span<const double> log_densities);

// Energy form E|Y - y| - 0.5 E|Y - Y'| with both expectations under the
// empirical distribution of the draws (all M^2 index pairs, so the score is the
// exact CRPS of that distribution and never negative). O(M log M) through the
// sorted-draws identity. Throws DomainError for fewer than two draws.
double crps_mc(std::span<const double> draws, double realized);
// Same quantity as the integral of (F_M(x) - 1{x >= y})^2 over the real line.
double crps_sorted_integral(std::span<const double> draws, double realized);

// First differences, centred and scaled by their sample mean and standard
// deviation (divisor n - 1). Throws DataError for fewer than three points or a
// zero-variance difference series.
std::vector<double> standardize_first_differences(std::span<const double> series);

struct ForecastRecord {
  std::size_t t = 0;  // forecast origin (0-based index of the last observation used)
  double point_forecast = 0.0;
  std::vector<double> predictive_draws;
  double realized = 0.0;
  double log_score = 0.0;
  bool log_score_underflow = false;
  double crps = 0.0;
};

struct ModelRecords {
  std::string model;
  std::vector<ForecastRecord> records;
};

struct ModelScores {
  std::string model;
  double rmse = 0.0;
  double mean_log_score = 0.0;
  double mean_crps = 0.0;
};

ModelScores score_records(const ModelRecords& records);

struct ComparisonRow {
  std::string model;
  bool baseline = false;
  // Baseline row: raw RMSE, average log score and average CRPS. Other rows:
  // RMSE ratio, log-score difference (model - baseline) and CRPS ratio.
  double rmse = 0.0;
  double log_score = 0.0;
  double crps = 0.0;
};

// The first entry is the baseline. Throws DomainError when the evaluation
// periods (origins and realized values) differ.
std::vector<ComparisonRow> comparison_table(std::span<const ModelRecords> models);

}  // namespace twopiece
