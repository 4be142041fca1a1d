#pragma once

#include <span>
#include <string>
#include <vector>

#include "twopiece/mcmc.hpp"

namespace twopiece {

struct ParameterSummary {
  std::string name;
  double mean = 0.0;
  double median = 0.0;
  double lower = 0.0;  // 2.5% quantile
  double upper = 0.0;  // 97.5% quantile
};

struct PosteriorSummary {
  std::vector<ParameterSummary> parameters;
  std::size_t draws = 0;

  // Throws DomainError for an unknown name.
  const ParameterSummary& at(std::string_view name) const;
};

// Median: midpoint of the two middle order statistics for an even count.
// Interval endpoints are order statistics (inverse empirical CDF), so for the
// integer p draws they are integers.
double sample_median(std::span<const double> draws);
double empirical_quantile(std::span<const double> draws, double q);
ParameterSummary summarize_draws(std::string name, std::span<const double> draws);

// Throws DomainError for an empty chain.
PosteriorSummary summarize(const Chain& chain);

// Batch-means standard error of the sample mean.
double batch_means_stderr(std::span<const double> draws, std::size_t batches = 50);

}  // namespace twopiece
