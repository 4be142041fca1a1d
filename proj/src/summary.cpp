#include "twopiece/summary.hpp"

#include <algorithm>
#include <cmath>

#include "twopiece/errors.hpp"

namespace twopiece {
namespace {

std::vector<double> sorted_copy(std::span<const double> draws) {
  if (draws.empty()) throw DomainError("summary: no draws");
  std::vector<double> v(draws.begin(), draws.end());
  std::sort(v.begin(), v.end());
  return v;
}

double quantile_sorted(const std::vector<double>& v, double q) {
  const auto m = static_cast<double>(v.size());
  auto rank = static_cast<std::size_t>(std::ceil(q * m));
  rank = std::clamp<std::size_t>(rank, 1, v.size());
  return v[rank - 1];
}

double median_sorted(const std::vector<double>& v) {
  const std::size_t m = v.size();
  if (m % 2 == 1) return v[m / 2];
  return 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

}  // namespace

const ParameterSummary& PosteriorSummary::at(std::string_view name) const {
  for (const auto& p : parameters) {
    if (p.name == name) return p;
  }
  throw DomainError("summary has no parameter '" + std::string(name) + "'");
}

double sample_median(std::span<const double> draws) { return median_sorted(sorted_copy(draws)); }

double empirical_quantile(std::span<const double> draws, double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw DomainError("quantile level must lie in [0, 1]");
  return quantile_sorted(sorted_copy(draws), q);
}

ParameterSummary summarize_draws(std::string name, std::span<const double> draws) {
  const auto v = sorted_copy(draws);
  double sum = 0.0;
  for (double x : draws) sum += x;
  ParameterSummary s;
  s.name = std::move(name);
  s.mean = sum / static_cast<double>(draws.size());
  s.median = median_sorted(v);
  s.lower = quantile_sorted(v, 0.025);
  s.upper = quantile_sorted(v, 0.975);
  return s;
}

PosteriorSummary summarize(const Chain& chain) {
  if (chain.size() == 0) throw DomainError("summary: chain is empty");
  PosteriorSummary out;
  out.draws = chain.size();
  for (std::size_t i = 0; i < chain.names.size(); ++i) {
    out.parameters.push_back(summarize_draws(chain.names[i], chain.draws[i]));
  }
  return out;
}

double batch_means_stderr(std::span<const double> draws, std::size_t batches) {
  if (batches < 2 || draws.size() < 2 * batches) throw DomainError("batch means: too few draws");
  const std::size_t len = draws.size() / batches;
  std::vector<double> means(batches, 0.0);
  for (std::size_t b = 0; b < batches; ++b) {
    double s = 0.0;
    for (std::size_t i = 0; i < len; ++i) s += draws[b * len + i];
    means[b] = s / static_cast<double>(len);
  }
  double mean = 0.0;
  for (double m : means) mean += m;
  mean /= static_cast<double>(batches);
  double ss = 0.0;
  for (double m : means) ss += (m - mean) * (m - mean);
  return std::sqrt(ss / static_cast<double>(batches - 1) / static_cast<double>(batches));
}

}  // namespace twopiece
