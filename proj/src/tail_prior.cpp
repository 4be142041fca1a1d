#include "twopiece/tail_prior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "twopiece/errors.hpp"
#include "twopiece/kl.hpp"
#include "twopiece/special.hpp"

namespace twopiece {

TailPrior TailPrior::build(Family family, int p_max) {
  if (family != Family::sepd && family != Family::sgld) {
    throw DomainError("tail prior: family must be sepd or sgld");
  }
  return build(family, p_max, [family](int p, int q) { return kl_closed_form(family, p, q); });
}

TailPrior TailPrior::build(Family family, int p_max, const Divergence& divergence) {
  if (p_max < 2) throw DomainError("tail prior: p_max must be >= 2, got " + std::to_string(p_max));
  TailPrior prior;
  prior.family_ = family;
  prior.argmin_.resize(p_max);
  prior.kl_min_.resize(p_max);
  prior.unnormalized_.resize(p_max);
  for (int p = 1; p <= p_max; ++p) {
    double best = std::numeric_limits<double>::infinity();
    int best_q = 0;
    for (int q = 1; q <= p_max; ++q) {
      if (q == p) continue;
      const double d = divergence(p, q);
      // Scanning q upward, a later q only wins by more than the tie margin.
      if (d < best - 1e-14) {
        best = d;
        best_q = q;
      }
    }
    prior.argmin_[p - 1] = best_q;
    prior.kl_min_[p - 1] = best;
    prior.unnormalized_[p - 1] = std::expm1(best);
  }
  prior.normalize();
  return prior;
}

TailPrior TailPrior::from_weights(Family family, std::vector<double> weights) {
  if (weights.size() < 2) throw DomainError("tail prior: need at least two weights");
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) throw DomainError("tail prior: weights must be positive");
  }
  TailPrior prior;
  prior.family_ = family;
  prior.unnormalized_ = std::move(weights);
  const int n = static_cast<int>(prior.unnormalized_.size());
  prior.argmin_.assign(n, 0);
  prior.kl_min_.assign(n, std::numeric_limits<double>::quiet_NaN());
  prior.normalize();
  return prior;
}

void TailPrior::normalize() {
  for (double u : unnormalized_) {
    if (!(u > 0.0)) throw NumericalError("tail prior: non-positive unnormalized mass");
  }
  // Smallest first to keep the sum accurate.
  std::vector<double> sorted = unnormalized_;
  std::sort(sorted.begin(), sorted.end());
  const double total = std::accumulate(sorted.begin(), sorted.end(), 0.0);
  masses_.resize(unnormalized_.size());
  log_masses_.resize(unnormalized_.size());
  const double log_total = std::log(total);
  for (std::size_t i = 0; i < unnormalized_.size(); ++i) {
    masses_[i] = unnormalized_[i] / total;
    log_masses_[i] = std::log(unnormalized_[i]) - log_total;
  }
}

double TailPrior::mass(int p) const {
  if (p < 1 || p > p_max()) throw DomainError("tail prior: p out of range");
  return masses_[p - 1];
}

double TailPrior::log_mass(int p) const noexcept {
  if (p < 1 || p > p_max()) return -std::numeric_limits<double>::infinity();
  return log_masses_[p - 1];
}

TailPrior build_tail_prior(Family family, int p_max) { return TailPrior::build(family, p_max); }

double sgld_prior_unnormalized_closed_form(int p) {
  if (p < 1) throw DomainError("sgld prior: p must be >= 1");
  const double pd = p;
  return pd / (2.0 * (2.0 * pd + 1.0)) * std::exp(2.0 * (digamma(2.0 * pd) - digamma(pd))) - 1.0;
}

ProprietyReport tail_prior_propriety_check(Family family, int p_limit) {
  if (p_limit < 20) throw DomainError("propriety check: p_limit must be >= 20");
  ProprietyReport report;
  report.family = family;
  report.p_limit = p_limit;
  report.terms.resize(p_limit);
  report.partial_sums.resize(p_limit);
  report.argmin.resize(p_limit);
  double running = 0.0;
  for (int p = 1; p <= p_limit; ++p) {
    const double up = kl_closed_form(family, p, p + 1);
    double best = up;
    int best_q = p + 1;
    if (p > 1) {
      const double down = kl_closed_form(family, p, p - 1);
      if (down < up - 1e-14 * std::max(1.0, up)) {
        best = down;
        best_q = p - 1;
      }
    }
    report.argmin[p - 1] = best_q;
    report.terms[p - 1] = std::expm1(best);
    running += report.terms[p - 1];
    report.partial_sums[p - 1] = running;
    if (best_q == p + 1) report.crossover = p;
  }
  if (report.crossover == p_limit) report.crossover = 0;

  report.monotone_tail = true;
  for (int p = std::max(report.crossover, 1) + 1; p < p_limit; ++p) {
    if (!(report.terms[p] < report.terms[p - 1])) {
      report.monotone_tail = false;
      break;
    }
  }
  report.tail_ratio = report.terms[p_limit - 1] / report.terms[p_limit / 2 - 1];
  report.last_increment = report.partial_sums[p_limit - 1] - report.partial_sums[p_limit - 2];

  // Slope of log(term) against log(p) over the last decade [p_limit/10, p_limit].
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  for (int p = p_limit / 10; p <= p_limit; ++p) {
    const double x = std::log(static_cast<double>(p));
    const double y = std::log(report.terms[p - 1]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  report.loglog_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  report.summable = report.loglog_slope < -1.0 && report.monotone_tail;
  return report;
}

}  // namespace twopiece
