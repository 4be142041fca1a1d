#pragma once

#include <functional>
#include <vector>

#include "twopiece/params.hpp"

namespace twopiece {

// Loss-based prior on the integer tail parameter:
//
//   pi(p) ∝ exp{ min_{p' != p} D(f_p || f_p') } - 1,   p = 1..p_max,
//
// with the minimum found by exhaustive scan over {1..p_max} \ {p}. Ties within
// 1e-14 resolve to the smaller p'. Immutable once built.
class TailPrior {
 public:
  // Divergence backend used by the scan; defaults to the family's closed form.
  using Divergence = std::function<double(int p, int p_prime)>;

  static TailPrior build(Family family, int p_max);
  static TailPrior build(Family family, int p_max, const Divergence& divergence);

  Family family() const noexcept { return family_; }
  int p_max() const noexcept { return static_cast<int>(masses_.size()); }

  // All vectors are indexed by p - 1.
  const std::vector<double>& masses() const noexcept { return masses_; }
  const std::vector<double>& log_masses() const noexcept { return log_masses_; }
  const std::vector<int>& argmin_table() const noexcept { return argmin_; }
  const std::vector<double>& kl_min() const noexcept { return kl_min_; }
  const std::vector<double>& unnormalized() const noexcept { return unnormalized_; }

  double mass(int p) const;
  // -inf outside [1, p_max].
  double log_mass(int p) const noexcept;

  // A prior from explicit positive weights (normalized here). For toy targets
  // in tests and for callers that already hold masses.
  static TailPrior from_weights(Family family, std::vector<double> weights);

 private:
  TailPrior() = default;
  void normalize();

  Family family_ = Family::sepd;
  std::vector<double> unnormalized_;
  std::vector<double> masses_;
  std::vector<double> log_masses_;
  std::vector<int> argmin_;
  std::vector<double> kl_min_;
};

TailPrior build_tail_prior(Family family, int p_max = 100);

// Unnormalized SGLD mass in closed form, p / (2 (2p + 1)) exp{2 [psi(2p) - psi(p)]} - 1,
// i.e. the generic construction with p' = p + 1.
double sgld_prior_unnormalized_closed_form(int p);

struct ProprietyReport {
  Family family = Family::sepd;
  int p_limit = 0;
  std::vector<double> terms;         // unnormalized mass for p = 1..p_limit
  std::vector<double> partial_sums;  // running sums of terms
  std::vector<int> argmin;           // minimizing neighbour for each p
  int crossover = 0;                 // last p with argmin p + 1 (SEPD) or 0
  double tail_ratio = 0.0;           // terms[p_limit] / terms[p_limit / 2]
  double loglog_slope = 0.0;         // least-squares slope of log term on log p, last decade
  double last_increment = 0.0;       // partial_sums.back() - partial_sums[size - 2]
  bool monotone_tail = false;        // terms strictly decrease after the crossover
  bool summable = false;             // decay faster than 1/p over the last decade
};

// Computes masses out to p = p_limit (default 10^4) and summarizes how the
// tail terms decay. The minimization is over the two neighbours p - 1, p + 1,
// which coincides with the exhaustive scan wherever the scan is affordable.
ProprietyReport tail_prior_propriety_check(Family family, int p_limit = 10000);

}  // namespace twopiece
