#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "twopiece/mcmc.hpp"
#include "twopiece/params.hpp"
#include "twopiece/summary.hpp"

namespace twopiece {

// ---- data generation ------------------------------------------------------

// AR(1) series of length T with two-piece errors. The recursion starts from an
// error draw and runs `presample` extra steps that are discarded.
std::vector<double> simulate_ar(RngStream& stream, std::size_t length, double phi1, Family family,
                                const TwoPieceParams& errors, std::size_t presample = 50);

struct RegressionData {
  Eigen::VectorXd y;
  Eigen::MatrixXd x;  // intercept column then one U(0,1) covariate
};

// y_i = beta0 + beta1 x_i + eps_i with x_i ~ U(0,1) drawn from `covariate_stream`.
RegressionData simulate_regression(RngStream& error_stream, RngStream& covariate_stream, std::size_t n,
                                   double beta0, double beta1, Family family, const TwoPieceParams& errors);

// ---- coverage study -------------------------------------------------------

using ChainFitter =
    std::function<Chain(const ModelSpec& model, const TailPrior& prior, const MwgConfig& config, RngStream& stream)>;

struct CoverageConfig {
  ModelKind kind = ModelKind::ar1;
  Family family = Family::sepd;
  std::vector<int> p_values{1, 2, 3, 4, 5};
  std::vector<double> alphas{0.5};
  std::vector<std::size_t> sizes{100};
  int replicates = 50;
  double sigma = 1.0;
  double phi1 = 0.5;                  // AR
  double beta0 = 1.5, beta1 = -1.0;   // regression
  MwgConfig mcmc;
  std::uint64_t seed = 1;
  int threads = 1;

  // CI profile: p <= 5, alpha = 0.5, 50 replicates, 4000 iterations.
  static CoverageConfig desk(ModelKind kind);
  // Full grid: p = 1..20, alpha in {0.3, 0.5, 0.8}, 250 replicates.
  static CoverageConfig full(ModelKind kind);

  void validate() const;
};

struct CoverageCell {
  int p = 0;
  double alpha = 0.0;
  std::size_t n = 0;
  int replicates = 0;
  double coverage = 0.0;   // fraction of 95% intervals for p containing the truth
  double rel_rmse = 0.0;   // sqrt(mean (posterior mean of p - p)^2) / p
  double mean_posterior_mean = 0.0;
  double mean_posterior_median = 0.0;
};

// Per-replicate stream seed: hash of (master, p, alpha, n, replicate), so a
// cell's results do not depend on which other cells are in the grid.
std::uint64_t replicate_seed(std::uint64_t master, int p, double alpha, std::size_t n, int replicate);

// Errors from a replicate are rethrown with the cell identified.
std::vector<CoverageCell> run_coverage_study(const CoverageConfig& config, const ChainFitter& fitter = {});

// ---- single-dataset demos -------------------------------------------------

struct DemoConfig {
  ModelKind kind = ModelKind::ar1;
  Family family = Family::sepd;
  std::size_t n = 300;
  double alpha = 0.23;
  int p = 9;
  double sigma = 1.0;
  std::vector<double> coefficients{-0.5};  // phi1, or (beta0, beta1)
  MwgConfig mcmc;
  std::uint64_t seed = 1;

  // AR(1)-SEPD: T = 300, phi1 = -0.5, alpha = 0.23, p = 9, sigma = 1, 20000/5000.
  static DemoConfig ar_sepd();
  // Regression-SGLD: n = 300, beta = (-2.5, 3), alpha = 0.13, p = 9, sigma = 1, 30000/5000.
  static DemoConfig reg_sgld();
};

struct DemoResult {
  PosteriorSummary summary;
  Chain chain;
  std::vector<std::string> names;  // parameter names in summary order
  std::vector<double> truth;       // true value per name
};

DemoResult run_inference_demo(const DemoConfig& config);

// ---- Kullback-Leibler tables ----------------------------------------------

struct KlRow {
  int p = 0;
  double to_lower = 0.0;  // D(f_p || f_{p-1})
  double to_upper = 0.0;  // D(f_p || f_{p+1})
};

// p = 2..30 followed by 60, 90, ..., 180.
std::vector<int> default_kl_table_rows();
// Throws DomainError for p < 2.
std::vector<KlRow> emit_kl_tables(Family family, const std::vector<int>& p_values);

}  // namespace twopiece
