#include "twopiece/experiments.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "twopiece/errors.hpp"
#include "twopiece/kl.hpp"
#include "twopiece/sampling.hpp"
#include "twopiece/tail_prior.hpp"

namespace twopiece {

std::vector<double> simulate_ar(RngStream& stream, std::size_t length, double phi1, Family family,
                                const TwoPieceParams& errors, std::size_t presample) {
  std::vector<double> y(length);
  double prev = sample_two_piece(stream, family, errors);
  for (std::size_t i = 0; i < presample; ++i) prev = phi1 * prev + sample_two_piece(stream, family, errors);
  for (std::size_t t = 0; t < length; ++t) {
    prev = phi1 * prev + sample_two_piece(stream, family, errors);
    y[t] = prev;
  }
  return y;
}

RegressionData simulate_regression(RngStream& error_stream, RngStream& covariate_stream, std::size_t n,
                                   double beta0, double beta1, Family family, const TwoPieceParams& errors) {
  RegressionData d;
  const auto ni = static_cast<Eigen::Index>(n);
  d.x.resize(ni, 2);
  d.y.resize(ni);
  for (Eigen::Index i = 0; i < ni; ++i) {
    d.x(i, 0) = 1.0;
    d.x(i, 1) = covariate_stream.uniform();
  }
  for (Eigen::Index i = 0; i < ni; ++i) {
    d.y[i] = beta0 + beta1 * d.x(i, 1) + sample_two_piece(error_stream, family, errors);
  }
  return d;
}

CoverageConfig CoverageConfig::desk(ModelKind kind) {
  CoverageConfig c;
  c.kind = kind;
  c.family = kind == ModelKind::ar1 ? Family::sepd : Family::sgld;
  c.sizes = {100};
  c.mcmc.n_iter = 4000;
  c.mcmc.n_burn = 1000;
  return c;
}

CoverageConfig CoverageConfig::full(ModelKind kind) {
  CoverageConfig c = desk(kind);
  c.p_values.clear();
  for (int p = 1; p <= 20; ++p) c.p_values.push_back(p);
  c.alphas = {0.3, 0.5, 0.8};
  c.replicates = 250;
  if (kind == ModelKind::ar1) {
    c.sizes = {100, 250};
    c.mcmc.n_iter = 20000;
    c.mcmc.n_burn = 5000;
  } else {
    c.sizes = {30, 100};
    c.mcmc.n_iter = 10000;
    c.mcmc.n_burn = 5000;
  }
  return c;
}

void CoverageConfig::validate() const {
  if (replicates < 1) throw ConfigError("coverage: replicates must be >= 1");
  if (p_values.empty() || alphas.empty() || sizes.empty()) throw ConfigError("coverage: empty parameter grid");
  for (int p : p_values) {
    if (p < 1 || p > mcmc.p_max) throw ConfigError("coverage: p values must lie in [1, p_max]");
  }
  for (double a : alphas) {
    if (!(a > 0.0 && a < 1.0)) throw ConfigError("coverage: alpha values must lie in (0, 1)");
  }
  for (std::size_t n : sizes) {
    if (n < 3) throw ConfigError("coverage: sample sizes must be >= 3");
  }
  if (!(sigma > 0.0)) throw ConfigError("coverage: sigma must be positive");
  if (threads < 1) throw ConfigError("coverage: threads must be >= 1");
  if (family == Family::beta_logistic) throw ConfigError("coverage: family must be sepd or sgld");
  mcmc.validate();
}

std::uint64_t replicate_seed(std::uint64_t master, int p, double alpha, std::size_t n, int replicate) {
  return derive_seed(master, {static_cast<std::uint64_t>(p), double_bits(alpha), static_cast<std::uint64_t>(n),
                              static_cast<std::uint64_t>(replicate)});
}

namespace {

struct ReplicateOutcome {
  bool covered = false;
  double mean = 0.0;
  double median = 0.0;
};

ModelSpec simulate_model(const CoverageConfig& c, int p, double alpha, std::size_t n, std::uint64_t seed) {
  RngStream data_stream(derive_seed(seed, {0}));
  const TwoPieceParams errors(alpha, p, 0.0, c.sigma);
  const ErrorDistribution dist = error_distribution_for(c.family);
  if (c.kind == ModelKind::ar1) {
    const auto y = simulate_ar(data_stream, n, c.phi1, c.family, errors);
    return ModelSpec::autoregressive(y, dist);
  }
  RngStream covariate_stream(derive_seed(seed, {1}));
  auto d = simulate_regression(data_stream, covariate_stream, n, c.beta0, c.beta1, c.family, errors);
  return ModelSpec::regression(std::move(d.y), std::move(d.x), dist);
}

std::string cell_label(int p, double alpha, std::size_t n) {
  std::ostringstream os;
  os << "cell (p=" << p << ", alpha=" << alpha << ", n=" << n << ")";
  return os.str();
}

}  // namespace

std::vector<CoverageCell> run_coverage_study(const CoverageConfig& config, const ChainFitter& fitter) {
  config.validate();
  const TailPrior prior = build_tail_prior(config.family, config.mcmc.p_max);
  const ChainFitter fit = fitter ? fitter : ChainFitter([](const ModelSpec& m, const TailPrior& tp,
                                                           const MwgConfig& mc, RngStream& s) {
    return run_mwg(m, tp, mc, s);
  });

  struct Task {
    std::size_t cell;
    int p;
    double alpha;
    std::size_t n;
    int replicate;
  };
  std::vector<CoverageCell> cells;
  std::vector<Task> tasks;
  for (std::size_t n : config.sizes) {
    for (double alpha : config.alphas) {
      for (int p : config.p_values) {
        CoverageCell cell;
        cell.p = p;
        cell.alpha = alpha;
        cell.n = n;
        cell.replicates = config.replicates;
        for (int r = 0; r < config.replicates; ++r) tasks.push_back({cells.size(), p, alpha, n, r});
        cells.push_back(cell);
      }
    }
  }

  std::vector<ReplicateOutcome> outcomes(tasks.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&]() {
    while (!failed.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      const Task& task = tasks[i];
      try {
        const std::uint64_t seed = replicate_seed(config.seed, task.p, task.alpha, task.n, task.replicate);
        const ModelSpec model = simulate_model(config, task.p, task.alpha, task.n, seed);
        RngStream mcmc_stream(derive_seed(seed, {2}));
        const Chain chain = fit(model, prior, config.mcmc, mcmc_stream);
        const ParameterSummary s = summarize_draws("p", chain.column("p"));
        const auto truth = static_cast<double>(task.p);
        outcomes[i] = {s.lower <= truth && truth <= s.upper, s.mean, s.median};
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) {
          const std::string msg = cell_label(task.p, task.alpha, task.n) + ", replicate " +
                                  std::to_string(task.replicate) + ": " + e.what();
          if (dynamic_cast<const DataError*>(&e)) {
            error = std::make_exception_ptr(DataError(msg));
          } else if (dynamic_cast<const ConfigError*>(&e)) {
            error = std::make_exception_ptr(ConfigError(msg));
          } else {
            error = std::make_exception_ptr(NumericalError(msg));
          }
        }
        failed.store(true);
      }
    }
  };

  const auto n_threads = static_cast<std::size_t>(config.threads);
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);

  std::vector<double> sq(cells.size(), 0.0);
  std::vector<int> covered(cells.size(), 0);
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const auto& o = outcomes[i];
    const std::size_t c = tasks[i].cell;
    covered[c] += o.covered ? 1 : 0;
    const double e = o.mean - tasks[i].p;
    sq[c] += e * e;
    cells[c].mean_posterior_mean += o.mean;
    cells[c].mean_posterior_median += o.median;
  }
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const auto r = static_cast<double>(cells[c].replicates);
    cells[c].coverage = covered[c] / r;
    cells[c].rel_rmse = std::sqrt(sq[c] / r) / cells[c].p;
    cells[c].mean_posterior_mean /= r;
    cells[c].mean_posterior_median /= r;
  }
  return cells;
}

DemoConfig DemoConfig::ar_sepd() {
  DemoConfig c;
  c.mcmc.n_iter = 20000;
  c.mcmc.n_burn = 5000;
  return c;
}

DemoConfig DemoConfig::reg_sgld() {
  DemoConfig c;
  c.kind = ModelKind::regression;
  c.family = Family::sgld;
  c.alpha = 0.13;
  c.coefficients = {-2.5, 3.0};
  c.mcmc.n_iter = 30000;
  c.mcmc.n_burn = 5000;
  return c;
}

DemoResult run_inference_demo(const DemoConfig& config) {
  if (config.family == Family::beta_logistic) throw ConfigError("demo: family must be sepd or sgld");
  const std::size_t expected = config.kind == ModelKind::ar1 ? 1 : 2;
  if (config.coefficients.size() != expected) throw ConfigError("demo: wrong number of true coefficients");
  const TwoPieceParams errors(config.alpha, config.p, 0.0, config.sigma);
  RngStream data_stream(derive_seed(config.seed, {0}));
  const ErrorDistribution dist = error_distribution_for(config.family);

  std::optional<ModelSpec> model;
  if (config.kind == ModelKind::ar1) {
    const auto y = simulate_ar(data_stream, config.n, config.coefficients[0], config.family, errors);
    model = ModelSpec::autoregressive(y, dist);
  } else {
    RngStream covariate_stream(derive_seed(config.seed, {1}));
    auto d = simulate_regression(data_stream, covariate_stream, config.n, config.coefficients[0],
                                 config.coefficients[1], config.family, errors);
    model = ModelSpec::regression(std::move(d.y), std::move(d.x), dist);
  }
  const TailPrior prior = build_tail_prior(config.family, config.mcmc.p_max);
  RngStream mcmc_stream(derive_seed(config.seed, {2}));
  DemoResult out;
  out.chain = run_mwg(*model, prior, config.mcmc, mcmc_stream);
  out.summary = summarize(out.chain);
  out.names = out.chain.names;
  out.truth = config.coefficients;
  out.truth.push_back(config.alpha);
  out.truth.push_back(static_cast<double>(config.p));
  out.truth.push_back(config.sigma);
  return out;
}

std::vector<int> default_kl_table_rows() {
  std::vector<int> rows;
  for (int p = 2; p <= 30; ++p) rows.push_back(p);
  for (int p = 60; p <= 180; p += 30) rows.push_back(p);
  return rows;
}

std::vector<KlRow> emit_kl_tables(Family family, const std::vector<int>& p_values) {
  std::vector<KlRow> rows;
  for (int p : p_values) {
    if (p < 2) throw DomainError("kl table: p must be >= 2, got " + std::to_string(p));
    rows.push_back({p, kl_closed_form(family, p, p - 1), kl_closed_form(family, p, p + 1)});
  }
  return rows;
}

}  // namespace twopiece
