#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "golden_tolerance.hpp"
#include "kl_golden.hpp"
#include "twopiece/errors.hpp"
#include "twopiece/experiments.hpp"
#include "twopiece/kl.hpp"

using namespace twopiece;
using twopiece::testing::kSepdKlGolden;
using twopiece::testing::last_digit_unit;

namespace {

// Returns p draws spread evenly over the whole support, so every interval
// contains every true p.
Chain spread_fitter(const ModelSpec& model, const TailPrior& prior, const MwgConfig& config, RngStream&) {
  Chain c;
  c.names = model.coefficient_names();
  c.names.insert(c.names.end(), {"alpha", "p", "sigma"});
  c.draws.assign(c.names.size(), {});
  for (int i = 0; i < 400; ++i) {
    for (std::size_t j = 0; j < model.k(); ++j) c.draws[j].push_back(0.0);
    c.draws[model.k()].push_back(0.5);
    c.draws[model.k() + 1].push_back(static_cast<double>(1 + i % prior.p_max()));
    c.draws[model.k() + 2].push_back(1.0);
  }
  c.config = config;
  return c;
}

CoverageConfig quick(ModelKind kind) {
  CoverageConfig c = CoverageConfig::desk(kind);
  c.p_values = {1, 3};
  c.sizes = {40};
  c.replicates = 3;
  c.mcmc.n_iter = 300;
  c.mcmc.n_burn = 100;
  c.mcmc.p_max = 20;
  c.seed = 21;
  return c;
}

}  // namespace

TEST_SUITE("experiments") {
  TEST_CASE("simulated AR series has the requested length and is reproducible") {
    RngStream a(1), b(1);
    const TwoPieceParams e(0.3, 2);
    const auto x = simulate_ar(a, 250, 0.5, Family::sepd, e);
    const auto y = simulate_ar(b, 250, 0.5, Family::sepd, e);
    CHECK(x.size() == 250);
    CHECK(x == y);
    // lag-one sample autocorrelation near phi
    RngStream c(2);
    const auto z = simulate_ar(c, 20000, 0.5, Family::sgld, e);
    double m = 0;
    for (double v : z) m += v;
    m /= static_cast<double>(z.size());
    double num = 0, den = 0;
    for (std::size_t t = 1; t < z.size(); ++t) num += (z[t] - m) * (z[t - 1] - m);
    for (double v : z) den += (v - m) * (v - m);
    CHECK(num / den == doctest::Approx(0.5).epsilon(0.05));
  }

  TEST_CASE("simulated regression") {
    RngStream e(3), x(4);
    const auto d = simulate_regression(e, x, 5000, -2.5, 3.0, Family::sgld, TwoPieceParams(0.5, 3));
    CHECK(d.y.size() == 5000);
    CHECK(d.x.cols() == 2);
    for (Eigen::Index i = 0; i < d.x.rows(); ++i) {
      CHECK(d.x(i, 0) == 1.0);
      CHECK((d.x(i, 1) > 0.0 && d.x(i, 1) < 1.0));
    }
    // symmetric errors: least squares recovers the coefficients
    const Eigen::VectorXd b = (d.x.transpose() * d.x).ldlt().solve(d.x.transpose() * d.y);
    CHECK(b[0] == doctest::Approx(-2.5).epsilon(0.05));
    CHECK(b[1] == doctest::Approx(3.0).epsilon(0.05));
  }

  TEST_CASE("stub fitter with full-support draws covers every cell") {
    for (auto kind : {ModelKind::ar1, ModelKind::regression}) {
      auto cfg = quick(kind);
      const auto cells = run_coverage_study(cfg, spread_fitter);
      REQUIRE(cells.size() == 2);
      for (const auto& c : cells) {
        CHECK(c.coverage == 1.0);
        CHECK(c.replicates == 3);
        CHECK(c.mean_posterior_mean == doctest::Approx(10.5));
        CHECK(c.rel_rmse == doctest::Approx(std::abs(10.5 - c.p) / c.p));
      }
    }
  }

  TEST_CASE("cells do not depend on the rest of the grid or on threading") {
    auto cfg = quick(ModelKind::ar1);
    const auto full = run_coverage_study(cfg);
    cfg.p_values = {3};
    cfg.threads = 2;
    const auto single = run_coverage_study(cfg);
    REQUIRE(single.size() == 1);
    CHECK(single[0].p == 3);
    CHECK(single[0].coverage == full[1].coverage);
    CHECK(single[0].mean_posterior_mean == full[1].mean_posterior_mean);
    CHECK(single[0].rel_rmse == full[1].rel_rmse);
    CHECK(replicate_seed(1, 3, 0.5, 40, 0) != replicate_seed(1, 3, 0.5, 40, 1));
    CHECK(replicate_seed(1, 3, 0.5, 40, 0) != replicate_seed(1, 3, 0.3, 40, 0));
  }

  TEST_CASE("replicate failures name the cell") {
    auto cfg = quick(ModelKind::ar1);
    const ChainFitter failing = [](const ModelSpec&, const TailPrior&, const MwgConfig&, RngStream&) -> Chain {
      throw NumericalError("boom");
    };
    try {
      run_coverage_study(cfg, failing);
      FAIL("expected an error");
    } catch (const NumericalError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("cell (p=") != std::string::npos);
      CHECK(msg.find("boom") != std::string::npos);
    }
  }

  TEST_CASE("coverage config validation") {
    auto cfg = quick(ModelKind::ar1);
    cfg.p_values = {0};
    CHECK_THROWS_AS(run_coverage_study(cfg), ConfigError);
    cfg = quick(ModelKind::ar1);
    cfg.alphas = {1.0};
    CHECK_THROWS_AS(run_coverage_study(cfg), ConfigError);
    cfg = quick(ModelKind::ar1);
    cfg.replicates = 0;
    CHECK_THROWS_AS(run_coverage_study(cfg), ConfigError);
    const auto full = CoverageConfig::full(ModelKind::regression);
    CHECK(full.p_values.size() == 20);
    CHECK(full.replicates == 250);
    CHECK(full.family == Family::sgld);
  }

  TEST_CASE("KL table rows") {
    const auto rows = default_kl_table_rows();
    CHECK(rows.size() == 34);
    CHECK(rows.front() == 2);
    CHECK(rows.back() == 180);
    const auto t = emit_kl_tables(Family::sepd, rows);
    for (const auto& r : t) {
      CHECK(r.to_lower == kl_sepd(r.p, r.p - 1));
      CHECK(r.to_upper == kl_sepd(r.p, r.p + 1));
    }
    CHECK(std::abs(t[13].to_upper - std::stod(kSepdKlGolden[13].to_upper)) <=
          last_digit_unit(kSepdKlGolden[13].to_upper));
    CHECK_THROWS_AS(emit_kl_tables(Family::sgld, {1, 2}), DomainError);
  }

  TEST_CASE("demo presets") {
    const auto a = DemoConfig::ar_sepd();
    CHECK(a.n == 300);
    CHECK(a.alpha == 0.23);
    CHECK(a.p == 9);
    CHECK(a.coefficients == std::vector<double>{-0.5});
    CHECK(a.mcmc.n_iter == 20000);
    const auto r = DemoConfig::reg_sgld();
    CHECK(r.family == Family::sgld);
    CHECK(r.coefficients == std::vector<double>{-2.5, 3.0});

    auto small = a;
    small.n = 80;
    small.mcmc.n_iter = 500;
    small.mcmc.n_burn = 100;
    small.mcmc.p_max = 30;
    const auto res = run_inference_demo(small);
    CHECK(res.names == std::vector<std::string>{"phi1", "alpha", "p", "sigma"});
    CHECK(res.truth == std::vector<double>{-0.5, 0.23, 9.0, 1.0});
    CHECK(res.summary.draws == 400);
  }
}
