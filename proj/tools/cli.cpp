#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>

#include "twopiece/config.hpp"
#include "twopiece/csv.hpp"
#include "twopiece/errors.hpp"
#include "twopiece/experiments.hpp"
#include "twopiece/format.hpp"
#include "twopiece/forecasting.hpp"
#include "twopiece/quadrature.hpp"
#include "twopiece/sampling.hpp"
#include "twopiece/summary.hpp"
#include "twopiece/tail_prior.hpp"

namespace twopiece::cli {
namespace {

namespace fs = std::filesystem;


struct Registered {
  std::string name;
  CLI::Option* option;
};

// ---- helpers ---------------------------------------------------------------

template <class T>
std::optional<T> flag(const Options& o, const std::string& name, const T& value) {
  return o.has(name) ? std::optional<T>(value) : std::nullopt;
}

Family parse_family(const std::string& name) {
  if (name == "sepd") return Family::sepd;
  if (name == "sgld") return Family::sgld;
  throw UsageError("--family: expected sepd or sgld, got '" + name + "'");
}

struct ModelChoice {
  ModelKind kind;
  ErrorDistribution errors;
};

ModelChoice parse_model(const Options& o) {
  const std::string& m = o.model;
  const auto dash = m.find('-');
  const std::string kind_s = m.substr(0, dash);
  ModelChoice c{};
  if (kind_s == "ar") {
    c.kind = ModelKind::ar1;
  } else if (kind_s == "reg") {
    c.kind = ModelKind::regression;
  } else {
    throw UsageError("--model: expected ar-sepd, ar-sgld, ar-normal, reg-sgld, reg-sepd or reg-normal, got '" + m + "'");
  }
  std::optional<ErrorDistribution> from_model;
  if (dash != std::string::npos) {
    const std::string e = m.substr(dash + 1);
    if (e == "sepd") {
      from_model = ErrorDistribution::sepd;
    } else if (e == "sgld") {
      from_model = ErrorDistribution::sgld;
    } else if (e == "normal") {
      from_model = ErrorDistribution::normal;
    } else {
      throw UsageError("--model: unknown error distribution '" + e + "'");
    }
  }
  std::optional<ErrorDistribution> from_family;
  if (o.has("family")) from_family = error_distribution_for(parse_family(o.family));
  if (from_model && from_family && *from_model != *from_family) {
    throw UsageError("--family " + o.family + " conflicts with --model " + m);
  }
  if (!from_model && !from_family) {
    from_model = c.kind == ModelKind::ar1 ? ErrorDistribution::sepd : ErrorDistribution::sgld;
  }
  c.errors = from_model ? *from_model : *from_family;
  return c;
}

Family family_of(ErrorDistribution e) { return e == ErrorDistribution::sgld ? Family::sgld : Family::sepd; }

// Writes through `out` unless a path is given.
template <class F>
void emit(const Options& o, std::ostream& out, F&& write) {
  if (o.output.empty()) {
    write(out);
  } else {
    auto file = open_output(o.output);
    write(file);
  }
}

void log_resolution(const Resolver& r, std::ostream& err) {
  for (const auto& line : r.log()) err << "config: " << line << '\n';
  for (const auto& key : r.unused_keys()) err << "config: warning: unused key '" << key << "'\n";
}

MwgConfig resolve_mcmc(Resolver& r, const Options& o, int iter_default, int burn_default) {
  MwgConfig c;
  c.n_iter = r.get("mcmc.n_iter", flag(o, "n-iter", o.n_iter), iter_default);
  c.n_burn = r.get("mcmc.n_burn", flag(o, "n-burn", o.n_burn), burn_default);
  c.thin = r.get("mcmc.thin", flag(o, "thin", o.thin), 1);
  c.p_max = r.get("mcmc.p_max", flag(o, "p-max", o.p_max), 100);
  c.coef_scale = r.get("mcmc.coef_scale", std::optional<double>{}, c.coef_scale);
  c.alpha_scale = r.get("mcmc.alpha_scale", std::optional<double>{}, c.alpha_scale);
  c.sigma_scale = r.get("mcmc.sigma_scale", std::optional<double>{}, c.sigma_scale);
  c.adapt = r.get("mcmc.adapt", std::optional<bool>{}, c.adapt);
  c.validate();
  return c;
}

void write_histograms(std::ostream& out, const Chain& chain) {
  out << "parameter,lower,upper,count\n";
  for (std::size_t j = 0; j < chain.names.size(); ++j) {
    const auto& d = chain.draws[j];
    const auto [lo_it, hi_it] = std::minmax_element(d.begin(), d.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    if (chain.names[j] == "p") {
      std::map<long, std::size_t> counts;
      for (double v : d) ++counts[std::lround(v)];
      for (const auto& [v, c] : counts) out << "p," << v << ',' << v << ',' << c << '\n';
      continue;
    }
    constexpr int kBins = 40;
    std::vector<std::size_t> counts(kBins, 0);
    const double width = hi > lo ? (hi - lo) / kBins : 1.0;
    for (double v : d) {
      const int b = std::min(kBins - 1, static_cast<int>((v - lo) / width));
      ++counts[static_cast<std::size_t>(b)];
    }
    for (int b = 0; b < kBins; ++b) {
      out << chain.names[j] << ',' << format_double(lo + b * width) << ',' << format_double(lo + (b + 1) * width)
          << ',' << counts[static_cast<std::size_t>(b)] << '\n';
    }
  }
}

// ---- subcommands -------------------------------------------------------------

int cmd_kl_table(const Options& o, std::ostream& out) {
  const Family family = parse_family(o.family);
  std::vector<int> rows = default_kl_table_rows();
  if (o.has("p-max")) {
    if (o.p_max < 2) throw UsageError("--p-max must be at least 2");
    rows.clear();
    for (int p = 2; p <= o.p_max; ++p) rows.push_back(p);
  }
  const auto table = emit_kl_tables(family, rows);
  emit(o, out, [&](std::ostream& s) { write_kl_csv(s, table); });
  return kSuccess;
}

int cmd_prior_table(const Options& o, std::ostream& out) {
  const Family family = parse_family(o.family);
  if (o.p_max < 2) throw UsageError("--p-max must be at least 2");
  const TailPrior prior = build_tail_prior(family, o.p_max);
  emit(o, out, [&](std::ostream& s) {
    s << "p,argmin_pprime,kl_min,unnormalized_mass,normalized_mass\n";
    for (int p = 1; p <= prior.p_max(); ++p) {
      const auto i = static_cast<std::size_t>(p - 1);
      s << p << ',' << prior.argmin_table()[i] << ',' << format_double(prior.kl_min()[i]) << ','
        << format_double(prior.unnormalized()[i]) << ',' << format_double(prior.masses()[i]) << '\n';
    }
  });
  return kSuccess;
}

int cmd_sample(const Options& o, std::ostream& out) {
  const Family family = parse_family(o.family);
  if (o.n < 1) throw UsageError("--n must be at least 1");
  TwoPieceParams params = [&] {
    try {
      return TwoPieceParams(o.alpha, o.p, o.mu, o.sigma);
    } catch (const DomainError& e) {
      throw UsageError(e.what());
    }
  }();
  RngStream stream(o.seed);
  const auto x = sample_n(stream, family, params, static_cast<std::size_t>(o.n));
  emit(o, out, [&](std::ostream& s) {
    for (double v : x) s << format_double(v) << '\n';
  });
  return kSuccess;
}

int cmd_fit(const Options& o, std::ostream& out, std::ostream& err) {
  const ModelChoice choice = parse_model(o);
  Resolver r;
  const MwgConfig mcmc = resolve_mcmc(r, o, 20000, 5000);
  log_resolution(r, err);

  std::optional<ModelSpec> model;
  if (choice.kind == ModelKind::ar1) {
    SeriesData s = read_series_csv(o.data, o.header);
    std::vector<double> y = s.values;
    const Standardize t = standardize_from_string(o.transform);
    if (t != Standardize::none) y = standardize_first_differences(y);
    if (y.size() < 3) throw DataError(o.data + ": need at least three observations");
    model = ModelSpec::autoregressive(y, choice.errors);
  } else {
    DesignData d = read_design_csv(o.data, o.header);
    if (d.y.size() <= d.x.cols()) throw DataError(o.data + ": need more rows than coefficients");
    model = ModelSpec::regression(std::move(d.y), std::move(d.x), choice.errors, d.names);
  }

  RngStream stream(o.seed);
  Chain chain;
  if (choice.errors == ErrorDistribution::normal) {
    chain = run_mwg(*model, mcmc, stream);
  } else {
    const TailPrior prior = build_tail_prior(family_of(choice.errors), mcmc.p_max);
    chain = run_mwg(*model, prior, mcmc, stream);
  }
  const PosteriorSummary summary = summarize(chain);
  if (!o.output.empty()) {
    const fs::path dir(o.output);
    write_chain_csv(dir / "chain.csv", chain);
    write_metadata(dir / "chain.meta", chain_metadata(chain));
    auto s = open_output(dir / "summary.csv");
    write_summary_csv(s, summary);
  }
  write_summary_csv(out, summary);
  return kSuccess;
}

int cmd_forecast(const Options& o, std::ostream& out, std::ostream& err) {
  std::optional<ConfigFile> file;
  if (!o.config.empty()) file = ConfigFile::load(o.config);
  Resolver r(file ? &*file : nullptr);

  ForecastConfig fc;
  fc.window = static_cast<std::size_t>(r.get("window", flag(o, "window", o.window), 120));
  fc.standardize = standardize_from_string(r.get("transform", flag(o, "transform", o.transform), std::string("none")));
  fc.refit_every = r.get("refit_every", flag(o, "refit-every", o.refit_every), 1);
  fc.draw_thin = static_cast<std::size_t>(r.get("draw_thin", flag(o, "draw-thin", o.draw_thin), 1));
  fc.ols_draws = static_cast<std::size_t>(r.get("ols_draws", std::optional<int>{}, 15000));
  fc.seed = r.get("seed", flag(o, "seed", o.seed), std::uint64_t{1});
  fc.mcmc = resolve_mcmc(r, o, 20000, 5000);
  const bool header = r.get("header", flag(o, "header", o.header), false);
  std::vector<std::string> models = o.models;
  if (!o.has("models")) {
    if (file && file->values("models")) {
      models = *file->values("models");
    } else {
      models = {"ols-ar", "normal-ar", "sepd-ar"};
    }
  }
  err << "config: models =";
  for (const auto& m : models) err << ' ' << m;
  err << '\n';
  log_resolution(r, err);
  if (fc.window < 3) throw UsageError("--window must be at least 3");

  const SeriesData series = read_series_csv(o.data, header);
  std::vector<ModelRecords> all;
  for (const auto& name : models) {
    ForecastConfig c = fc;
    try {
      c.model = forecast_model_from_string(name);
    } catch (const ConfigError& e) {
      throw UsageError(std::string("--models: ") + e.what());
    }
    all.push_back({std::string(to_string(c.model)), rolling_forecast(series.values, c)});
  }
  const auto table = comparison_table(all);
  if (!o.output.empty()) {
    const fs::path dir(o.output);
    const bool dated = fc.standardize == Standardize::none && !series.dates.empty();
    for (const auto& m : all) {
      auto s = open_output(dir / ("forecast_" + m.model + ".csv"));
      write_forecast_csv(s, m.records, dated ? series.dates : std::vector<std::string>{});
    }
    auto s = open_output(dir / "comparison.csv");
    write_comparison_csv(s, table);
  }
  write_comparison_csv(out, table);
  return kSuccess;
}

int cmd_coverage(const Options& o, std::ostream& out, std::ostream& err) {
  std::optional<ConfigFile> file;
  if (!o.config.empty()) file = ConfigFile::load(o.config);
  Resolver r(file ? &*file : nullptr);

  const std::string model_name = r.get("model", flag(o, "model", o.model), std::string("ar-sepd"));
  Options mo = o;
  mo.model = model_name;
  if (!o.has("family") && file && file->values("family")) {
    mo.family = r.get("family", std::optional<std::string>{}, std::string());
    mo.given.insert("family");
  }
  const ModelChoice choice = parse_model(mo);
  if (choice.errors == ErrorDistribution::normal) throw UsageError("coverage-study needs sepd or sgld errors");
  const std::string profile = r.get("profile", flag(o, "profile", o.profile), std::string("desk"));
  if (profile != "desk" && profile != "full") throw UsageError("--profile: expected desk or full");
  CoverageConfig c = profile == "desk" ? CoverageConfig::desk(choice.kind) : CoverageConfig::full(choice.kind);
  c.family = family_of(choice.errors);

  std::vector<int> sizes_default;
  for (auto n : c.sizes) sizes_default.push_back(static_cast<int>(n));
  c.p_values = r.get("p_values", std::optional<std::vector<int>>{}, c.p_values);
  c.alphas = r.get("alphas", std::optional<std::vector<double>>{}, c.alphas);
  const auto sizes = r.get("sizes", std::optional<std::vector<int>>{}, sizes_default);
  c.sizes.clear();
  for (int n : sizes) {
    if (n < 3) throw ConfigError("coverage: sample sizes must be >= 3");
    c.sizes.push_back(static_cast<std::size_t>(n));
  }
  c.replicates = r.get("replicates", flag(o, "replicates", o.replicates), c.replicates);
  c.sigma = r.get("sigma", std::optional<double>{}, c.sigma);
  c.phi1 = r.get("phi1", std::optional<double>{}, c.phi1);
  c.beta0 = r.get("beta0", std::optional<double>{}, c.beta0);
  c.beta1 = r.get("beta1", std::optional<double>{}, c.beta1);
  c.seed = r.get("seed", flag(o, "seed", o.seed), std::uint64_t{1});
  c.threads = r.get("threads", flag(o, "threads", o.threads), 1);
  c.mcmc = resolve_mcmc(r, o, c.mcmc.n_iter, c.mcmc.n_burn);
  log_resolution(r, err);

  const auto cells = run_coverage_study(c);
  emit(o, out, [&](std::ostream& s) { write_coverage_csv(s, cells); });
  return kSuccess;
}

int cmd_demo(const Options& o, std::ostream& out, std::ostream& err) {
  DemoConfig c;
  if (o.model == "ar-sepd") {
    c = DemoConfig::ar_sepd();
  } else if (o.model == "reg-sgld") {
    c = DemoConfig::reg_sgld();
  } else {
    throw UsageError("--model: demo supports ar-sepd or reg-sgld, got '" + o.model + "'");
  }
  Resolver r;
  c.mcmc = resolve_mcmc(r, o, c.mcmc.n_iter, c.mcmc.n_burn);
  log_resolution(r, err);
  c.seed = o.seed;
  const DemoResult res = run_inference_demo(c);
  auto write_table = [&](std::ostream& s) {
    s << "parameter,truth,mean,median,lower_2.5,upper_97.5\n";
    for (std::size_t i = 0; i < res.names.size(); ++i) {
      const auto& p = res.summary.at(res.names[i]);
      s << p.name << ',' << format_double(res.truth[i]) << ',' << format_double(p.mean) << ','
        << format_double(p.median) << ',' << format_double(p.lower) << ',' << format_double(p.upper) << '\n';
    }
  };
  if (!o.output.empty()) {
    const fs::path dir(o.output);
    {
      auto s = open_output(dir / "summary.csv");
      write_table(s);
    }
    write_chain_csv(dir / "chain.csv", res.chain);
    write_metadata(dir / "chain.meta", chain_metadata(res.chain));
    auto h = open_output(dir / "histogram.csv");
    write_histograms(h, res.chain);
  }
  write_table(out);
  return kSuccess;
}

}  // namespace

CliCommand parse_args(const std::vector<std::string>& args) {
  CliCommand cmd;
  Options& o = cmd.options;
  CLI::App app{"Loss-based Bayesian inference for two-piece SEPD/SGLD models", "twopiece"};
  app.require_subcommand(1);
  std::vector<Registered> registered;

  auto add_seed = [&](CLI::App* sub) {
    registered.push_back({"seed", sub->add_option("--seed", o.seed, "Random seed")});
  };
  auto add_family = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--family", o.family, "Error family: sepd or sgld")
                    ->check(CLI::IsMember({"sepd", "sgld"}));
    if (required) opt->required();
    registered.push_back({"family", opt});
  };
  auto add_output = [&](CLI::App* sub, const std::string& help) {
    registered.push_back({"output", sub->add_option("-o,--output", o.output, help)});
  };
  auto add_mcmc = [&](CLI::App* sub) {
    registered.push_back({"n-iter", sub->add_option("--n-iter", o.n_iter, "MCMC iterations")});
    registered.push_back({"n-burn", sub->add_option("--n-burn", o.n_burn, "Burn-in iterations")});
    registered.push_back({"thin", sub->add_option("--thin", o.thin, "Keep every k-th draw")});
    registered.push_back({"p-max", sub->add_option("--p-max", o.p_max, "Largest tail parameter")});
  };

  auto* kl = app.add_subcommand("kl-table", "KL divergences to the neighbouring tail parameters");
  add_seed(kl);
  add_family(kl, true);
  registered.push_back({"p-max", kl->add_option("--p-max", o.p_max, "Rows p = 2..p-max (default: the 2..30, 60..180 layout)")});
  add_output(kl, "CSV output file (default stdout)");

  auto* prior = app.add_subcommand("prior-table", "Loss-based prior on the tail parameter");
  add_seed(prior);
  add_family(prior, true);
  registered.push_back({"p-max", prior->add_option("--p-max", o.p_max, "Support 1..p-max")});
  add_output(prior, "CSV output file (default stdout)");

  auto* sample = app.add_subcommand("sample", "Draw from SEPD/SGLD");
  add_seed(sample);
  add_family(sample, true);
  registered.push_back({"alpha", sample->add_option("--alpha", o.alpha, "Skewness in (0,1)")->required()});
  registered.push_back({"p", sample->add_option("--p", o.p, "Tail parameter")->required()});
  registered.push_back({"n", sample->add_option("--n", o.n, "Number of draws")->required()});
  registered.push_back({"mu", sample->add_option("--mu", o.mu, "Location")});
  registered.push_back({"sigma", sample->add_option("--sigma", o.sigma, "Scale")});
  add_output(sample, "CSV output file (default stdout)");

  auto* fit = app.add_subcommand("fit", "Posterior sampling for AR(1) or regression models");
  add_seed(fit);
  add_family(fit, false);
  registered.push_back({"model", fit->add_option("--model", o.model, "ar-sepd, ar-sgld, ar-normal, reg-sgld, reg-sepd, reg-normal")->required()});
  registered.push_back({"data", fit->add_option("--data", o.data, "Input CSV")->required()->check(CLI::ExistingFile)});
  registered.push_back({"header", fit->add_flag("--header", o.header, "First row is a header")});
  registered.push_back({"transform", fit->add_option("--transform", o.transform, "none or std-diff (AR only)")
                                         ->check(CLI::IsMember({"none", "std-diff"}))});
  add_mcmc(fit);
  add_output(fit, "Directory for chain.csv, chain.meta, summary.csv");

  auto* fc = app.add_subcommand("forecast", "Rolling one-step-ahead forecasts and scores");
  add_seed(fc);
  registered.push_back({"data", fc->add_option("--data", o.data, "Series CSV")->required()->check(CLI::ExistingFile)});
  registered.push_back({"header", fc->add_flag("--header", o.header, "First row is a header")});
  registered.push_back({"config", fc->add_option("--config", o.config, "YAML config")->check(CLI::ExistingFile)});
  registered.push_back({"window", fc->add_option("--window", o.window, "Estimation window R")});
  registered.push_back({"models", fc->add_option("--models", o.models, "ols-ar normal-ar sepd-ar (first is the baseline)")});
  registered.push_back({"transform", fc->add_option("--transform", o.transform, "none, std-diff or std-diff-full")
                                         ->check(CLI::IsMember({"none", "std-diff", "std-diff-full"}))});
  registered.push_back({"refit-every", fc->add_option("--refit-every", o.refit_every, "Refit the Bayesian models every k steps")});
  registered.push_back({"draw-thin", fc->add_option("--draw-thin", o.draw_thin, "Thin posterior draws for the predictive")});
  add_mcmc(fc);
  add_output(fc, "Directory for per-model forecast CSVs and comparison.csv");

  auto* cov = app.add_subcommand("coverage-study", "Frequentist coverage of the interval for p");
  add_seed(cov);
  add_family(cov, false);
  registered.push_back({"config", cov->add_option("--config", o.config, "YAML config")->check(CLI::ExistingFile)});
  registered.push_back({"model", cov->add_option("--model", o.model, "ar-sepd or reg-sgld")});
  registered.push_back({"profile", cov->add_option("--profile", o.profile, "desk or full")});
  registered.push_back({"replicates", cov->add_option("--replicates", o.replicates, "Replicates per cell")});
  registered.push_back({"threads", cov->add_option("--threads", o.threads, "Worker threads")});
  add_mcmc(cov);
  add_output(cov, "CSV output file (default stdout)");

  auto* demo = app.add_subcommand("demo", "Single simulated dataset, full posterior summary");
  add_seed(demo);
  registered.push_back({"model", demo->add_option("--model", o.model, "ar-sepd or reg-sgld")->required()});
  add_mcmc(demo);
  add_output(demo, "Directory for summary.csv, chain.csv, histogram.csv");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    cmd.subcommand = "help";
    o.output = app.help();
    return cmd;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  for (auto* sub : app.get_subcommands()) cmd.subcommand = sub->get_name();
  for (const auto& r : registered) {
    if (r.option->count() > 0) o.given.insert(r.name);
  }
  return cmd;
}

int execute(const CliCommand& command, std::ostream& out, std::ostream& err) {
  const Options& o = command.options;
  const std::string& s = command.subcommand;
  if (s == "help") {
    out << o.output;
    return kSuccess;
  }
  if (s == "kl-table") return cmd_kl_table(o, out);
  if (s == "prior-table") return cmd_prior_table(o, out);
  if (s == "sample") return cmd_sample(o, out);
  if (s == "fit") return cmd_fit(o, out, err);
  if (s == "forecast") return cmd_forecast(o, out, err);
  if (s == "coverage-study") return cmd_coverage(o, out, err);
  if (s == "demo") return cmd_demo(o, out, err);
  throw UsageError("unknown subcommand '" + s + "'");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return execute(parse_args(args), out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\nRun 'twopiece --help' for the list of subcommands.\n";
    return kUsage;
  } catch (const ConfigError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kData;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumerical;
  }
}

}  // namespace twopiece::cli
