#include "twopiece/csv.hpp"

#include <fstream>
#include <sstream>

#include "twopiece/errors.hpp"
#include "twopiece/format.hpp"

namespace twopiece {
namespace {

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string_view rest(line);
  while (true) {
    const auto comma = rest.find(',');
    std::string_view cell = trim(rest.substr(0, comma));
    if (cell.size() >= 2 && cell.front() == '"' && cell.back() == '"') cell = cell.substr(1, cell.size() - 2);
    cells.emplace_back(cell);
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return cells;
}

struct Row {
  std::size_t line = 0;
  std::vector<std::string> cells;
};

// Non-blank rows with their 1-based line numbers.
std::vector<Row> read_rows(std::istream& in) {
  std::vector<Row> rows;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    rows.push_back({number, split_row(line)});
  }
  return rows;
}

[[noreturn]] void fail(const std::string& source, std::size_t line, const std::string& what) {
  throw DataError(source + ": row " + std::to_string(line) + ": " + what);
}

double number_at(const Row& row, std::size_t col, const std::string& source) {
  const auto v = parse_double(row.cells[col]);
  if (!v) {
    fail(source, row.line, "column " + std::to_string(col + 1) + ": non-numeric value '" + row.cells[col] + "'");
  }
  return *v;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return in;
}

}  // namespace

SeriesData parse_series_csv(std::istream& in, bool header, const std::string& source) {
  auto rows = read_rows(in);
  SeriesData out;
  std::size_t start = 0;
  if (header) {
    if (rows.empty()) throw DataError(source + ": empty file");
    out.value_name = rows.front().cells.back();
    start = 1;
  }
  if (rows.size() <= start) throw DataError(source + ": no data rows");
  const std::size_t width = rows[start].cells.size();
  if (width < 1 || width > 2) {
    fail(source, rows[start].line, "expected a value or a date and a value, got " + std::to_string(width) + " cells");
  }
  for (std::size_t i = start; i < rows.size(); ++i) {
    const Row& row = rows[i];
    if (row.cells.size() != width) {
      fail(source, row.line, "expected " + std::to_string(width) + " cells, got " + std::to_string(row.cells.size()));
    }
    if (width == 2) out.dates.push_back(row.cells[0]);
    out.values.push_back(number_at(row, width - 1, source));
  }
  return out;
}

SeriesData read_series_csv(const std::filesystem::path& path, bool header) {
  auto in = open_input(path);
  return parse_series_csv(in, header, path.string());
}

DesignData parse_design_csv(std::istream& in, bool header, const std::string& source) {
  auto rows = read_rows(in);
  std::size_t start = 0;
  std::vector<std::string> header_cells;
  if (header) {
    if (rows.empty()) throw DataError(source + ": empty file");
    header_cells = rows.front().cells;
    start = 1;
  }
  if (rows.size() <= start) throw DataError(source + ": no data rows");
  const std::size_t width = rows[start].cells.size();
  if (header && header_cells.size() != width) {
    fail(source, rows.front().line, "header has " + std::to_string(header_cells.size()) + " cells, data has " +
                                        std::to_string(width));
  }
  const auto n = static_cast<Eigen::Index>(rows.size() - start);
  DesignData d;
  d.y.resize(n);
  d.x.resize(n, static_cast<Eigen::Index>(width));
  for (std::size_t i = start; i < rows.size(); ++i) {
    const Row& row = rows[i];
    if (row.cells.size() != width) {
      fail(source, row.line, "ragged row: expected " + std::to_string(width) + " cells, got " +
                                 std::to_string(row.cells.size()));
    }
    const auto r = static_cast<Eigen::Index>(i - start);
    d.y[r] = number_at(row, 0, source);
    d.x(r, 0) = 1.0;
    for (std::size_t c = 1; c < width; ++c) d.x(r, static_cast<Eigen::Index>(c)) = number_at(row, c, source);
  }
  d.names.push_back("beta0");
  for (std::size_t c = 1; c < width; ++c) {
    d.names.push_back(header && !header_cells[c].empty() ? header_cells[c] : "beta" + std::to_string(c));
  }
  return d;
}

DesignData read_design_csv(const std::filesystem::path& path, bool header) {
  auto in = open_input(path);
  return parse_design_csv(in, header, path.string());
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

void write_chain_csv(std::ostream& out, const Chain& chain) {
  for (std::size_t j = 0; j < chain.names.size(); ++j) out << (j ? "," : "") << chain.names[j];
  out << '\n';
  for (std::size_t i = 0; i < chain.size(); ++i) {
    for (std::size_t j = 0; j < chain.draws.size(); ++j) out << (j ? "," : "") << format_double(chain.draws[j][i]);
    out << '\n';
  }
}

void write_chain_csv(const std::filesystem::path& path, const Chain& chain) {
  auto out = open_output(path);
  write_chain_csv(out, chain);
}

ChainTable parse_chain_csv(std::istream& in, const std::string& source) {
  auto rows = read_rows(in);
  if (rows.empty()) throw DataError(source + ": empty file");
  ChainTable t;
  t.names = rows.front().cells;
  t.columns.resize(t.names.size());
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].cells.size() != t.names.size()) fail(source, rows[i].line, "ragged row");
    for (std::size_t j = 0; j < t.names.size(); ++j) t.columns[j].push_back(number_at(rows[i], j, source));
  }
  return t;
}

ChainTable read_chain_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_chain_csv(in, path.string());
}

Metadata chain_metadata(const Chain& chain) {
  const MwgConfig& c = chain.config;
  Metadata m{
      {"seed", std::to_string(chain.seed)},
      {"model", std::string(to_string(chain.model_kind))},
      {"errors", std::string(to_string(chain.errors))},
      {"n_iter", std::to_string(c.n_iter)},
      {"n_burn", std::to_string(c.n_burn)},
      {"thin", std::to_string(c.thin)},
      {"p_max", std::to_string(c.p_max)},
      {"coef_scale", format_double(c.coef_scale)},
      {"alpha_scale", format_double(c.alpha_scale)},
      {"sigma_scale", format_double(c.sigma_scale)},
      {"adapt", c.adapt ? "true" : "false"},
      {"draws", std::to_string(chain.size())},
      {"acceptance_coefficients", format_double(chain.acceptance.coefficients)},
      {"acceptance_sigma", format_double(chain.acceptance.sigma)},
  };
  if (chain.errors != ErrorDistribution::normal) {
    m.emplace_back("acceptance_alpha", format_double(chain.acceptance.alpha));
    m.emplace_back("acceptance_p", format_double(chain.acceptance.p));
  }
  return m;
}

void write_metadata(const std::filesystem::path& path, const Metadata& entries) {
  auto out = open_output(path);
  for (const auto& [k, v] : entries) out << k << '=' << v << '\n';
}

std::map<std::string, std::string> read_metadata(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::map<std::string, std::string> m;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) fail(path.string(), number, "expected key=value");
    m[std::string(trim(t.substr(0, eq)))] = std::string(trim(t.substr(eq + 1)));
  }
  return m;
}

void write_summary_csv(std::ostream& out, const PosteriorSummary& summary) {
  out << "parameter,mean,median,lower_2.5,upper_97.5\n";
  for (const auto& p : summary.parameters) {
    out << p.name << ',' << format_double(p.mean) << ',' << format_double(p.median) << ','
        << format_double(p.lower) << ',' << format_double(p.upper) << '\n';
  }
}

void write_forecast_csv(std::ostream& out, const std::vector<ForecastRecord>& records,
                        const std::vector<std::string>& dates) {
  out << "t," << (dates.empty() ? "" : "date,")
      << "point_forecast,realized,log_score,log_score_underflow,crps,draws\n";
  for (const auto& r : records) {
    out << r.t << ',';
    if (!dates.empty()) out << (r.t + 1 < dates.size() ? dates[r.t + 1] : "") << ',';
    out << format_double(r.point_forecast) << ',' << format_double(r.realized) << ','
        << format_double(r.log_score) << ',' << (r.log_score_underflow ? 1 : 0) << ',' << format_double(r.crps)
        << ',' << r.predictive_draws.size() << '\n';
  }
}

void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows) {
  out << "model,role,rmse,log_score,crps\n";
  for (const auto& r : rows) {
    out << r.model << ',' << (r.baseline ? "baseline" : "relative") << ',' << format_double(r.rmse) << ','
        << format_double(r.log_score) << ',' << format_double(r.crps) << '\n';
  }
}

void write_coverage_csv(std::ostream& out, const std::vector<CoverageCell>& cells) {
  out << "p,alpha,n,replicates,coverage,rel_rmse,mean_posterior_mean,mean_posterior_median\n";
  for (const auto& c : cells) {
    out << c.p << ',' << format_double(c.alpha) << ',' << c.n << ',' << c.replicates << ','
        << format_double(c.coverage) << ',' << format_double(c.rel_rmse) << ','
        << format_double(c.mean_posterior_mean) << ',' << format_double(c.mean_posterior_median) << '\n';
  }
}

void write_kl_csv(std::ostream& out, const std::vector<KlRow>& rows) {
  out << "p,kl_p_pminus1,kl_p_pplus1\n";
  for (const auto& r : rows) {
    out << r.p << ',' << format_double(r.to_lower) << ',' << format_double(r.to_upper) << '\n';
  }
}

}  // namespace twopiece
