#pragma once

#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "twopiece/experiments.hpp"
#include "twopiece/mcmc.hpp"
#include "twopiece/scoring.hpp"
#include "twopiece/summary.hpp"

namespace twopiece {

// All readers throw DataError with the file name and 1-based line number of
// the offending row.

struct SeriesData {
  std::vector<double> values;
  std::vector<std::string> dates;  // empty unless the file has a leading date column
  std::string value_name;          // header cell, if any
};

// One value per row, optionally preceded by a date column; `header` skips the
// first row. Blank lines are ignored.
SeriesData read_series_csv(const std::filesystem::path& path, bool header = false);
SeriesData parse_series_csv(std::istream& in, bool header = false, const std::string& source = "<input>");

struct DesignData {
  Eigen::VectorXd y;
  Eigen::MatrixXd x;                 // column of ones, then the covariates
  std::vector<std::string> names;    // coefficient names, intercept first
};

// First column response, remaining columns covariates; the intercept column is
// prepended. A single-column file gives an intercept-only design.
DesignData read_design_csv(const std::filesystem::path& path, bool header = false);
DesignData parse_design_csv(std::istream& in, bool header = false, const std::string& source = "<input>");

// Chains: header of parameter names, one row per retained draw.
void write_chain_csv(std::ostream& out, const Chain& chain);
void write_chain_csv(const std::filesystem::path& path, const Chain& chain);
struct ChainTable {
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
};
ChainTable read_chain_csv(const std::filesystem::path& path);
ChainTable parse_chain_csv(std::istream& in, const std::string& source = "<input>");

// key=value sidecars.
using Metadata = std::vector<std::pair<std::string, std::string>>;
Metadata chain_metadata(const Chain& chain);
void write_metadata(const std::filesystem::path& path, const Metadata& entries);
std::map<std::string, std::string> read_metadata(const std::filesystem::path& path);

void write_summary_csv(std::ostream& out, const PosteriorSummary& summary);
void write_forecast_csv(std::ostream& out, const std::vector<ForecastRecord>& records,
                        const std::vector<std::string>& dates = {});
void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows);
void write_coverage_csv(std::ostream& out, const std::vector<CoverageCell>& cells);
void write_kl_csv(std::ostream& out, const std::vector<KlRow>& rows);

// Opens for writing, creating parent directories; throws DataError on failure.
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace twopiece
