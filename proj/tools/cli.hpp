#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace twopiece::cli {

enum ExitCode : int { kSuccess = 0, kUsage = 1, kData = 2, kNumerical = 3 };

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Flat option bag shared by every subcommand; `given` holds the long names of
// the flags that appeared on the command line.
struct Options {
  std::uint64_t seed = 1;
  std::string family;
  std::string model;
  std::string data;
  std::string config;
  std::string output;
  std::string transform = "none";
  std::string profile = "desk";
  std::vector<std::string> models;
  bool header = false;
  int p_max = 100;
  int p = 2;
  int n = 0;
  int n_iter = 0;
  int n_burn = 0;
  int thin = 1;
  int window = 0;
  int refit_every = 1;
  int draw_thin = 1;
  int replicates = 0;
  int threads = 1;
  double alpha = 0.5;
  double mu = 0.0;
  double sigma = 1.0;
  std::set<std::string> given;

  bool has(const std::string& name) const { return given.count(name) != 0; }
};

struct CliCommand {
  std::string subcommand;
  Options options;
};

// Throws UsageError naming the offending flag; `--help` yields a CliCommand
// with subcommand "help" and the help text in options.output.
CliCommand parse_args(const std::vector<std::string>& args);

// Runs a parsed command. Results go to files or `out`; diagnostics to `err`.
int execute(const CliCommand& command, std::ostream& out, std::ostream& err);

// parse_args + execute with the exception-to-exit-code mapping.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace twopiece::cli
