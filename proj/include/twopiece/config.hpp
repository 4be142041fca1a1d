#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace twopiece {

// YAML configuration flattened to dotted keys ("mcmc.n_iter"). Scalars become
// one-element lists, flow or block sequences of scalars keep their order.
class ConfigFile {
 public:
  ConfigFile() = default;
  // Throws ConfigError on unreadable or malformed files.
  static ConfigFile load(const std::filesystem::path& path);
  static ConfigFile parse(std::string_view text);

  bool has(std::string_view key) const;
  const std::vector<std::string>* values(std::string_view key) const;
  std::vector<std::string> keys() const;

 private:
  std::map<std::string, std::vector<std::string>, std::less<>> entries_;
};

// Resolves each setting with the precedence command line > config file >
// built-in default and logs where every value came from.
class Resolver {
 public:
  explicit Resolver(const ConfigFile* file = nullptr) : file_(file) {}

  int get(std::string_view key, const std::optional<int>& cli, int fallback);
  double get(std::string_view key, const std::optional<double>& cli, double fallback);
  std::uint64_t get(std::string_view key, const std::optional<std::uint64_t>& cli, std::uint64_t fallback);
  std::string get(std::string_view key, const std::optional<std::string>& cli, const std::string& fallback);
  bool get(std::string_view key, const std::optional<bool>& cli, bool fallback);
  std::vector<int> get(std::string_view key, const std::optional<std::vector<int>>& cli,
                       const std::vector<int>& fallback);
  std::vector<double> get(std::string_view key, const std::optional<std::vector<double>>& cli,
                          const std::vector<double>& fallback);

  // "key = value (cli|config|default)", one line per resolution.
  const std::vector<std::string>& log() const noexcept { return log_; }
  // Keys present in the file that were never asked for.
  std::vector<std::string> unused_keys() const;

 private:
  template <class T>
  T resolve(std::string_view key, const std::optional<T>& cli, const T& fallback);

  const ConfigFile* file_;
  std::vector<std::string> log_;
  std::vector<std::string> used_;
};

}  // namespace twopiece
