#include "twopiece/config.hpp"

#include <algorithm>
#include <limits>
#include <type_traits>
#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "twopiece/errors.hpp"
#include "twopiece/format.hpp"

namespace twopiece {
namespace {

void flatten(const YAML::Node& node, const std::string& prefix,
             std::map<std::string, std::vector<std::string>, std::less<>>& out) {
  if (node.IsMap()) {
    for (const auto& kv : node) {
      const auto key = kv.first.as<std::string>();
      flatten(kv.second, prefix.empty() ? key : prefix + "." + key, out);
    }
  } else if (node.IsSequence()) {
    std::vector<std::string> items;
    for (const auto& item : node) {
      if (!item.IsScalar()) throw ConfigError("config: '" + prefix + "' must be a list of scalars");
      items.push_back(item.as<std::string>());
    }
    out[prefix] = std::move(items);
  } else if (node.IsScalar()) {
    out[prefix] = {node.as<std::string>()};
  } else if (node.IsNull() && !prefix.empty()) {
    out[prefix] = {};
  }
}

template <class T>
T parse_as(std::string_view key, const std::string& text);

template <>
int parse_as<int>(std::string_view key, const std::string& text) {
  const auto v = parse_integer(text);
  if (!v || *v < std::numeric_limits<int>::min() || *v > std::numeric_limits<int>::max()) {
    throw ConfigError("config: '" + std::string(key) + "' expects an integer, got '" + text + "'");
  }
  return static_cast<int>(*v);
}

template <>
std::uint64_t parse_as<std::uint64_t>(std::string_view key, const std::string& text) {
  const auto v = parse_integer(text);
  if (!v || *v < 0) {
    throw ConfigError("config: '" + std::string(key) + "' expects a non-negative integer, got '" + text + "'");
  }
  return static_cast<std::uint64_t>(*v);
}

template <>
double parse_as<double>(std::string_view key, const std::string& text) {
  const auto v = parse_double(text);
  if (!v) throw ConfigError("config: '" + std::string(key) + "' expects a number, got '" + text + "'");
  return *v;
}

template <>
std::string parse_as<std::string>(std::string_view, const std::string& text) {
  return text;
}

template <>
bool parse_as<bool>(std::string_view key, const std::string& text) {
  if (text == "true" || text == "yes" || text == "on" || text == "1") return true;
  if (text == "false" || text == "no" || text == "off" || text == "0") return false;
  throw ConfigError("config: '" + std::string(key) + "' expects true/false, got '" + text + "'");
}

template <class T>
struct Parser {
  static T from(std::string_view key, const std::vector<std::string>& v) {
    if (v.size() != 1) throw ConfigError("config: '" + std::string(key) + "' expects a single value");
    return parse_as<T>(key, v.front());
  }
  static std::string show(const T& x) {
    if constexpr (std::is_same_v<T, std::string>) {
      return x;
    } else if constexpr (std::is_same_v<T, bool>) {
      return x ? "true" : "false";
    } else if constexpr (std::is_same_v<T, double>) {
      return format_double(x);
    } else {
      return std::to_string(x);
    }
  }
};

template <class E>
struct Parser<std::vector<E>> {
  static std::vector<E> from(std::string_view key, const std::vector<std::string>& v) {
    std::vector<E> out;
    for (const auto& s : v) out.push_back(parse_as<E>(key, s));
    return out;
  }
  static std::string show(const std::vector<E>& x) {
    std::string s = "[";
    for (std::size_t i = 0; i < x.size(); ++i) s += (i ? ", " : "") + Parser<E>::show(x[i]);
    return s + "]";
  }
};

}  // namespace

ConfigFile ConfigFile::parse(std::string_view text) {
  ConfigFile f;
  try {
    const YAML::Node root = YAML::Load(std::string(text));
    if (!root.IsNull() && !root.IsMap()) throw ConfigError("config: top level must be a mapping");
    flatten(root, "", f.entries_);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return f;
}

ConfigFile ConfigFile::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

bool ConfigFile::has(std::string_view key) const { return entries_.find(key) != entries_.end(); }

const std::vector<std::string>* ConfigFile::values(std::string_view key) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

std::vector<std::string> ConfigFile::keys() const {
  std::vector<std::string> k;
  for (const auto& [key, _] : entries_) k.push_back(key);
  return k;
}

template <class T>
T Resolver::resolve(std::string_view key, const std::optional<T>& cli, const T& fallback) {
  used_.emplace_back(key);
  T value = fallback;
  std::string source = "default";
  if (cli) {
    value = *cli;
    source = "cli";
  } else if (file_ != nullptr) {
    if (const auto* v = file_->values(key)) {
      value = Parser<T>::from(key, *v);
      source = "config";
    }
  }
  log_.push_back(std::string(key) + " = " + Parser<T>::show(value) + " (" + source + ")");
  return value;
}

int Resolver::get(std::string_view key, const std::optional<int>& cli, int fallback) {
  return resolve(key, cli, fallback);
}
double Resolver::get(std::string_view key, const std::optional<double>& cli, double fallback) {
  return resolve(key, cli, fallback);
}
std::uint64_t Resolver::get(std::string_view key, const std::optional<std::uint64_t>& cli, std::uint64_t fallback) {
  return resolve(key, cli, fallback);
}
std::string Resolver::get(std::string_view key, const std::optional<std::string>& cli, const std::string& fallback) {
  return resolve(key, cli, fallback);
}
bool Resolver::get(std::string_view key, const std::optional<bool>& cli, bool fallback) {
  return resolve(key, cli, fallback);
}
std::vector<int> Resolver::get(std::string_view key, const std::optional<std::vector<int>>& cli,
                               const std::vector<int>& fallback) {
  return resolve(key, cli, fallback);
}
std::vector<double> Resolver::get(std::string_view key, const std::optional<std::vector<double>>& cli,
                                  const std::vector<double>& fallback) {
  return resolve(key, cli, fallback);
}

std::vector<std::string> Resolver::unused_keys() const {
  std::vector<std::string> out;
  if (file_ == nullptr) return out;
  for (const auto& k : file_->keys()) {
    if (std::find(used_.begin(), used_.end(), k) == used_.end()) out.push_back(k);
  }
  return out;
}

}  // namespace twopiece
