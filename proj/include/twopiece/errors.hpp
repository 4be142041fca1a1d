#pragma once

#include <stdexcept>
#include <string>

namespace twopiece {

// Invalid argument to a mathematical function or parameter constructor.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Malformed or inconsistent input data (CSV contents, design matrices).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numerical procedure failed to reach its accuracy contract.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inconsistent run configuration (MCMC settings, study grids, CLI flags).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace twopiece
