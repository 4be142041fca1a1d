#pragma once

#include <cmath>
#include <cstdlib>
#include <string>

namespace twopiece::testing {

// One unit in the last printed digit of a decimal literal such as "7.2093e-02"
// or "0.1251".
inline double last_digit_unit(const std::string& text) {
  const auto e = text.find_first_of("eE");
  const std::string mantissa = text.substr(0, e);
  const int exponent = e == std::string::npos ? 0 : std::atoi(text.c_str() + e + 1);
  const auto dot = mantissa.find('.');
  const int decimals = dot == std::string::npos ? 0 : static_cast<int>(mantissa.size() - dot - 1);
  return std::pow(10.0, exponent - decimals);
}

}  // namespace twopiece::testing
