#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace twopiece {

// Shortest decimal string that parses back to the same double ("inf", "-inf",
// "nan" for the non-finite values).
std::string format_double(double x);

// Whole-string parse; leading/trailing blanks allowed. nullopt on failure.
std::optional<double> parse_double(std::string_view text);
std::optional<long long> parse_integer(std::string_view text);

std::string_view trim(std::string_view text);

}  // namespace twopiece
