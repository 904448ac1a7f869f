#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace photocorr::text {

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

/// Strict full-string parse; throws ConfigError naming `what` on failure.
double parse_double(std::string_view s, std::string_view what);
long long parse_integer(std::string_view s, std::string_view what);

std::string_view trim(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char delimiter);

}  // namespace photocorr::text
