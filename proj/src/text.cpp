#include "photocorr/text.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

#include "photocorr/errors.hpp"

namespace photocorr::text {

std::string format_double(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) return std::to_string(value);
  return std::string(buf, end);
}

double parse_double(std::string_view s, std::string_view what) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc{} || end != s.data() + s.size() || !std::isfinite(value)) {
    throw ConfigError("invalid number for " + std::string(what) + ": '" + std::string(s) + "'");
  }
  return value;
}

long long parse_integer(std::string_view s, std::string_view what) {
  s = trim(s);
  long long value = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc{} || end != s.data() + s.size()) {
    // Accept integral values written in floating-point form, e.g. 1e6.
    double d = 0.0;
    const auto [dend, dec] = std::from_chars(s.data(), s.data() + s.size(), d);
    if (!s.empty() && dec == std::errc{} && dend == s.data() + s.size() && std::isfinite(d) &&
        d == std::floor(d) && std::fabs(d) < 9.0e18) {
      return static_cast<long long>(d);
    }
    throw ConfigError("invalid integer for " + std::string(what) + ": '" + std::string(s) + "'");
  }
  return value;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char delimiter) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(delimiter, start);
    if (pos == std::string_view::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace photocorr::text
