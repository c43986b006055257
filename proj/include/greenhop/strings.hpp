#pragma once

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <string_view>
#include <vector>

#include "greenhop/errors.hpp"

namespace greenhop {

/// Shortest decimal form that round-trips an IEEE-754 double bit-exactly.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// Nine significant digits: round-trips any float32 value exactly.
inline std::string format_float(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

inline std::string_view trim(std::string_view s) {
  const char* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      return out;
    }
    out.emplace_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

/// Strict full-token numeric parses. Anything trailing is an error.
inline double parse_double_strict(std::string_view token, const std::string& what) {
  const std::string s(trim(token));
  if (s.empty()) throw ConfigError(what + ": empty numeric value");
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE)
    throw ConfigError(what + ": cannot parse '" + s + "' as a real number");
  return v;
}

inline long long parse_int_strict(std::string_view token, const std::string& what) {
  const std::string s(trim(token));
  if (s.empty()) throw ConfigError(what + ": empty integer value");
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size() || errno == ERANGE)
    throw ConfigError(what + ": cannot parse '" + s + "' as an integer");
  return v;
}

inline unsigned long long parse_uint_strict(std::string_view token, const std::string& what) {
  const std::string s(trim(token));
  if (s.empty() || s[0] == '-') throw ConfigError(what + ": expected a nonnegative integer");
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size() || errno == ERANGE)
    throw ConfigError(what + ": cannot parse '" + s + "' as an integer");
  return v;
}

inline bool parse_bool_strict(std::string_view token, const std::string& what) {
  const std::string s(trim(token));
  if (s == "1" || s == "true") return true;
  if (s == "0" || s == "false") return false;
  throw ConfigError(what + ": expected one of 0/1/true/false, got '" + s + "'");
}

}  // namespace greenhop
