#pragma once

// Locale-independent number formatting shared by the file writers. Shortest
// round-trip form keeps emitted files both readable and lossless.

#include <charconv>
#include <string>
#include <string_view>

#include "beliefrev/error.hpp"

namespace beliefrev::detail {

inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text, const std::string& what) {
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw ConfigError("cannot parse number '" + std::string(text) + "' for " + what);
  return value;
}

inline long long parse_int(std::string_view text, const std::string& what) {
  long long value = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw ConfigError("cannot parse integer '" + std::string(text) + "' for " + what);
  return value;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

}  // namespace beliefrev::detail
