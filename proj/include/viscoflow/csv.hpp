#pragma once

#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace viscoflow {

/// Shortest decimal string that parses back to the same double.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  if (res.ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, res.ptr);
}

/// Parses a whole token as a double; rejects trailing characters.
inline bool parse_double(std::string_view s, double& out) {
  if (s == "nan") {
    out = std::nan("");
    return true;
  }
  if (s == "inf" || s == "-inf") {
    out = s[0] == '-' ? -HUGE_VAL : HUGE_VAL;
    return true;
  }
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc{} && res.ptr == s.data() + s.size() && !s.empty();
}

class CsvWriter {
 public:
  CsvWriter(std::ostream& os, const std::vector<std::string>& header) : os_(os), columns_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) os_ << (i ? "," : "") << header[i];
    os_ << '\n';
  }

  void row(const std::vector<double>& values) {
    if (values.size() != columns_) throw std::invalid_argument("CsvWriter: row width does not match header");
    for (std::size_t i = 0; i < values.size(); ++i) os_ << (i ? "," : "") << format_double(values[i]);
    os_ << '\n';
  }

 private:
  std::ostream& os_;
  std::size_t columns_;
};

}  // namespace viscoflow
