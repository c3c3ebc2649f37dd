// Copyright 2026 The nedenoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nedenoise {

/// Flat key=value configuration. '#' starts a comment line; blank lines
/// are ignored; keys are unique and kept in sorted order.
class Config {
 public:
  static Config parse(std::string_view text);

  void set(std::string key, std::string value);
  [[nodiscard]] bool contains(std::string_view key) const;
  [[nodiscard]] std::optional<std::string> get(std::string_view key) const;

  [[nodiscard]] std::string get_string(std::string_view key, std::string fallback) const;
  [[nodiscard]] double get_double(std::string_view key, double fallback) const;
  [[nodiscard]] std::uint64_t get_uint(std::string_view key, std::uint64_t fallback) const;
  [[nodiscard]] bool get_bool(std::string_view key, bool fallback) const;

  [[nodiscard]] std::string str() const;
  [[nodiscard]] const std::map<std::string, std::string, std::less<>>& entries() const noexcept { return entries_; }

  friend bool operator==(const Config&, const Config&) = default;

 private:
  std::map<std::string, std::string, std::less<>> entries_;
};

/// Strict numeric parsing of a whole string (no locale, no trailing text).
double parse_double(std::string_view text, std::string_view what);
std::uint64_t parse_uint(std::string_view text, std::string_view what);
/// Comma-separated list of numbers.
std::vector<double> parse_double_list(std::string_view text, std::string_view what);

}  // namespace nedenoise
