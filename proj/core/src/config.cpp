// Copyright 2026 The nedenoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "nedenoise/config.hpp"

#include <charconv>
#include <cmath>

#include "nedenoise/instance.hpp"

namespace nedenoise {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

double parse_double(std::string_view text, std::string_view what) {
  const std::string_view t = trim(text);
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size() || !std::isfinite(v)) {
    throw Error("invalid number for " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return v;
}

std::uint64_t parse_uint(std::string_view text, std::string_view what) {
  const std::string_view t = trim(text);
  std::uint64_t v = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    throw Error("invalid non-negative integer for " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return v;
}

std::vector<double> parse_double_list(std::string_view text, std::string_view what) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::size_t end = comma == std::string_view::npos ? text.size() : comma;
    out.push_back(parse_double(text.substr(start, end - start), what));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

Config Config::parse(std::string_view text) {
  Config cfg;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = trim(text.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error("config line " + std::to_string(line_no) + ": expected key=value");
    }
    const std::string_view key = trim(line.substr(0, eq));
    if (key.empty()) throw Error("config line " + std::to_string(line_no) + ": empty key");
    if (cfg.contains(key)) throw Error("config line " + std::to_string(line_no) + ": duplicate key " + std::string(key));
    cfg.set(std::string(key), std::string(trim(line.substr(eq + 1))));
  }
  return cfg;
}

void Config::set(std::string key, std::string value) {
  if (key.find_first_of("=\n#") != std::string::npos || value.find('\n') != std::string::npos) {
    throw Error("config: invalid key or value for '" + key + "'");
  }
  entries_.insert_or_assign(std::move(key), std::move(value));
}

bool Config::contains(std::string_view key) const { return entries_.find(key) != entries_.end(); }

std::optional<std::string> Config::get(std::string_view key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::string Config::get_string(std::string_view key, std::string fallback) const {
  return get(key).value_or(std::move(fallback));
}

double Config::get_double(std::string_view key, double fallback) const {
  const auto v = get(key);
  return v ? parse_double(*v, key) : fallback;
}

std::uint64_t Config::get_uint(std::string_view key, std::uint64_t fallback) const {
  const auto v = get(key);
  return v ? parse_uint(*v, key) : fallback;
}

bool Config::get_bool(std::string_view key, bool fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1") return true;
  if (*v == "false" || *v == "0") return false;
  throw Error("invalid boolean for " + std::string(key) + ": '" + *v + "'");
}

std::string Config::str() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += k + "=" + v + "\n";
  return out;
}

}  // namespace nedenoise
