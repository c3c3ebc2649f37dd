// Copyright 2026 The nedenoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nedenoise {

/// Shortest round-trip decimal text, '.' separator, independent of locale.
std::string format_number(double v);

/// RFC-4180 table builder. An optional seed is emitted as a leading
/// "# seed=N" line.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header, std::optional<std::uint64_t> seed = std::nullopt);

  CsvTable& row(const std::vector<std::string>& cells);
  CsvTable& row(const std::vector<double>& cells);
  /// Trailing "# key=value" lines.
  CsvTable& footer(std::string_view key, std::string_view value);

  [[nodiscard]] std::string str() const;
  void save(const std::filesystem::path& path) const;

  [[nodiscard]] std::size_t columns() const noexcept { return header_.size(); }
  [[nodiscard]] std::size_t rows() const noexcept { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::optional<std::uint64_t> seed_;
  std::vector<std::vector<std::string>> rows_;
  std::vector<std::pair<std::string, std::string>> footer_;
};

/// Quotes a field if it contains a comma, quote, CR or LF.
std::string csv_escape(std::string_view field);

/// Parses RFC-4180 text into records. Lines starting with '#' outside
/// quoted fields are skipped.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

/// Reads and writes whole files.
std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace nedenoise
