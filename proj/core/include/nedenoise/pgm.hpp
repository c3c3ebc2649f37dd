// Copyright 2026 The nedenoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>

#include "nedenoise/instance.hpp"

namespace nedenoise {

/// Malformed or truncated PGM data; `offset` is the byte where parsing failed.
class PgmError : public Error {
 public:
  PgmError(const std::string& what, std::size_t offset)
      : Error("pgm: " + what + " at byte " + std::to_string(offset)), offset_(offset) {}
  [[nodiscard]] std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Parses P2 (ASCII) or P5 (binary) graymaps with maxval <= 65535. Samples
/// map to value / maxval; 16-bit P5 samples are big-endian.
Instance decode_pgm(std::string_view bytes);
Instance read_pgm(const std::filesystem::path& path);

/// Quantizes to maxval 255 (clamp to [0, 1], round half away from zero).
std::string encode_pgm(const Instance& image, bool binary = true);
void write_pgm(const std::filesystem::path& path, const Instance& image, bool binary = true);

/// The 8-bit code written for a value.
unsigned quantize_8bit(double v);

}  // namespace nedenoise
