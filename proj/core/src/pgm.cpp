// Copyright 2026 The nedenoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "nedenoise/pgm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

namespace nedenoise {

namespace {

class Cursor {
 public:
  explicit Cursor(std::string_view b) : b_(b) {}

  [[nodiscard]] std::size_t pos() const { return pos_; }
  [[nodiscard]] bool done() const { return pos_ >= b_.size(); }

  void skip_space_and_comments() {
    while (!done()) {
      const char c = b_[pos_];
      if (c == '#') {
        while (!done() && b_[pos_] != '\n' && b_[pos_] != '\r') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        return;
      }
    }
  }

  unsigned long number(const char* what) {
    skip_space_and_comments();
    const std::size_t start = pos_;
    unsigned long v = 0;
    while (!done() && std::isdigit(static_cast<unsigned char>(b_[pos_]))) {
      v = v * 10 + static_cast<unsigned long>(b_[pos_] - '0');
      if (v > 0xFFFFFFFFUL) throw PgmError(std::string(what) + " too large", start);
      ++pos_;
    }
    if (pos_ == start) {
      throw PgmError(done() ? std::string("truncated ") + what : std::string("expected ") + what, start);
    }
    return v;
  }

  unsigned char byte() { return static_cast<unsigned char>(b_[pos_++]); }
  void advance() { ++pos_; }
  [[nodiscard]] std::size_t remaining() const { return b_.size() - pos_; }
  [[nodiscard]] char peek() const { return b_[pos_]; }

 private:
  std::string_view b_;
  std::size_t pos_ = 0;
};

}  // namespace

Instance decode_pgm(std::string_view bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5')) {
    throw PgmError("expected magic P2 or P5", 0);
  }
  const bool binary = bytes[1] == '5';
  Cursor cur(bytes.substr(0));
  cur.advance();
  cur.advance();
  cur.skip_space_and_comments();
  const std::size_t w_pos = cur.pos();
  const unsigned long width = cur.number("width");
  const unsigned long height = cur.number("height");
  if (width == 0 || height == 0) throw PgmError("zero image extent", w_pos);
  cur.skip_space_and_comments();
  const std::size_t m_pos = cur.pos();
  const unsigned long maxval = cur.number("maxval");
  if (maxval == 0 || maxval > 65535) throw PgmError("maxval outside [1, 65535]", m_pos);
  const std::size_t count = static_cast<std::size_t>(width) * height;
  std::vector<double> values(count);
  const double scale = static_cast<double>(maxval);
  if (binary) {
    if (cur.done() || !std::isspace(static_cast<unsigned char>(cur.peek()))) {
      throw PgmError("missing whitespace after maxval", cur.pos());
    }
    cur.advance();
    const std::size_t bps = maxval > 255 ? 2 : 1;
    if (cur.remaining() < count * bps) {
      throw PgmError("truncated payload", cur.pos() + cur.remaining());
    }
    for (std::size_t i = 0; i < count; ++i) {
      unsigned long s = cur.byte();
      if (bps == 2) s = (s << 8) | cur.byte();
      if (s > maxval) throw PgmError("sample exceeds maxval", cur.pos() - bps);
      values[i] = static_cast<double>(s) / scale;
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      cur.skip_space_and_comments();
      const std::size_t at = cur.pos();
      const unsigned long s = cur.number("sample");
      if (s > maxval) throw PgmError("sample exceeds maxval", at);
      values[i] = static_cast<double>(s) / scale;
    }
  }
  return Instance(Shape{1, static_cast<std::size_t>(height), static_cast<std::size_t>(width)}, std::move(values));
}

Instance read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_pgm(bytes);
}

unsigned quantize_8bit(double v) {
  const double c = std::clamp(v, 0.0, 1.0);
  return static_cast<unsigned>(std::round(c * 255.0));  // std::round rounds halves away from zero
}

std::string encode_pgm(const Instance& image, bool binary) {
  const Shape& s = image.shape();
  if (s.channels != 1) throw Error("pgm: grayscale instances only");
  std::ostringstream out;
  out << (binary ? "P5" : "P2") << '\n' << s.width << ' ' << s.height << "\n255\n";
  std::string header = out.str();
  if (binary) {
    header.reserve(header.size() + image.size());
    for (double v : image.values()) header.push_back(static_cast<char>(quantize_8bit(v)));
    return header;
  }
  std::ostringstream body;
  for (std::size_t y = 0; y < s.height; ++y) {
    for (std::size_t x = 0; x < s.width; ++x) {
      body << (x ? " " : "") << quantize_8bit(image.at(0, y, x));
    }
    body << '\n';
  }
  return header + body.str();
}

void write_pgm(const std::filesystem::path& path, const Instance& image, bool binary) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  const std::string bytes = encode_pgm(image, binary);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace nedenoise
