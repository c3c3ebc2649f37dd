// Copyright 2026 The nedenoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "nedenoise/patch_models.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>

namespace nedenoise {

namespace {

using Index = std::ptrdiff_t;

// Visits every P x P tile of every channel. `fn(tile, in_range, offsets)`
// receives the gathered tile values, whether each tile slot lies inside the
// image, and the flat instance offset of each slot (reflected when outside).
template <typename Fn>
void for_each_tile(const Instance& z, std::size_t p, Fn&& fn) {
  const Shape& s = z.shape();
  const auto h = static_cast<Index>(s.height);
  const auto w = static_cast<Index>(s.width);
  std::vector<double> tile(p * p);
  std::vector<std::size_t> offsets(p * p);
  std::vector<char> inside(p * p);
  for (std::size_t c = 0; c < s.channels; ++c) {
    const std::size_t base = c * s.plane();
    for (std::size_t ty = 0; ty < s.height; ty += p) {
      for (std::size_t tx = 0; tx < s.width; tx += p) {
        for (std::size_t i = 0; i < p; ++i) {
          const auto y = static_cast<Index>(ty + i);
          const Index sy = reflect_index(y, h);
          for (std::size_t j = 0; j < p; ++j) {
            const auto x = static_cast<Index>(tx + j);
            const std::size_t k = i * p + j;
            offsets[k] = base + static_cast<std::size_t>(sy * w + reflect_index(x, w));
            inside[k] = static_cast<char>(y < h && x < w);
            tile[k] = z[offsets[k]];
          }
        }
        fn(std::span<const double>(tile), std::span<const char>(inside), std::span<const std::size_t>(offsets));
      }
    }
  }
}

void append_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void append_f64(std::vector<std::uint8_t>& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
}

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }

  double f64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += 8;
    return std::bit_cast<double>(v);
  }

  [[nodiscard]] std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > bytes_.size()) {
      throw Error("checkpoint truncated at byte " + std::to_string(pos_));
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

PatchMlpParams PatchMlpParams::zeros(std::size_t patch_size, std::size_t hidden, PredictionConvention convention) {
  PatchMlpParams p{patch_size, hidden, convention, {}};
  p.values.assign(p.count(), 0.0);
  return p;
}

PatchMlpParams PatchMlpParams::random(std::size_t patch_size, std::size_t hidden, PredictionConvention convention,
                                      Rng& rng) {
  PatchMlpParams p = zeros(patch_size, hidden, convention);
  const double s1 = std::sqrt(2.0 / static_cast<double>(p.tile()));
  const double s2 = 0.1 / std::sqrt(static_cast<double>(hidden));
  const std::size_t n1 = hidden * p.tile();
  for (std::size_t i = 0; i < n1; ++i) p.values[i] = s1 * rng.normal();
  const std::size_t w2 = n1 + hidden;
  for (std::size_t i = 0; i < p.tile() * hidden; ++i) p.values[w2 + i] = s2 * rng.normal();
  return p;
}

void PatchMlpParams::validate() const {
  if (patch_size == 0 || hidden == 0) {
    throw Error("patch_mlp: patch size and hidden width must be positive");
  }
  if (values.size() != count()) {
    throw Error("patch_mlp: expected " + std::to_string(count()) + " parameters, got " + std::to_string(values.size()));
  }
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw Error("patch_mlp: non-finite parameters");
    }
  }
}

PatchMlp::PatchMlp(PatchMlpParams params) : params_(std::move(params)) { params_.validate(); }

Instance PatchMlp::denoise(const Instance& z) const {
  const std::size_t p = params_.patch_size;
  const std::size_t n = params_.tile();
  const std::size_t hd = params_.hidden;
  const auto w1 = params_.w1();
  const auto b1 = params_.b1();
  const auto w2 = params_.w2();
  const auto b2 = params_.b2();
  const bool residual = params_.convention == PredictionConvention::kResidual;

  std::vector<double> out(z.size());
  std::vector<double> act(hd);
  for_each_tile(z, p, [&](std::span<const double> tile, std::span<const char> inside,
                          std::span<const std::size_t> offsets) {
    for (std::size_t u = 0; u < hd; ++u) {
      double a = b1[u];
      for (std::size_t k = 0; k < n; ++k) a += w1[u * n + k] * tile[k];
      act[u] = a > 0.0 ? a : 0.0;
    }
    for (std::size_t k = 0; k < n; ++k) {
      if (!inside[k]) continue;
      double o = b2[k];
      for (std::size_t u = 0; u < hd; ++u) o += w2[k * hd + u] * act[u];
      out[offsets[k]] = residual ? o + tile[k] : o;
    }
  });
  return Instance(z.shape(), std::move(out));
}

void PatchMlp::backward(const Instance& input, std::span<const double> dout, std::span<double> grad) const {
  if (dout.size() != input.size() || grad.size() != params_.count()) {
    throw Error("patch_mlp backward: size mismatch");
  }
  const std::size_t p = params_.patch_size;
  const std::size_t n = params_.tile();
  const std::size_t hd = params_.hidden;
  const auto w1 = params_.w1();
  const auto b1 = params_.b1();
  const auto w2 = params_.w2();
  double* gw1 = grad.data();
  double* gb1 = gw1 + hd * n;
  double* gw2 = gb1 + hd;
  double* gb2 = gw2 + n * hd;

  std::vector<double> pre(hd);
  std::vector<double> act(hd);
  std::vector<double> go(n);
  std::vector<double> ga(hd);
  for_each_tile(input, p, [&](std::span<const double> tile, std::span<const char> inside,
                              std::span<const std::size_t> offsets) {
    bool any = false;
    for (std::size_t k = 0; k < n; ++k) {
      go[k] = inside[k] ? dout[offsets[k]] : 0.0;
      any = any || go[k] != 0.0;
    }
    if (!any) return;
    for (std::size_t u = 0; u < hd; ++u) {
      double a = b1[u];
      for (std::size_t k = 0; k < n; ++k) a += w1[u * n + k] * tile[k];
      pre[u] = a;
      act[u] = a > 0.0 ? a : 0.0;
    }
    for (std::size_t u = 0; u < hd; ++u) ga[u] = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double g = go[k];
      if (g == 0.0) continue;
      gb2[k] += g;
      for (std::size_t u = 0; u < hd; ++u) {
        gw2[k * hd + u] += g * act[u];
        ga[u] += w2[k * hd + u] * g;
      }
    }
    for (std::size_t u = 0; u < hd; ++u) {
      if (pre[u] <= 0.0) continue;
      const double g = ga[u];
      gb1[u] += g;
      for (std::size_t k = 0; k < n; ++k) gw1[u * n + k] += g * tile[k];
    }
  });
}

BackbonePtr PatchMlp::freeze() const { return std::make_shared<PatchMlp>(params_); }

PatchLinear::PatchLinear(std::size_t patch_size, std::vector<double> values)
    : patch_size_(patch_size), values_(std::move(values)) {
  const std::size_t n = patch_size_ * patch_size_;
  if (patch_size_ == 0 || values_.size() != n * n + n) {
    throw Error("patch_linear: parameter count mismatch");
  }
}

PatchLinear PatchLinear::zeros(std::size_t patch_size) {
  const std::size_t n = patch_size * patch_size;
  return PatchLinear(patch_size, std::vector<double>(n * n + n, 0.0));
}

Instance PatchLinear::denoise(const Instance& z) const {
  const std::size_t n = patch_size_ * patch_size_;
  std::vector<double> out(z.size());
  for_each_tile(z, patch_size_, [&](std::span<const double> tile, std::span<const char> inside,
                                    std::span<const std::size_t> offsets) {
    for (std::size_t k = 0; k < n; ++k) {
      if (!inside[k]) continue;
      double o = values_[n * n + k];
      for (std::size_t j = 0; j < n; ++j) o += values_[k * n + j] * tile[j];
      out[offsets[k]] = o;
    }
  });
  return Instance(z.shape(), std::move(out));
}

void PatchLinear::backward(const Instance& input, std::span<const double> dout, std::span<double> grad) const {
  const std::size_t n = patch_size_ * patch_size_;
  if (dout.size() != input.size() || grad.size() != values_.size()) {
    throw Error("patch_linear backward: size mismatch");
  }
  for_each_tile(input, patch_size_, [&](std::span<const double> tile, std::span<const char> inside,
                                        std::span<const std::size_t> offsets) {
    for (std::size_t k = 0; k < n; ++k) {
      if (!inside[k]) continue;
      const double g = dout[offsets[k]];
      grad[n * n + k] += g;
      for (std::size_t j = 0; j < n; ++j) grad[k * n + j] += g * tile[j];
    }
  });
}

BackbonePtr PatchLinear::freeze() const { return std::make_shared<PatchLinear>(patch_size_, values_); }

std::vector<std::uint8_t> encode_checkpoint(const PatchMlpParams& params) {
  params.validate();
  std::vector<std::uint8_t> out;
  out.reserve(20 + 8 * params.values.size());
  append_u32(out, kCheckpointMagic);
  append_u32(out, kCheckpointVersion);
  append_u32(out, static_cast<std::uint32_t>(params.patch_size));
  append_u32(out, static_cast<std::uint32_t>(params.hidden));
  append_u32(out, static_cast<std::uint32_t>(params.convention));
  for (double v : params.values) append_f64(out, v);
  return out;
}

PatchMlpParams decode_checkpoint(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  if (r.u32() != kCheckpointMagic) {
    throw Error("checkpoint: bad magic");
  }
  const std::uint32_t version = r.u32();
  if (version != kCheckpointVersion) {
    throw Error("checkpoint: unsupported version " + std::to_string(version));
  }
  PatchMlpParams p;
  p.patch_size = r.u32();
  p.hidden = r.u32();
  const std::uint32_t convention = r.u32();
  if (convention > 1) {
    throw Error("checkpoint: unknown prediction convention " + std::to_string(convention));
  }
  p.convention = static_cast<PredictionConvention>(convention);
  if (r.remaining() != 8 * p.count()) {
    throw Error("checkpoint: payload size does not match header");
  }
  p.values.resize(p.count());
  for (double& v : p.values) v = r.f64();
  p.validate();
  return p;
}

void save_checkpoint(const PatchMlpParams& params, const std::filesystem::path& path) {
  const auto bytes = encode_checkpoint(params);
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    throw Error("cannot write " + path.string());
  }
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

PatchMlpParams load_checkpoint(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    throw Error("cannot read " + path.string());
  }
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return decode_checkpoint(bytes);
}

}  // namespace nedenoise
