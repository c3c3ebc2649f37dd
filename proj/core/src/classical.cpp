// Copyright 2026 The nedenoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "nedenoise/classical.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

namespace nedenoise {

namespace {

using Index = std::ptrdiff_t;

// Mirror-pads one channel plane by `pad` pixels on every side.
std::vector<double> reflect_pad(std::span<const double> plane, Index h, Index w, Index pad) {
  const Index hp = h + 2 * pad;
  const Index wp = w + 2 * pad;
  std::vector<double> out(static_cast<std::size_t>(hp * wp));
  for (Index y = 0; y < hp; ++y) {
    const Index sy = reflect_index(y - pad, h);
    for (Index x = 0; x < wp; ++x) {
      out[static_cast<std::size_t>(y * wp + x)] = plane[static_cast<std::size_t>(sy * w + reflect_index(x - pad, w))];
    }
  }
  return out;
}

double soft_threshold(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

}  // namespace

Stencil Stencil::delta(std::size_t size) {
  if (size % 2 == 0) {
    throw Error("stencil extents must be odd");
  }
  Stencil s{size, size, std::vector<double>(size * size, 0.0)};
  s.weights[(size / 2) * size + size / 2] = 1.0;
  return s;
}

Stencil Stencil::separable(const std::vector<double>& kernel) {
  const std::size_t n = kernel.size();
  Stencil s{n, n, std::vector<double>(n * n)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      s.weights[i * n + j] = kernel[i] * kernel[j];
    }
  }
  return s;
}

Stencil Stencil::row(const std::vector<double>& kernel) { return Stencil{1, kernel.size(), kernel}; }

double Stencil::sum() const { return std::accumulate(weights.begin(), weights.end(), 0.0); }

Conv2d::Conv2d(Stencil stencil) : stencil_(std::move(stencil)) {
  if (stencil_.rows % 2 == 0 || stencil_.cols % 2 == 0 || stencil_.weights.size() != stencil_.rows * stencil_.cols) {
    throw Error("stencil extents must be odd and match the weight count");
  }
  for (double w : stencil_.weights) {
    if (!std::isfinite(w)) {
      throw Error("stencil has non-finite weights");
    }
  }
}

Instance Conv2d::denoise(const Instance& z) const {
  const Shape& s = z.shape();
  const auto h = static_cast<Index>(s.height);
  const auto w = static_cast<Index>(s.width);
  const auto ry = static_cast<Index>(stencil_.rows / 2);
  const auto rx = static_cast<Index>(stencil_.cols / 2);
  std::vector<double> out(z.size());
  for (std::size_t c = 0; c < s.channels; ++c) {
    const auto plane = z.values().subspan(c * s.plane(), s.plane());
    for (Index y = 0; y < h; ++y) {
      for (Index x = 0; x < w; ++x) {
        double acc = 0.0;
        for (Index i = -ry; i <= ry; ++i) {
          const Index sy = reflect_index(y + i, h);
          for (Index j = -rx; j <= rx; ++j) {
            const double wt = stencil_.weights[static_cast<std::size_t>((i + ry) * static_cast<Index>(stencil_.cols) + j + rx)];
            acc += wt * plane[static_cast<std::size_t>(sy * w + reflect_index(x + j, w))];
          }
        }
        out[c * s.plane() + static_cast<std::size_t>(y * w + x)] = acc;
      }
    }
  }
  return Instance(s, std::move(out));
}

UnitSumConv::UnitSumConv(Stencil stencil) : Conv2d(std::move(stencil)) {
  if (std::abs(stencil_.sum() - 1.0) > 1e-12) {
    throw Error("kernel not affine-constrained");
  }
}

DctThreshold::DctThreshold(std::size_t block, double threshold) : block_(block), threshold_(threshold) {
  if (block_ < 2) {
    throw Error("dct_threshold: block size must be >= 2");
  }
  if (!(threshold_ >= 0.0)) {
    throw Error("dct_threshold: threshold must be >= 0");
  }
  const double n = static_cast<double>(block_);
  basis_.resize(block_ * block_);
  for (std::size_t k = 0; k < block_; ++k) {
    const double alpha = k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
    for (std::size_t i = 0; i < block_; ++i) {
      basis_[k * block_ + i] = alpha * std::cos(std::numbers::pi * (2.0 * static_cast<double>(i) + 1.0) *
                                                static_cast<double>(k) / (2.0 * n));
    }
  }
}

Instance DctThreshold::denoise(const Instance& z) const {
  const Shape& s = z.shape();
  if (s.height < block_ || s.width < block_) {
    throw Error("dct_threshold: image " + to_string(s) + " smaller than block " + std::to_string(block_));
  }
  const std::size_t n = block_;
  const std::size_t hp = (s.height + n - 1) / n * n;
  const std::size_t wp = (s.width + n - 1) / n * n;
  std::vector<double> out(z.size());
  std::vector<double> padded(hp * wp);
  std::vector<double> block(n * n);
  std::vector<double> tmp(n * n);

  // coeff = C X C^T, X = C^T coeff C
  auto forward = [&](std::vector<double>& b) {
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += basis_[k * n + i] * b[i * n + j];
        tmp[k * n + j] = acc;
      }
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t l = 0; l < n; ++l) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += tmp[k * n + j] * basis_[l * n + j];
        b[k * n + l] = acc;
      }
  };
  auto inverse = [&](std::vector<double>& b) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l) {
        double acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) acc += basis_[k * n + i] * b[k * n + l];
        tmp[i * n + l] = acc;
      }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double acc = 0.0;
        for (std::size_t l = 0; l < n; ++l) acc += tmp[i * n + l] * basis_[l * n + j];
        b[i * n + j] = acc;
      }
  };

  const auto h = static_cast<Index>(s.height);
  const auto w = static_cast<Index>(s.width);
  for (std::size_t c = 0; c < s.channels; ++c) {
    const auto plane = z.values().subspan(c * s.plane(), s.plane());
    for (std::size_t y = 0; y < hp; ++y) {
      const Index sy = reflect_index(static_cast<Index>(y), h);
      for (std::size_t x = 0; x < wp; ++x) {
        padded[y * wp + x] = plane[static_cast<std::size_t>(sy * w + reflect_index(static_cast<Index>(x), w))];
      }
    }
    for (std::size_t by = 0; by < hp; by += n) {
      for (std::size_t bx = 0; bx < wp; bx += n) {
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) block[i * n + j] = padded[(by + i) * wp + bx + j];
        forward(block);
        for (std::size_t k = 1; k < n * n; ++k) block[k] = soft_threshold(block[k], threshold_);
        inverse(block);
        for (std::size_t i = 0; i < n; ++i) {
          const std::size_t y = by + i;
          if (y >= s.height) break;
          for (std::size_t j = 0; j < n; ++j) {
            const std::size_t x = bx + j;
            if (x >= s.width) break;
            out[c * s.plane() + y * s.width + x] = block[i * n + j];
          }
        }
      }
    }
  }
  return Instance(s, std::move(out));
}

Nlm::Nlm(NlmParams params) : params_(params) {
  if (params_.search_radius < 1 || params_.patch_radius < 1) {
    throw Error("nlm: radii must be >= 1");
  }
  if (!(params_.bandwidth > 0.0)) {
    throw Error("nlm: bandwidth must be positive");
  }
}

BackboneInfo Nlm::info() const {
  if (params_.mode == NlmBandwidth::kRelativeToStd) {
    return {"nlm_relative", EquivarianceClass::kNormalization};
  }
  return {"nlm_absolute", EquivarianceClass::kNone};
}

Instance Nlm::denoise(const Instance& z) const {
  const InstanceStats st = stats(z);
  if (st.std == 0.0) {
    return z;
  }
  const double h = params_.mode == NlmBandwidth::kRelativeToStd ? params_.bandwidth * st.std : params_.bandwidth;
  const double inv_h2 = 1.0 / (h * h);

  const Shape& s = z.shape();
  const auto height = static_cast<Index>(s.height);
  const auto width = static_cast<Index>(s.width);
  const auto sr = static_cast<Index>(params_.search_radius);
  const auto pr = static_cast<Index>(params_.patch_radius);
  const Index pad = sr + pr;
  const Index wp = width + 2 * pad;
  const double patch_count = static_cast<double>((2 * pr + 1) * (2 * pr + 1));

  std::vector<double> out(z.size());
  for (std::size_t c = 0; c < s.channels; ++c) {
    const auto padded = reflect_pad(z.values().subspan(c * s.plane(), s.plane()), height, width, pad);
    auto at = [&](Index y, Index x) { return padded[static_cast<std::size_t>((y + pad) * wp + x + pad)]; };
    for (Index y = 0; y < height; ++y) {
      for (Index x = 0; x < width; ++x) {
        double wsum = 0.0;
        double acc = 0.0;
        for (Index dy = -sr; dy <= sr; ++dy) {
          for (Index dx = -sr; dx <= sr; ++dx) {
            double d2 = 0.0;
            for (Index py = -pr; py <= pr; ++py) {
              for (Index px = -pr; px <= pr; ++px) {
                const double e = at(y + py, x + px) - at(y + dy + py, x + dx + px);
                d2 += e * e;
              }
            }
            const double wt = std::exp(-(d2 / patch_count) * inv_h2);
            wsum += wt;
            acc += wt * at(y + dy, x + dx);
          }
        }
        out[c * s.plane() + static_cast<std::size_t>(y * width + x)] = acc / wsum;
      }
    }
  }
  return Instance(s, std::move(out));
}

}  // namespace nedenoise
