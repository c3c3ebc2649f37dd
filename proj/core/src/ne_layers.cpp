// Copyright 2026 The nedenoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "nedenoise/ne_layers.hpp"

#include <algorithm>
#include <cmath>

namespace nedenoise {

using Index = std::ptrdiff_t;

double AffineConvKernel::output_sum(std::size_t out) const {
  const std::size_t n = per_output();
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    acc += weights[out * n + k];
  }
  return acc;
}

AffineConvKernel AffineConvKernel::random(std::size_t out_channels, std::size_t in_channels, std::size_t size,
                                          Rng& rng) {
  AffineConvKernel k{out_channels, in_channels, size, {}, false};
  k.weights.resize(out_channels * k.per_output());
  const double scale = 1.0 / std::sqrt(static_cast<double>(k.per_output()));
  for (double& w : k.weights) {
    w = scale * rng.normal();
  }
  return k;
}

AffineConvKernel affine_constrain(const AffineConvKernel& kernel) {
  AffineConvKernel out = kernel;
  const std::size_t n = kernel.per_output();
  for (std::size_t o = 0; o < kernel.out_channels; ++o) {
    const double shift = (kernel.output_sum(o) - 1.0) / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
      out.weights[o * n + k] -= shift;
    }
  }
  out.constrained = true;
  return out;
}

Instance affine_conv(const AffineConvKernel& kernel, const Instance& features) {
  const Shape& s = features.shape();
  if (s.channels != kernel.in_channels) {
    throw Error("affine_conv: kernel expects " + std::to_string(kernel.in_channels) + " input channels, got " +
                std::to_string(s.channels));
  }
  if (kernel.size % 2 == 0 || kernel.weights.size() != kernel.out_channels * kernel.per_output()) {
    throw Error("affine_conv: malformed kernel");
  }
  if (kernel.constrained) {
    for (std::size_t o = 0; o < kernel.out_channels; ++o) {
      if (std::abs(kernel.output_sum(o) - 1.0) > 1e-12) {
        throw Error("kernel not affine-constrained");
      }
    }
  }
  const auto h = static_cast<Index>(s.height);
  const auto w = static_cast<Index>(s.width);
  const auto r = static_cast<Index>(kernel.size / 2);
  const auto ks = static_cast<Index>(kernel.size);
  const Shape out_shape{kernel.out_channels, s.height, s.width};
  std::vector<double> out(out_shape.size(), 0.0);
  for (std::size_t o = 0; o < kernel.out_channels; ++o) {
    for (std::size_t c = 0; c < s.channels; ++c) {
      const double* wk = &kernel.weights[(o * kernel.in_channels + c) * kernel.size * kernel.size];
      const auto plane = features.values().subspan(c * s.plane(), s.plane());
      for (Index y = 0; y < h; ++y) {
        for (Index x = 0; x < w; ++x) {
          double acc = 0.0;
          for (Index i = -r; i <= r; ++i) {
            const Index sy = reflect_index(y + i, h);
            for (Index j = -r; j <= r; ++j) {
              acc += wk[(i + r) * ks + j + r] * plane[static_cast<std::size_t>(sy * w + reflect_index(x + j, w))];
            }
          }
          out[o * s.plane() + static_cast<std::size_t>(y * w + x)] += acc;
        }
      }
    }
  }
  return Instance(out_shape, std::move(out));
}

std::pair<Instance, Instance> sortpool(const Instance& u, const Instance& v) {
  require_same_shape(u, v, "sortpool");
  std::vector<double> lo(u.size());
  std::vector<double> hi(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    lo[i] = std::min(u[i], v[i]);
    hi[i] = std::max(u[i], v[i]);
  }
  return {Instance(u.shape(), std::move(lo)), Instance(u.shape(), std::move(hi))};
}

Instance sortpool_channels(const Instance& features, std::size_t stage) {
  const Shape& s = features.shape();
  if (s.channels % 2 != 0) {
    throw Error("sortpool_channels: channel count must be even");
  }
  const std::size_t plane = s.plane();
  std::vector<double> out(features.size());
  auto source = [&](std::size_t slot) { return (slot + stage) % s.channels; };
  for (std::size_t pair = 0; pair < s.channels / 2; ++pair) {
    const std::size_t a = source(2 * pair);
    const std::size_t b = source(2 * pair + 1);
    for (std::size_t i = 0; i < plane; ++i) {
      const double u = features[a * plane + i];
      const double v = features[b * plane + i];
      out[(2 * pair) * plane + i] = std::min(u, v);
      out[(2 * pair + 1) * plane + i] = std::max(u, v);
    }
  }
  return Instance(s, std::move(out));
}

Instance affine_residual(const Instance& l1, const Instance& l2, double t) {
  require_same_shape(l1, l2, "affine_residual");
  std::vector<double> out(l1.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = (1.0 - t) * l1[i] + t * l2[i];
  }
  return Instance(l1.shape(), std::move(out));
}

NeArchStack::NeArchStack(AffineConvKernel conv_in, AffineConvKernel conv_mid, AffineConvKernel conv_out,
                         double t_mid, double t_out)
    : conv_in_(std::move(conv_in)),
      conv_mid_(std::move(conv_mid)),
      conv_out_(std::move(conv_out)),
      t_mid_(t_mid),
      t_out_(t_out) {
  if (!conv_in_.constrained || !conv_mid_.constrained || !conv_out_.constrained) {
    throw Error("ne_arch: all convolutions must be affine-constrained");
  }
  if (conv_in_.in_channels != 1 || conv_out_.out_channels != 1 || conv_mid_.in_channels != conv_in_.out_channels ||
      conv_mid_.out_channels != conv_in_.out_channels || conv_out_.in_channels != conv_in_.out_channels) {
    throw Error("ne_arch: inconsistent channel counts");
  }
}

NeArchStack NeArchStack::random(std::size_t channels, std::size_t kernel_size, Rng& rng) {
  auto conv_in = affine_constrain(AffineConvKernel::random(channels, 1, kernel_size, rng));
  auto conv_mid = affine_constrain(AffineConvKernel::random(channels, channels, kernel_size, rng));
  auto conv_out = affine_constrain(AffineConvKernel::random(1, channels, kernel_size, rng));
  const double t_mid = rng.uniform(-0.5, 1.5);
  const double t_out = rng.uniform(-0.5, 1.5);
  return NeArchStack(std::move(conv_in), std::move(conv_mid), std::move(conv_out), t_mid, t_out);
}

Instance NeArchStack::denoise(const Instance& z) const {
  if (z.shape().channels != 1) {
    throw Error("ne_arch: single-channel input expected");
  }
  const Instance s0 = sortpool_channels(affine_conv(conv_in_, z), 0);
  const Instance s1 = sortpool_channels(affine_conv(conv_mid_, s0), 1);
  const Instance mixed = affine_residual(s0, s1, t_mid_);
  return affine_residual(z, affine_conv(conv_out_, mixed), t_out_);
}

}  // namespace nedenoise
