// Copyright 2026 The nedenoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "nedenoise/backbone.hpp"
#include "nedenoise/rng.hpp"

namespace nedenoise {

/// Multi-channel square convolution kernel laid out as
/// weights[((out * in_channels + in) * size + i) * size + j].
struct AffineConvKernel {
  std::size_t out_channels = 1;
  std::size_t in_channels = 1;
  std::size_t size = 3;
  std::vector<double> weights;
  /// When set, every output channel's coefficients sum to one.
  bool constrained = false;

  [[nodiscard]] std::size_t per_output() const noexcept { return in_channels * size * size; }
  [[nodiscard]] double output_sum(std::size_t out) const;

  static AffineConvKernel random(std::size_t out_channels, std::size_t in_channels, std::size_t size, Rng& rng);
};

/// Orthogonal projection onto {sum of each output channel's weights = 1}.
AffineConvKernel affine_constrain(const AffineConvKernel& kernel);

/// Bias-free convolution with reflect padding. A constrained kernel maps
/// constant feature maps to themselves.
Instance affine_conv(const AffineConvKernel& kernel, const Instance& features);

/// Elementwise (min, max).
std::pair<Instance, Instance> sortpool(const Instance& u, const Instance& v);

/// SortPool over channel pairs. Channels are first rotated by `stage`
/// positions, then adjacent pairs (0,1),(2,3),... are sorted; the result
/// stores min in the even slot and max in the odd slot.
Instance sortpool_channels(const Instance& features, std::size_t stage);

/// (1 - t) l1 + t l2; t is not restricted to [0, 1].
Instance affine_residual(const Instance& l1, const Instance& l2, double t);

/// A small architecturally NE network built only from the three layer
/// types above:
///   s0  = sortpool(conv_in(y), 0)
///   s1  = sortpool(conv_mid(s0), 1)
///   out = affine_residual(y, conv_out(affine_residual(s0, s1, t_mid)), t_out)
class NeArchStack final : public Backbone {
 public:
  NeArchStack(AffineConvKernel conv_in, AffineConvKernel conv_mid, AffineConvKernel conv_out, double t_mid,
              double t_out);

  /// Random weights projected onto the affine constraint.
  static NeArchStack random(std::size_t channels, std::size_t kernel_size, Rng& rng);

  Instance denoise(const Instance& z) const override;
  BackboneInfo info() const override { return {"ne_arch", EquivarianceClass::kNormalization}; }

 private:
  AffineConvKernel conv_in_;
  AffineConvKernel conv_mid_;
  AffineConvKernel conv_out_;
  double t_mid_;
  double t_out_;
};

}  // namespace nedenoise
