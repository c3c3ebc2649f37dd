// Copyright 2026 The nedenoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include "nedenoise/backbone.hpp"

namespace nedenoise {

/// Dense 2-D filter with odd extents, centered on (rows/2, cols/2).
struct Stencil {
  std::size_t rows = 1;
  std::size_t cols = 1;
  std::vector<double> weights{1.0};

  static Stencil delta(std::size_t size = 1);
  /// Outer product k * k^T of a 1-D kernel.
  static Stencil separable(const std::vector<double>& kernel);
  /// 1 x n horizontal stencil.
  static Stencil row(const std::vector<double>& kernel);

  [[nodiscard]] double sum() const;
};

/// Per-channel 2-D correlation with reflect padding. Linear and bias-free,
/// hence scale-equivariant; no constraint on the weights.
class Conv2d : public Backbone {
 public:
  explicit Conv2d(Stencil stencil);

  Instance denoise(const Instance& z) const override;
  BackboneInfo info() const override { return {"conv2d", EquivarianceClass::kScaleOnly}; }

  [[nodiscard]] const Stencil& stencil() const noexcept { return stencil_; }

 protected:
  Stencil stencil_;
};

/// Conv2d whose stencil sums to one (within 1e-12), so constants are fixed
/// points and the map is normalization-equivariant.
class UnitSumConv final : public Conv2d {
 public:
  /// Throws Error("kernel not affine-constrained") if the sum is not 1.
  explicit UnitSumConv(Stencil stencil);

  BackboneInfo info() const override { return {"unit_sum_conv", EquivarianceClass::kNormalization}; }
};

/// Blockwise orthonormal DCT soft-thresholding. The DC coefficient is left
/// alone, so the map commutes with shifts but the fixed threshold breaks
/// scale equivariance.
class DctThreshold final : public Backbone {
 public:
  DctThreshold(std::size_t block, double threshold);

  Instance denoise(const Instance& z) const override;
  BackboneInfo info() const override { return {"dct_threshold", EquivarianceClass::kNone}; }

 private:
  std::size_t block_;
  double threshold_;
  std::vector<double> basis_;  // block x block, row k = k-th cosine
};

enum class NlmBandwidth {
  kAbsolute,           // h given in pixel units
  kRelativeToStd,      // h = kappa * std(y)
};

struct NlmParams {
  std::size_t search_radius = 3;
  std::size_t patch_radius = 1;
  NlmBandwidth mode = NlmBandwidth::kRelativeToStd;
  /// kappa for relative mode, h for absolute mode.
  double bandwidth = 0.4;
};

/// Non-local means with weights exp(-D^2 / h^2), D^2 the mean squared patch
/// difference.
class Nlm final : public Backbone {
 public:
  explicit Nlm(NlmParams params);

  Instance denoise(const Instance& z) const override;
  BackboneInfo info() const override;

 private:
  NlmParams params_;
};

}  // namespace nedenoise
