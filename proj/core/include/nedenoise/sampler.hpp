// Copyright 2026 The nedenoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "nedenoise/backbone.hpp"
#include "nedenoise/rng.hpp"

namespace nedenoise {

/// Diagonal 0/1 projector P = diag(mask); 1 marks an observed pixel.
class Projector {
 public:
  explicit Projector(Shape shape, std::vector<unsigned char> mask);

  static Projector zeros(Shape shape);
  static Projector ones(Shape shape);

  [[nodiscard]] const Shape& shape() const noexcept { return shape_; }
  [[nodiscard]] std::size_t size() const noexcept { return mask_.size(); }
  [[nodiscard]] bool observed(std::size_t i) const { return mask_[i] != 0; }
  [[nodiscard]] std::size_t observed_count() const noexcept;
  [[nodiscard]] const std::vector<unsigned char>& mask() const noexcept { return mask_; }

  /// P y: observed entries kept, the rest set to exact zero.
  [[nodiscard]] Instance apply(const Instance& y) const;

 private:
  Shape shape_;
  std::vector<unsigned char> mask_;
};

/// Uniformly random mask with exactly floor(fraction * d) observed pixels.
Projector make_inpainting_mask(Shape shape, double observed_fraction, Rng& rng);

struct SamplerConfig {
  double sigma0 = 1.0;
  double sigmaL = 0.01;
  double h0 = 0.01;
  double beta = 0.01;
  std::size_t t_max = 1000;

  void validate() const;
  /// h0 t / (1 + h0 (t - 1)).
  [[nodiscard]] double step_size(std::size_t t) const;
};

/// gamma / sigma_hat = sqrt((1 - beta h)^2 - (1 - h)^2). Throws if negative.
double noise_factor(double beta, double h);

enum class StopReason { kThreshold, kBudget };
std::string_view to_string(StopReason reason);

struct StepRecord {
  std::size_t t = 0;
  double sigma_hat = 0.0;
  double h = 0.0;     // 0 on the stopping step
  double gamma = 0.0; // 0 on the stopping step
  /// PSNR of x_c + (I - P) y at the start of step t; NaN without a clean image.
  double psnr = 0.0;
};

struct Trajectory {
  std::vector<StepRecord> records;
  StopReason stop = StopReason::kBudget;
  Instance y;
  Instance x_hat;
  /// Filled only when a clean reference is supplied. one_pass_psnr is the
  /// single denoiser pass on y0 for residual-stopped runs and the observed
  /// projection P x for constrained runs.
  std::optional<double> one_pass_psnr;
  std::optional<double> best_psnr;
  std::optional<double> final_psnr;
  /// final - best.
  std::optional<double> gap;
};

/// Linear inverse sampler driven by denoiser `denoise`. x_c must be zero
/// off the mask. The returned x_hat satisfies P x_hat = x_c bitwise.
Trajectory sampler_run(const InstanceMap& denoise, const Projector& p, const Instance& x_c, const SamplerConfig& cfg,
                       Rng& rng, const std::optional<Instance>& clean = std::nullopt);

/// Unconstrained variant (P = 0, x_c = 0) started from y0 itself and
/// stopped once sigma_hat <= cfg.sigmaL. cfg.beta must be 1.
Trajectory residual_stop_denoise(const InstanceMap& denoise, const Instance& y0, const SamplerConfig& cfg, Rng& rng,
                                 const std::optional<Instance>& clean = std::nullopt);

/// Default configuration for residual-stopped denoising.
SamplerConfig residual_stop_config();

}  // namespace nedenoise
