// Copyright 2026 The nedenoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "nedenoise/instance.hpp"
#include "nedenoise/noise.hpp"
#include "nedenoise/patch_models.hpp"
#include "nedenoise/rng.hpp"
#include "nedenoise/wrapper.hpp"

namespace nedenoise {

enum class LossKind { kMse, kL1 };
enum class Objective { kSupervised, kNoise2Noise };
enum class LrSchedule { kConstant, kHalveEvery };

std::string_view to_string(LossKind kind);
std::string_view to_string(Objective objective);
std::string_view to_string(LrSchedule schedule);
LossKind parse_loss_kind(std::string_view text);
Objective parse_objective(std::string_view text);
LrSchedule parse_lr_schedule(std::string_view text);

/// Raised when training produces a non-finite loss or gradient.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, std::size_t step) : Error(what), step_(step) {}
  [[nodiscard]] std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

struct TrainConfig {
  double sigma_train = 25.0;  // 8-bit units
  NoiseKind noise = NoiseKind::kGaussian;
  /// Side of the square training instance; the model tiles it internally.
  std::size_t patch_size = 16;
  std::size_t batch_size = 16;
  std::size_t steps = 1000;
  double learning_rate = 1e-3;
  LrSchedule schedule = LrSchedule::kConstant;
  /// Halving period; 0 selects steps / 5.
  std::size_t halve_every = 0;
  LossKind loss = LossKind::kMse;
  Objective objective = Objective::kSupervised;
  /// Affine orbit augmentation, one (alpha, mu) draw per training image.
  bool softne = false;
  WrapMode wrap = WrapMode::kNone;
  double epsilon = kDefaultEpsilon;
  std::uint64_t seed = 0;

  void validate() const;
  [[nodiscard]] double learning_rate_at(std::size_t step) const;
};

/// Sum-convention losses: mse = ||pred - target||^2, l1 = sum |pred - target|.
double loss(const Instance& pred, const Instance& target, LossKind kind);

/// (alpha x + mu 1, alpha y + mu 1) for a fixed pair.
std::pair<Instance, Instance> softne_apply(const Instance& x, const Instance& y, double alpha, double mu);
/// Draws alpha ~ U(0,1), mu ~ U(0,1) and applies the same map to both.
std::pair<Instance, Instance> softne_augment(const Instance& x, const Instance& y, Rng& rng);

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::size_t t = 0;
};

inline constexpr double kAdamBeta1 = 0.9;
inline constexpr double kAdamBeta2 = 0.999;
inline constexpr double kAdamEps = 1e-8;

/// One bias-corrected Adam update in place. Throws DivergenceError on
/// non-finite gradients (step index = state.t).
void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state, double lr);

/// Network input and regression target (clean image, or the second noisy
/// copy under Noise2Noise).
struct TrainingPair {
  Instance input;
  Instance target;
};

/// Raw-space loss of the wrapped model on one pair; accumulates its exact
/// parameter gradient into `grad`. The wrapper statistics depend only on the
/// input, so they are constants of the parameters.
double loss_and_gradient(const TrainableModel& model, const TrainingPair& pair, WrapMode wrap, double epsilon,
                         LossKind kind, std::span<double> grad);

/// weight * loss(model(input), target) for the bare model; accumulates its
/// gradient.
double weighted_loss_and_gradient(const TrainableModel& model, const TrainingPair& pair, double weight, LossKind kind,
                                  std::span<double> grad);

/// Draws cfg.batch_size pairs: patch, corruption (a second independent one
/// for Noise2Noise), then optional soft-NE augmentation.
std::vector<TrainingPair> sample_batch(const std::vector<Instance>& corpus, const TrainConfig& cfg, Rng& rng);

/// Mean loss over the batch, gradient of that mean written to `grad`.
double batch_loss_and_gradient(const TrainableModel& model, std::span<const TrainingPair> batch, const TrainConfig& cfg,
                               std::span<double> grad);

/// Runs cfg.steps Adam iterations on `model` in place and returns the
/// per-step mean batch loss. Deterministic in cfg.seed.
std::vector<double> train(TrainableModel& model, const std::vector<Instance>& corpus, const TrainConfig& cfg);

}  // namespace nedenoise
