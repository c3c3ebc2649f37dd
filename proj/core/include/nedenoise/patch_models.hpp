// Copyright 2026 The nedenoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "nedenoise/backbone.hpp"
#include "nedenoise/rng.hpp"

namespace nedenoise {

/// A backbone with a flat parameter vector and a hand-written reverse pass.
class TrainableModel : public Backbone {
 public:
  [[nodiscard]] virtual std::span<double> parameters() = 0;
  [[nodiscard]] virtual std::span<const double> parameters() const = 0;

  /// Accumulates d<dout, denoise(input)>/d(theta) into `grad`.
  virtual void backward(const Instance& input, std::span<const double> dout, std::span<double> grad) const = 0;

  /// Immutable snapshot safe to share across threads.
  [[nodiscard]] virtual BackbonePtr freeze() const = 0;
};

enum class PredictionConvention : std::uint32_t {
  kClean = 0,
  kResidual = 1,  // the tile input is added to the network output
};

/// Parameters of the two-layer patch regressor, stored contiguously as
/// W1 (hidden x P^2), b1 (hidden), W2 (P^2 x hidden), b2 (P^2), row-major.
struct PatchMlpParams {
  std::size_t patch_size = 8;
  std::size_t hidden = 64;
  PredictionConvention convention = PredictionConvention::kResidual;
  std::vector<double> values;

  static PatchMlpParams zeros(std::size_t patch_size, std::size_t hidden, PredictionConvention convention);
  /// He-scaled first layer, small second layer, zero biases.
  static PatchMlpParams random(std::size_t patch_size, std::size_t hidden, PredictionConvention convention, Rng& rng);

  [[nodiscard]] std::size_t tile() const noexcept { return patch_size * patch_size; }
  [[nodiscard]] std::size_t count() const noexcept { return 2 * hidden * tile() + hidden + tile(); }

  [[nodiscard]] std::span<const double> w1() const { return std::span(values).subspan(0, hidden * tile()); }
  [[nodiscard]] std::span<const double> b1() const { return std::span(values).subspan(hidden * tile(), hidden); }
  [[nodiscard]] std::span<const double> w2() const {
    return std::span(values).subspan(hidden * tile() + hidden, tile() * hidden);
  }
  [[nodiscard]] std::span<const double> b2() const { return std::span(values).subspan(2 * hidden * tile() + hidden); }

  /// Throws on inconsistent sizes or non-finite values.
  void validate() const;

  friend bool operator==(const PatchMlpParams&, const PatchMlpParams&) = default;
};

/// Non-overlapping stride-P tiling of each channel; tiles that run past the
/// border read reflect-extended pixels and are cropped on output.
class PatchMlp final : public TrainableModel {
 public:
  explicit PatchMlp(PatchMlpParams params);

  Instance denoise(const Instance& z) const override;
  BackboneInfo info() const override { return {"patch_mlp", EquivarianceClass::kNone}; }

  std::span<double> parameters() override { return params_.values; }
  std::span<const double> parameters() const override { return params_.values; }
  void backward(const Instance& input, std::span<const double> dout, std::span<double> grad) const override;
  BackbonePtr freeze() const override;

  [[nodiscard]] const PatchMlpParams& params() const noexcept { return params_; }

 private:
  PatchMlpParams params_;
};

/// Affine patch regressor out = W p + b, W (P^2 x P^2). Used where a linear
/// model class is needed.
class PatchLinear final : public TrainableModel {
 public:
  PatchLinear(std::size_t patch_size, std::vector<double> values);
  static PatchLinear zeros(std::size_t patch_size);

  Instance denoise(const Instance& z) const override;
  BackboneInfo info() const override { return {"patch_linear", EquivarianceClass::kNone}; }

  std::span<double> parameters() override { return values_; }
  std::span<const double> parameters() const override { return values_; }
  void backward(const Instance& input, std::span<const double> dout, std::span<double> grad) const override;
  BackbonePtr freeze() const override;

 private:
  std::size_t patch_size_;
  std::vector<double> values_;
};

// Checkpoint format, all little-endian:
//   u32 magic 'NEMP', u32 version, u32 P, u32 hidden, u32 convention,
//   then f64 W1, b1, W2, b2 row-major.
inline constexpr std::uint32_t kCheckpointMagic = 0x504d454eu;  // "NEMP"
inline constexpr std::uint32_t kCheckpointVersion = 1;

std::vector<std::uint8_t> encode_checkpoint(const PatchMlpParams& params);
PatchMlpParams decode_checkpoint(std::span<const std::uint8_t> bytes);
void save_checkpoint(const PatchMlpParams& params, const std::filesystem::path& path);
PatchMlpParams load_checkpoint(const std::filesystem::path& path);

}  // namespace nedenoise
