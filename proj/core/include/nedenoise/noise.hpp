// Copyright 2026 The nedenoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string_view>

#include "nedenoise/instance.hpp"
#include "nedenoise/rng.hpp"

namespace nedenoise {

enum class NoiseKind { kGaussian, kUniform, kLaplace, kRayleigh };

std::string_view to_string(NoiseKind kind);
NoiseKind parse_noise_kind(std::string_view text);

/// Additive white noise. `sigma` is in 8-bit units; images live on [0, 1],
/// so the applied standard deviation is sigma / 255.
struct NoiseModel {
  NoiseKind kind = NoiseKind::kGaussian;
  double sigma = 25.0;
};

/// One draw with unit standard deviation. Gaussian, uniform and Laplace
/// draws are zero-mean; Rayleigh draws keep their positive mean.
double draw_unit_noise(NoiseKind kind, Rng& rng);

/// Expected value of draw_unit_noise.
double unit_noise_mean(NoiseKind kind);

/// y = x + (sigma / 255) * eps, eps i.i.d. per entry.
Instance corrupt(const Instance& x, const NoiseModel& model, Rng& rng);

}  // namespace nedenoise
