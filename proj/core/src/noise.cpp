// Copyright 2026 The nedenoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "nedenoise/noise.hpp"

#include <cmath>
#include <numbers>

namespace nedenoise {

namespace {

// Rayleigh(s) has std s * sqrt((4 - pi) / 2); pick s so that std = 1.
const double kRayleighScale = 1.0 / std::sqrt((4.0 - std::numbers::pi) / 2.0);

}  // namespace

std::string_view to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::kGaussian:
      return "gaussian";
    case NoiseKind::kUniform:
      return "uniform";
    case NoiseKind::kLaplace:
      return "laplace";
    case NoiseKind::kRayleigh:
      return "rayleigh";
  }
  return "gaussian";
}

NoiseKind parse_noise_kind(std::string_view text) {
  if (text == "gaussian") return NoiseKind::kGaussian;
  if (text == "uniform") return NoiseKind::kUniform;
  if (text == "laplace") return NoiseKind::kLaplace;
  if (text == "rayleigh") return NoiseKind::kRayleigh;
  throw Error("unknown noise kind '" + std::string(text) + "'");
}

double draw_unit_noise(NoiseKind kind, Rng& rng) {
  switch (kind) {
    case NoiseKind::kGaussian:
      return rng.normal();
    case NoiseKind::kUniform:
      return std::sqrt(3.0) * (2.0 * rng.uniform() - 1.0);
    case NoiseKind::kLaplace: {
      // scale b = 1/sqrt(2) gives unit variance
      const double e = -std::log1p(-rng.uniform());
      return (rng.uniform() < 0.5 ? -e : e) / std::numbers::sqrt2;
    }
    case NoiseKind::kRayleigh:
      return kRayleighScale * std::sqrt(-2.0 * std::log1p(-rng.uniform()));
  }
  throw Error("unknown noise kind");
}

double unit_noise_mean(NoiseKind kind) {
  if (kind == NoiseKind::kRayleigh) {
    return kRayleighScale * std::sqrt(std::numbers::pi / 2.0);
  }
  return 0.0;
}

Instance corrupt(const Instance& x, const NoiseModel& model, Rng& rng) {
  if (!(model.sigma >= 0.0)) {
    throw Error("noise sigma must be >= 0");
  }
  if (model.sigma == 0.0) {
    return x;
  }
  const double scale = model.sigma / 255.0;
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = x[i] + scale * draw_unit_noise(model.kind, rng);
  }
  return Instance(x.shape(), std::move(out));
}

}  // namespace nedenoise
