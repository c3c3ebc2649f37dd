// Copyright 2026 The nedenoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "nedenoise/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "nedenoise/metrics.hpp"

namespace nedenoise {

Projector::Projector(Shape shape, std::vector<unsigned char> mask) : shape_(shape), mask_(std::move(mask)) {
  if (mask_.size() != shape_.size()) {
    throw Error("projector mask size does not match " + to_string(shape_));
  }
  for (auto& m : mask_) m = m != 0 ? 1 : 0;
}

Projector Projector::zeros(Shape shape) { return Projector(shape, std::vector<unsigned char>(shape.size(), 0)); }
Projector Projector::ones(Shape shape) { return Projector(shape, std::vector<unsigned char>(shape.size(), 1)); }

std::size_t Projector::observed_count() const noexcept {
  return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), 1));
}

Instance Projector::apply(const Instance& y) const {
  if (y.shape() != shape_) {
    throw Error("projector shape " + to_string(shape_) + " does not match " + to_string(y.shape()));
  }
  std::vector<double> out(y.size(), 0.0);
  for (std::size_t i = 0; i < out.size(); ++i)
    if (mask_[i]) out[i] = y[i];
  return Instance(shape_, std::move(out));
}

Projector make_inpainting_mask(Shape shape, double observed_fraction, Rng& rng) {
  if (!(observed_fraction >= 0.0 && observed_fraction <= 1.0)) {
    throw Error("observed fraction must lie in [0, 1]");
  }
  const std::size_t d = shape.size();
  const auto k = static_cast<std::size_t>(std::floor(observed_fraction * static_cast<double>(d)));
  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Partial Fisher-Yates: the first k slots become a uniform k-subset.
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(d - i));
    std::swap(order[i], order[j]);
  }
  std::vector<unsigned char> mask(d, 0);
  for (std::size_t i = 0; i < k; ++i) mask[order[i]] = 1;
  return Projector(shape, std::move(mask));
}

void SamplerConfig::validate() const {
  if (!(sigmaL > 0.0 && sigma0 > sigmaL)) throw Error("sampler: need sigma0 > sigmaL > 0");
  if (!(h0 > 0.0 && h0 <= 1.0)) throw Error("sampler: h0 must lie in (0, 1]");
  if (!(beta >= 0.0 && beta <= 1.0)) throw Error("sampler: beta must lie in [0, 1]");
  if (t_max == 0) throw Error("sampler: t_max must be >= 1");
}

double SamplerConfig::step_size(std::size_t t) const {
  const double tt = static_cast<double>(t);
  return h0 * tt / (1.0 + h0 * (tt - 1.0));
}

double noise_factor(double beta, double h) {
  const double a = 1.0 - beta * h;
  const double b = 1.0 - h;
  const double g2 = a * a - b * b;
  if (g2 < 0.0) {
    throw Error("sampler: negative injected-noise variance");
  }
  return std::sqrt(g2);
}

std::string_view to_string(StopReason reason) {
  return reason == StopReason::kThreshold ? "threshold" : "budget";
}

namespace {

Trajectory run_from(const InstanceMap& denoise, const Projector& p, const Instance& x_c, std::vector<double> y,
                    const SamplerConfig& cfg, Rng& rng, const std::optional<Instance>& clean) {
  const Shape shape = x_c.shape();
  const std::size_t d = shape.size();
  const double root_d = std::sqrt(static_cast<double>(d));
  auto estimate = [&](const std::vector<double>& state) {
    std::vector<double> out(d);
    for (std::size_t i = 0; i < d; ++i) out[i] = p.observed(i) ? x_c[i] : x_c[i] + state[i];
    return Instance(shape, std::move(out));
  };
  auto quality = [&](const Instance& est) {
    return clean ? psnr(est, *clean) : std::numeric_limits<double>::quiet_NaN();
  };

  std::vector<StepRecord> records;
  StopReason stop = StopReason::kBudget;
  std::vector<double> u(d);
  for (std::size_t t = 1; t <= cfg.t_max; ++t) {
    const Instance state(shape, y);
    const Instance dy = denoise(state);
    if (dy.shape() != shape) throw Error("sampler: denoiser is not shape-preserving");
    double norm_sq = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      u[i] = p.observed(i) ? x_c[i] - y[i] : dy[i] - y[i];
      norm_sq += u[i] * u[i];
    }
    StepRecord rec;
    rec.t = t;
    rec.sigma_hat = std::sqrt(norm_sq) / root_d;
    rec.psnr = quality(estimate(y));
    if (rec.sigma_hat <= cfg.sigmaL) {
      records.push_back(rec);
      stop = StopReason::kThreshold;
      break;
    }
    rec.h = cfg.step_size(t);
    rec.gamma = noise_factor(cfg.beta, rec.h) * rec.sigma_hat;
    for (std::size_t i = 0; i < d; ++i) {
      const double z = rng.normal();
      y[i] += rec.h * u[i] + rec.gamma * z;
    }
    records.push_back(rec);
    for (double v : y) {
      if (!std::isfinite(v)) {
        throw Error("sampler: non-finite state at step " + std::to_string(t));
      }
    }
  }
  Trajectory traj{std::move(records), stop, Instance(shape, y), estimate(y), {}, {}, {}, {}};
  if (clean) {
    traj.final_psnr = psnr(traj.x_hat, *clean);
    double best = *traj.final_psnr;
    for (const auto& r : traj.records) best = std::max(best, r.psnr);
    traj.best_psnr = best;
    traj.gap = *traj.final_psnr - best;
  }
  return traj;
}

}  // namespace

Trajectory sampler_run(const InstanceMap& denoise, const Projector& p, const Instance& x_c, const SamplerConfig& cfg,
                       Rng& rng, const std::optional<Instance>& clean) {
  cfg.validate();
  if (p.shape() != x_c.shape()) throw Error("sampler: projector and x_c shapes differ");
  if (clean) require_same_shape(*clean, x_c, "sampler clean reference");
  for (std::size_t i = 0; i < x_c.size(); ++i) {
    if (!p.observed(i) && x_c[i] != 0.0) throw Error("sampler: x_c must be zero off the mask");
  }
  std::vector<double> y(x_c.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double base = p.observed(i) ? x_c[i] : 0.5;
    y[i] = base + cfg.sigma0 * rng.normal();
  }
  Trajectory traj = run_from(denoise, p, x_c, std::move(y), cfg, rng, clean);
  if (clean) {
    traj.one_pass_psnr = psnr(p.apply(*clean), *clean);
  }
  return traj;
}

Trajectory residual_stop_denoise(const InstanceMap& denoise, const Instance& y0, const SamplerConfig& cfg, Rng& rng,
                                 const std::optional<Instance>& clean) {
  cfg.validate();
  if (cfg.beta != 1.0) throw Error("residual-stopped denoising requires beta = 1");
  if (clean) require_same_shape(*clean, y0, "sampler clean reference");
  const Projector p = Projector::zeros(y0.shape());
  const Instance zero = Instance::zeros(y0.shape());
  Trajectory traj = run_from(denoise, p, zero, y0.data(), cfg, rng, clean);
  if (clean) {
    traj.one_pass_psnr = psnr(denoise(y0), *clean);
  }
  return traj;
}

SamplerConfig residual_stop_config() {
  SamplerConfig cfg;
  cfg.sigma0 = 1.0;
  cfg.sigmaL = 1.0 / 255.0;
  cfg.h0 = 0.01;
  cfg.beta = 1.0;
  return cfg;
}

}  // namespace nedenoise
