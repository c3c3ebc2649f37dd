// Copyright 2026 The nedenoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "nedenoise/training.hpp"

#include <algorithm>
#include <cmath>

#include "nedenoise/corpus.hpp"

namespace nedenoise {

namespace {

// dL/dpred for the sum-convention losses.
std::vector<double> loss_derivative(const Instance& pred, const Instance& target, LossKind kind, double scale) {
  std::vector<double> g(pred.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double e = pred[i] - target[i];
    if (kind == LossKind::kMse) {
      g[i] = scale * 2.0 * e;
    } else {
      g[i] = e > 0.0 ? scale : (e < 0.0 ? -scale : 0.0);
    }
  }
  return g;
}

}  // namespace

std::string_view to_string(LossKind kind) { return kind == LossKind::kMse ? "mse" : "l1"; }
std::string_view to_string(Objective objective) {
  return objective == Objective::kSupervised ? "supervised" : "n2n";
}
std::string_view to_string(LrSchedule schedule) {
  return schedule == LrSchedule::kConstant ? "constant" : "halve";
}

LossKind parse_loss_kind(std::string_view text) {
  if (text == "mse") return LossKind::kMse;
  if (text == "l1") return LossKind::kL1;
  throw Error("unknown loss '" + std::string(text) + "'");
}

Objective parse_objective(std::string_view text) {
  if (text == "supervised") return Objective::kSupervised;
  if (text == "n2n") return Objective::kNoise2Noise;
  throw Error("unknown objective '" + std::string(text) + "'");
}

LrSchedule parse_lr_schedule(std::string_view text) {
  if (text == "constant") return LrSchedule::kConstant;
  if (text == "halve") return LrSchedule::kHalveEvery;
  throw Error("unknown lr schedule '" + std::string(text) + "'");
}

void TrainConfig::validate() const {
  if (!(sigma_train >= 0.0)) throw Error("train: sigma must be >= 0");
  if (patch_size == 0 || batch_size == 0) throw Error("train: patch and batch sizes must be positive");
  if (!(learning_rate > 0.0)) throw Error("train: learning rate must be positive");
  if (!(epsilon >= 0.0)) throw Error("train: epsilon must be >= 0");
}

double TrainConfig::learning_rate_at(std::size_t step) const {
  if (schedule == LrSchedule::kConstant) {
    return learning_rate;
  }
  std::size_t period = halve_every != 0 ? halve_every : steps / 5;
  if (period == 0) period = 1;
  return learning_rate * std::ldexp(1.0, -static_cast<int>(step / period));
}

double loss(const Instance& pred, const Instance& target, LossKind kind) {
  require_same_shape(pred, target, "loss");
  if (kind == LossKind::kMse) {
    return squared_distance(pred, target);
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) acc += std::abs(pred[i] - target[i]);
  return acc;
}

std::pair<Instance, Instance> softne_apply(const Instance& x, const Instance& y, double alpha, double mu) {
  return {affine(x, alpha, mu), affine(y, alpha, mu)};
}

std::pair<Instance, Instance> softne_augment(const Instance& x, const Instance& y, Rng& rng) {
  const double alpha = rng.uniform();
  const double mu = rng.uniform();
  return softne_apply(x, y, alpha, mu);
}

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state, double lr) {
  if (grads.size() != params.size()) {
    throw Error("adam: gradient size mismatch");
  }
  for (double g : grads) {
    if (!std::isfinite(g)) {
      throw DivergenceError("divergence: non-finite gradient at step " + std::to_string(state.t + 1), state.t + 1);
    }
  }
  if (state.m.size() != params.size()) {
    state.m.assign(params.size(), 0.0);
    state.v.assign(params.size(), 0.0);
    state.t = 0;
  }
  ++state.t;
  const double c1 = 1.0 - std::pow(kAdamBeta1, static_cast<double>(state.t));
  const double c2 = 1.0 - std::pow(kAdamBeta2, static_cast<double>(state.t));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    state.m[i] = kAdamBeta1 * state.m[i] + (1.0 - kAdamBeta1) * g;
    state.v[i] = kAdamBeta2 * state.v[i] + (1.0 - kAdamBeta2) * g * g;
    const double mhat = state.m[i] / c1;
    const double vhat = state.v[i] / c2;
    params[i] -= lr * mhat / (std::sqrt(vhat) + kAdamEps);
  }
}

double loss_and_gradient(const TrainableModel& model, const TrainingPair& pair, WrapMode wrap, double epsilon,
                         LossKind kind, std::span<double> grad) {
  const Instance& y = pair.input;
  if (wrap == WrapMode::kNone) {
    const Instance pred = model.denoise(y);
    const double l = loss(pred, pair.target, kind);
    model.backward(y, loss_derivative(pred, pair.target, kind, 1.0), grad);
    return l;
  }
  const WrapStats ws = wrap_stats(y, epsilon);
  const Instance z = wrap_normalize(y, ws);
  if (ws.degenerate && wrap != WrapMode::kInputOnly) {
    // Output is forced to the constant mu(y) 1, independent of parameters.
    return loss(Instance::constant(y.shape(), ws.raw.mu), pair.target, kind);
  }
  const Instance g = model.denoise(z);
  std::vector<double> pred(y.size());
  double chain = 1.0;
  switch (wrap) {
    case WrapMode::kDirect:
      for (std::size_t i = 0; i < pred.size(); ++i) pred[i] = ws.std_used * g[i] + ws.raw.mu;
      chain = ws.std_used;
      break;
    case WrapMode::kResidual:
      for (std::size_t i = 0; i < pred.size(); ++i) pred[i] = y[i] - ws.std_used * g[i];
      chain = -ws.std_used;
      break;
    case WrapMode::kInputOnly:
    case WrapMode::kNone:
      pred = g.data();
      break;
  }
  const Instance out(y.shape(), std::move(pred));
  const double l = loss(out, pair.target, kind);
  model.backward(z, loss_derivative(out, pair.target, kind, chain), grad);
  return l;
}

double weighted_loss_and_gradient(const TrainableModel& model, const TrainingPair& pair, double weight, LossKind kind,
                                  std::span<double> grad) {
  const Instance pred = model.denoise(pair.input);
  const double l = weight * loss(pred, pair.target, kind);
  model.backward(pair.input, loss_derivative(pred, pair.target, kind, weight), grad);
  return l;
}

std::vector<TrainingPair> sample_batch(const std::vector<Instance>& corpus, const TrainConfig& cfg, Rng& rng) {
  const NoiseModel noise{cfg.noise, cfg.sigma_train};
  std::vector<TrainingPair> batch;
  batch.reserve(cfg.batch_size);
  for (std::size_t b = 0; b < cfg.batch_size; ++b) {
    const Instance x = sample_patch(corpus, cfg.patch_size, rng);
    Instance y = corrupt(x, noise, rng);
    Instance target = cfg.objective == Objective::kNoise2Noise ? corrupt(x, noise, rng) : x;
    if (cfg.softne) {
      auto [t, inp] = softne_augment(target, y, rng);
      target = std::move(t);
      y = std::move(inp);
    }
    batch.push_back({std::move(y), std::move(target)});
  }
  return batch;
}

double batch_loss_and_gradient(const TrainableModel& model, std::span<const TrainingPair> batch, const TrainConfig& cfg,
                               std::span<double> grad) {
  std::fill(grad.begin(), grad.end(), 0.0);
  double total = 0.0;
  for (const auto& pair : batch) {
    total += loss_and_gradient(model, pair, cfg.wrap, cfg.epsilon, cfg.loss, grad);
  }
  const double inv = 1.0 / static_cast<double>(batch.size());
  for (double& g : grad) g *= inv;
  return total * inv;
}

std::vector<double> train(TrainableModel& model, const std::vector<Instance>& corpus, const TrainConfig& cfg) {
  cfg.validate();
  if (corpus.empty()) {
    throw Error("train: empty corpus");
  }
  const Rng root(cfg.seed);
  AdamState adam;
  std::vector<double> grad(model.parameters().size());
  std::vector<double> curve;
  curve.reserve(cfg.steps);
  for (std::size_t step = 0; step < cfg.steps; ++step) {
    Rng rng = root.substream(step);
    double l = 0.0;
    try {
      const auto batch = sample_batch(corpus, cfg, rng);
      l = batch_loss_and_gradient(model, batch, cfg, grad);
    } catch (const DivergenceError&) {
      throw;
    } catch (const Error& e) {
      throw DivergenceError("divergence at step " + std::to_string(step) + ": " + e.what(), step);
    }
    if (!std::isfinite(l)) {
      throw DivergenceError("divergence: non-finite loss at step " + std::to_string(step), step);
    }
    try {
      adam_step(model.parameters(), grad, adam, cfg.learning_rate_at(step));
    } catch (const DivergenceError&) {
      throw DivergenceError("divergence: non-finite gradient at step " + std::to_string(step), step);
    }
    curve.push_back(l);
  }
  return curve;
}

}  // namespace nedenoise
