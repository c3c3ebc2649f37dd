// Copyright 2026 The nedenoise Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "nedenoise/classical.hpp"
#include "nedenoise/corpus.hpp"
#include "nedenoise/noise.hpp"
#include "nedenoise/patch_models.hpp"
#include "nedenoise/sampler.hpp"
#include "nedenoise/training.hpp"
#include "nedenoise/wrapper.hpp"

namespace {

using namespace nedenoise;

Instance noisy_image(std::size_t side) {
  const auto img = generate_corpus(1, side, CorpusMix{}, 1)[0].image;
  Rng rng(2);
  return corrupt(img, NoiseModel{NoiseKind::kGaussian, 25.0}, rng);
}

void BM_WrappedBox(benchmark::State& state) {
  const Instance y = noisy_image(static_cast<std::size_t>(state.range(0)));
  const WrappedDenoiser f(std::make_shared<UnitSumConv>(Stencil::separable({0.25, 0.5, 0.25})), WrapMode::kDirect);
  for (auto _ : state) benchmark::DoNotOptimize(f(y));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(y.size()));
}
BENCHMARK(BM_WrappedBox)->Arg(64)->Arg(256);

void BM_Nlm(benchmark::State& state) {
  const Instance y = noisy_image(static_cast<std::size_t>(state.range(0)));
  const Nlm nlm(NlmParams{});
  for (auto _ : state) benchmark::DoNotOptimize(nlm.denoise(y));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(y.size()));
}
BENCHMARK(BM_Nlm)->Arg(64)->Arg(128);

void BM_PatchMlpForward(benchmark::State& state) {
  const Instance y = noisy_image(64);
  Rng rng(3);
  const PatchMlp mlp(PatchMlpParams::random(8, static_cast<std::size_t>(state.range(0)),
                                            PredictionConvention::kResidual, rng));
  for (auto _ : state) benchmark::DoNotOptimize(mlp.denoise(y));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(y.size()));
}
BENCHMARK(BM_PatchMlpForward)->Arg(64)->Arg(128);

void BM_TrainStep(benchmark::State& state) {
  const auto corpus = images_of(generate_corpus(16, 64, CorpusMix{}, 4));
  Rng init(5);
  PatchMlp model(PatchMlpParams::random(8, 64, PredictionConvention::kResidual, init));
  TrainConfig cfg;
  cfg.wrap = state.range(0) ? WrapMode::kDirect : WrapMode::kNone;
  std::vector<double> grad(model.parameters().size());
  AdamState adam;
  Rng rng(6);
  for (auto _ : state) {
    const auto batch = sample_batch(corpus, cfg, rng);
    benchmark::DoNotOptimize(batch_loss_and_gradient(model, batch, cfg, grad));
    adam_step(model.parameters(), grad, adam, cfg.learning_rate);
  }
}
BENCHMARK(BM_TrainStep)->Arg(0)->Arg(1);

void BM_SamplerStep(benchmark::State& state) {
  const Instance x = generate_corpus(1, 64, CorpusMix{}, 7)[0].image;
  Rng rng(8);
  const Projector p = make_inpainting_mask(x.shape(), 0.1, rng);
  const InstanceMap f =
      WrappedDenoiser(std::make_shared<UnitSumConv>(Stencil::separable({0.25, 0.5, 0.25})), WrapMode::kDirect)
          .as_map();
  SamplerConfig cfg;
  cfg.t_max = 10;
  cfg.sigmaL = 1e-12;  // never reached: every run takes t_max steps
  for (auto _ : state) benchmark::DoNotOptimize(sampler_run(f, p, p.apply(x), cfg, rng));
  state.SetItemsProcessed(state.iterations() * 10);
}
BENCHMARK(BM_SamplerStep);

}  // namespace

BENCHMARK_MAIN();
