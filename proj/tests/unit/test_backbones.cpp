// Copyright 2026 The nedenoise Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <memory>

#include "nedenoise/classical.hpp"
#include "nedenoise/ne_layers.hpp"
#include "nedenoise/patch_models.hpp"
#include "nedenoise/wrapper.hpp"
#include "support.hpp"

namespace nedenoise {
namespace {

using testing::expect_values;
using testing::random_instance;

double max_defect(const InstanceMap& f, Rng& rng, Shape shape, int probes) {
  double worst = 0.0;
  for (int t = 0; t < probes; ++t) {
    const Instance y = random_instance(rng, shape);
    const auto p = testing::random_probe(rng);
    worst = std::max(worst, ne_defect(f, y, p.a, p.b));
  }
  return worst;
}

/// Smooth ramp plus a grating: textured enough to excite every backbone.
Instance textured(std::size_t h, std::size_t w) {
  std::vector<double> v(h * w);
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = 0; j < w; ++j)
      v[i * w + j] = 0.3 + 0.01 * static_cast<double>(i) + 0.2 * std::sin(0.9 * static_cast<double>(j) + 0.4 * i);
  return Instance(Shape{1, h, w}, std::move(v));
}

TEST(ReflectIndex, MirrorsWithoutRepeatingEdge) {
  EXPECT_EQ(reflect_index(-1, 5), 1);
  EXPECT_EQ(reflect_index(-2, 5), 2);
  EXPECT_EQ(reflect_index(5, 5), 3);
  EXPECT_EQ(reflect_index(6, 5), 2);
  EXPECT_EQ(reflect_index(3, 5), 3);
  EXPECT_EQ(reflect_index(-3, 1), 0);
}

TEST(UnitSumConv, ConstantImageFixed) {
  const UnitSumConv conv(Stencil::separable({0.25, 0.5, 0.25}));
  const Instance c = Instance::constant(Shape{1, 6, 7}, 0.42);
  EXPECT_LE(testing::max_abs_diff(conv.denoise(c), c), 1e-15);
}

TEST(UnitSumConv, DeltaIsIdentity) {
  Rng rng(1);
  const Instance y = random_instance(rng, Shape{2, 5, 6});
  EXPECT_EQ(UnitSumConv(Stencil::delta(3)).denoise(y), y);
}

TEST(UnitSumConv, RejectsUnconstrainedKernel) {
  try {
    UnitSumConv bad(Stencil::row({0.5, 0.6, 0.1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("kernel not affine-constrained"), std::string::npos);
  }
}

TEST(UnitSumConv, IsNe) {
  Rng rng(2);
  const auto conv = std::make_shared<UnitSumConv>(Stencil::separable({0.25, 0.5, 0.25}));
  EXPECT_LE(max_defect(as_map(conv), rng, Shape{1, 9, 8}, 100), 1e-10);
}

TEST(UnitSumConv, ReflectPaddingByHand) {
  // Row [a b c] with kernel [0.25 0.5 0.25]; reflect gives neighbors b at both ends.
  const UnitSumConv conv(Stencil::row({0.25, 0.5, 0.25}));
  const Instance y(Shape{1, 1, 3}, {1.0, 2.0, 4.0});
  expect_values(conv.denoise(y), {0.25 * 2 + 0.5 * 1 + 0.25 * 2, 0.25 * 1 + 0.5 * 2 + 0.25 * 4,
                                  0.25 * 2 + 0.5 * 4 + 0.25 * 2});
}

TEST(Conv2d, ScaleButNotShiftEquivariant) {
  const Conv2d conv(Stencil::row({0.5, 0.6, 0.1}));
  EXPECT_EQ(conv.info().equivariance, EquivarianceClass::kScaleOnly);
  const Instance y = textured(6, 6);
  EXPECT_LE(ne_defect([&](const Instance& z) { return conv.denoise(z); }, y, 2.0, 0.0), 1e-14);
  EXPECT_GT(ne_defect([&](const Instance& z) { return conv.denoise(z); }, y, 1.0, 0.2), 1e-3);
}

TEST(DctThreshold, ZeroThresholdIsIdentity) {
  Rng rng(3);
  for (std::size_t side : {8, 11, 13}) {
    const Instance y = random_instance(rng, Shape{1, side, side + 3});
    EXPECT_LE(testing::max_abs_diff(DctThreshold(4, 0.0).denoise(y), y), 1e-10);
  }
}

TEST(DctThreshold, ConstantUnchanged) {
  const Instance c = Instance::constant(Shape{1, 9, 10}, 0.7);
  EXPECT_LE(testing::max_abs_diff(DctThreshold(4, 0.3).denoise(c), c), 1e-12);
}

TEST(DctThreshold, ScaleBreaksEquivariance) {
  const DctThreshold dct(4, 0.1);
  EXPECT_GT(ne_defect([&](const Instance& z) { return dct.denoise(z); }, textured(12, 12), 2.0, 0.0), 1e-3);
}

TEST(DctThreshold, Errors) {
  EXPECT_THROW(DctThreshold(1, 0.1), Error);
  EXPECT_THROW(DctThreshold(4, -0.1), Error);
  EXPECT_THROW(DctThreshold(8, 0.1).denoise(Instance::zeros(Shape{1, 7, 9})), Error);
}

TEST(Nlm, ConstantImageUnchanged) {
  const Instance c = Instance::constant(Shape{1, 7, 7}, 0.3);
  EXPECT_LE(testing::max_abs_diff(Nlm(NlmParams{}).denoise(c), c), 1e-15);
  NlmParams abs;
  abs.mode = NlmBandwidth::kAbsolute;
  abs.bandwidth = 0.1;
  EXPECT_LE(testing::max_abs_diff(Nlm(abs).denoise(c), c), 1e-15);
}

TEST(Nlm, RelativeBandwidthIsNe) {
  Rng rng(4);
  const auto nlm = std::make_shared<Nlm>(NlmParams{});
  EXPECT_EQ(nlm->info().equivariance, EquivarianceClass::kNormalization);
  EXPECT_LE(max_defect(as_map(nlm), rng, Shape{1, 9, 9}, 20), 1e-10);
}

TEST(Nlm, AbsoluteBandwidthShiftOnly) {
  NlmParams p;
  p.mode = NlmBandwidth::kAbsolute;
  p.bandwidth = 0.1;
  const auto nlm = std::make_shared<Nlm>(p);
  const Instance y = textured(9, 9);
  EXPECT_LE(ne_defect(as_map(nlm), y, 1.0, 0.1), 1e-10);
  EXPECT_GT(ne_defect(as_map(nlm), y, 2.0, 0.0), 1e-3);
}

TEST(Nlm, RejectsZeroRadius) {
  NlmParams p;
  p.search_radius = 0;
  EXPECT_THROW(Nlm{p}, Error);
}

TEST(PatchMlp, ZeroResidualIsIdentity) {
  Rng rng(5);
  const PatchMlp mlp(PatchMlpParams::zeros(4, 8, PredictionConvention::kResidual));
  const Instance y = random_instance(rng, Shape{1, 9, 10});
  EXPECT_EQ(mlp.denoise(y), y);
}

TEST(PatchMlp, ZeroCleanIsZero) {
  Rng rng(6);
  const PatchMlp mlp(PatchMlpParams::zeros(4, 8, PredictionConvention::kClean));
  const Instance y = random_instance(rng, Shape{1, 9, 10});
  EXPECT_EQ(mlp.denoise(y), Instance::zeros(y.shape()));
}

TEST(PatchMlp, ShapePreservingForRaggedSizes) {
  Rng rng(7);
  const PatchMlp mlp(PatchMlpParams::random(8, 16, PredictionConvention::kClean, rng));
  for (auto shape : {Shape{1, 13, 21}, Shape{1, 3, 5}, Shape{2, 9, 8}}) {
    EXPECT_EQ(mlp.denoise(random_instance(rng, shape)).shape(), shape);
  }
}

TEST(PatchMlp, ForwardMatchesHandComputation) {
  // P = 1, hidden = 1: out = w2 * relu(w1 * p + b1) + b2.
  PatchMlpParams p = PatchMlpParams::zeros(1, 1, PredictionConvention::kClean);
  p.values = {2.0, -0.5, 3.0, 0.25};
  const PatchMlp mlp(p);
  expect_values(mlp.denoise(Instance::from_values({1.0, 0.1})), {3.0 * 1.5 + 0.25, 0.25});
}

TEST(PatchMlp, RejectsNonFiniteParameters) {
  PatchMlpParams p = PatchMlpParams::zeros(2, 2, PredictionConvention::kClean);
  p.values[0] = std::nan("");
  EXPECT_THROW(PatchMlp{p}, Error);
  PatchMlpParams q = PatchMlpParams::zeros(2, 2, PredictionConvention::kClean);
  q.values.pop_back();
  EXPECT_THROW(PatchMlp{q}, Error);
}

TEST(PatchMlp, GenericParametersAreNotNe) {
  Rng rng(8);
  const auto mlp = PatchMlp(PatchMlpParams::random(4, 16, PredictionConvention::kClean, rng)).freeze();
  EXPECT_GT(max_defect(as_map(mlp), rng, Shape{1, 8, 8}, 10), 1e-3);
  EXPECT_LE(max_defect(WrappedDenoiser(mlp, WrapMode::kDirect, 0.0).as_map(), rng, Shape{1, 8, 8}, 50), 1e-10);
}

TEST(AffineConstrain, Examples) {
  AffineConvKernel k{1, 2, 1, {2.0, 2.0}, false};
  const auto c = affine_constrain(k);
  expect_values(Instance::from_values(c.weights), {0.5, 0.5}, 0.0);
  EXPECT_TRUE(c.constrained);

  AffineConvKernel zeros{1, 1, 2, {0, 0, 0, 0}, false};
  expect_values(Instance::from_values(affine_constrain(zeros).weights), {0.25, 0.25, 0.25, 0.25}, 0.0);

  Rng rng(9);
  const auto once = affine_constrain(AffineConvKernel::random(3, 2, 3, rng));
  const auto twice = affine_constrain(once);
  for (std::size_t i = 0; i < once.weights.size(); ++i) EXPECT_NEAR(once.weights[i], twice.weights[i], 1e-15);
  for (std::size_t o = 0; o < 3; ++o) EXPECT_NEAR(once.output_sum(o), 1.0, 1e-12);
}

TEST(AffineConv, ConstantFeaturesFixed) {
  Rng rng(10);
  const auto k = affine_constrain(AffineConvKernel::random(4, 2, 3, rng));
  const Instance c = Instance::constant(Shape{2, 5, 5}, 0.6);
  const Instance out = affine_conv(k, c);
  EXPECT_EQ(out.shape(), (Shape{4, 5, 5}));
  for (double v : out.values()) EXPECT_NEAR(v, 0.6, 1e-12);
  auto mislabeled = AffineConvKernel::random(1, 2, 3, rng);
  mislabeled.constrained = true;
  EXPECT_THROW(affine_conv(mislabeled, c), Error);
  EXPECT_THROW(affine_conv(k, Instance::constant(Shape{3, 5, 5}, 0.0)), Error);  // channel count
}

TEST(SortPool, Examples) {
  const auto [lo, hi] = sortpool(Instance::from_values({3}), Instance::from_values({1}));
  EXPECT_EQ(lo[0], 1.0);
  EXPECT_EQ(hi[0], 3.0);
  const auto [a, b] = sortpool(Instance::from_values({0.4}), Instance::from_values({0.4}));
  EXPECT_EQ(a[0], 0.4);
  EXPECT_EQ(b[0], 0.4);
  EXPECT_THROW(sortpool(Instance::from_values({1}), Instance::from_values({1, 2})), Error);
}

TEST(SortPool, CommutesWithIncreasingAffine) {
  Rng rng(11);
  for (int t = 0; t < 100; ++t) {
    const Instance u = random_instance(rng, Shape{1, 3, 3}, -1, 1);
    const Instance v = random_instance(rng, Shape{1, 3, 3}, -1, 1);
    const auto p = testing::random_probe(rng);
    const auto [lo, hi] = sortpool(affine(u, p.a, p.b), affine(v, p.a, p.b));
    const auto [lo0, hi0] = sortpool(u, v);
    EXPECT_LE(testing::max_abs_diff(lo, affine(lo0, p.a, p.b)), 1e-15);
    EXPECT_LE(testing::max_abs_diff(hi, affine(hi0, p.a, p.b)), 1e-15);
  }
}

TEST(SortPool, ChannelPairing) {
  // Channels [5, 1, 2, 7] (one pixel each); stage 0 pairs (0,1),(2,3).
  const Instance f(Shape{4, 1, 1}, {5, 1, 2, 7});
  expect_values(sortpool_channels(f, 0), {1, 5, 2, 7}, 0.0);
  // Stage 1 rotates by one first: [1, 2, 7, 5] then sorts pairs.
  expect_values(sortpool_channels(f, 1), {1, 2, 5, 7}, 0.0);
  EXPECT_THROW(sortpool_channels(Instance(Shape{3, 1, 1}, {1, 2, 3}), 0), Error);
}

TEST(AffineResidual, Examples) {
  const Instance l1 = Instance::from_values({0, 2});
  const Instance l2 = Instance::from_values({2, 0});
  EXPECT_EQ(affine_residual(l1, l2, 0.0), l1);
  EXPECT_EQ(affine_residual(l1, l2, 1.0), l2);
  expect_values(affine_residual(l1, l2, 0.5), {1, 1});
  EXPECT_THROW(affine_residual(l1, Instance::from_values({1}), 0.5), Error);
}

TEST(NeArchStack, CompositionPreservesNe) {
  Rng rng(12);
  for (int t = 0; t < 5; ++t) {
    const auto net = std::make_shared<NeArchStack>(NeArchStack::random(4, 3, rng));
    EXPECT_LE(max_defect(as_map(net), rng, Shape{1, 8, 8}, 20), 1e-9);
  }
}

TEST(Labels, HonestEquivarianceClasses) {
  Rng rng(13);
  NlmParams abs;
  abs.mode = NlmBandwidth::kAbsolute;
  abs.bandwidth = 0.1;
  const std::vector<BackbonePtr> all = {
      identity_backbone(),
      std::make_shared<UnitSumConv>(Stencil::separable({0.25, 0.5, 0.25})),
      std::make_shared<Nlm>(NlmParams{}),
      std::make_shared<NeArchStack>(NeArchStack::random(4, 3, rng)),
      std::make_shared<DctThreshold>(4, 0.1),
      std::make_shared<Nlm>(abs),
      PatchMlp(PatchMlpParams::random(4, 16, PredictionConvention::kClean, rng)).freeze(),
  };
  for (const auto& bb : all) {
    const auto eq = bb->info().equivariance;
    Rng probe_rng(99);
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
      const Instance y = affine(textured(8, 8), 1.0, rng.uniform(-0.1, 0.1));
      const auto p = testing::random_probe(probe_rng);
      worst = std::max(worst, ne_defect(as_map(bb), y, p.a, p.b));
    }
    if (eq == EquivarianceClass::kNormalization) {
      EXPECT_LE(worst, 1e-10) << bb->info().name;
    } else if (eq == EquivarianceClass::kNone) {
      EXPECT_GT(worst, 1e-3) << bb->info().name;
    }
  }
}

}  // namespace
}  // namespace nedenoise
