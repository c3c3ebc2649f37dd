// Copyright 2026 The nedenoise Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <limits>

#include "nedenoise/instance.hpp"
#include "support.hpp"

namespace nedenoise {
namespace {

using testing::expect_values;
using testing::random_instance;
using testing::random_shape;

TEST(Stats, TwoValues) {
  const auto s = stats(Instance::from_values({1, 3}));
  EXPECT_DOUBLE_EQ(s.mu, 2.0);
  EXPECT_DOUBLE_EQ(s.std, 1.0);
}

TEST(Stats, ConstantHasZeroStd) {
  const auto s = stats(Instance::from_values({5, 5, 5}));
  EXPECT_DOUBLE_EQ(s.mu, 5.0);
  EXPECT_EQ(s.std, 0.0);
}

TEST(Stats, ConstantIsExactForAnyValue) {
  for (double c : {0.1, 0.3, -2.7, 1e-7}) {
    const auto s = stats(Instance::constant(Shape{1, 9, 9}, c));
    EXPECT_EQ(s.mu, c);
    EXPECT_EQ(s.std, 0.0);
  }
}

TEST(Stats, PopulationConvention) {
  const auto s = stats(Instance::from_values({0, 2, 4, 6}));
  EXPECT_DOUBLE_EQ(s.mu, 3.0);
  EXPECT_NEAR(s.std, std::sqrt(5.0), 1e-15);
}

TEST(Stats, PoolsAcrossChannels) {
  // Channel 0 = {0, 0}, channel 1 = {2, 2}: per-channel std would be zero.
  const Instance y(Shape{2, 1, 2}, {0, 0, 2, 2});
  const auto s = stats(y);
  EXPECT_DOUBLE_EQ(s.mu, 1.0);
  EXPECT_DOUBLE_EQ(s.std, 1.0);
}

TEST(Instance, RejectsNonFinite) {
  EXPECT_THROW(Instance::from_values({1.0, std::numeric_limits<double>::quiet_NaN()}), Error);
  EXPECT_THROW(Instance::from_values({std::numeric_limits<double>::infinity()}), Error);
  try {
    Instance::from_values({std::nan("")});
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("non-finite instance"), std::string::npos);
  }
}

TEST(Instance, RejectsEmptyAndMismatchedShape) {
  EXPECT_THROW(Instance(Shape{1, 0, 3}, {}), Error);
  EXPECT_THROW(Instance(Shape{1, 2, 2}, {1, 2, 3}), Error);
}

TEST(TNe, Examples) {
  const auto a = t_ne(Instance::from_values({1, 3}));
  expect_values(a.values, {-1, 1});
  EXPECT_DOUBLE_EQ(a.source.mu, 2.0);
  EXPECT_DOUBLE_EQ(a.source.std, 1.0);

  const auto b = t_ne(Instance::from_values({5, 5, 5}));
  expect_values(b.values, {0, 0, 0}, 0.0);
  EXPECT_DOUBLE_EQ(b.source.mu, 5.0);
  EXPECT_EQ(b.source.std, 0.0);

  const auto c = t_ne(Instance::from_values({0, 2, 4, 6}));
  const double r5 = std::sqrt(5.0);
  expect_values(c.values, {-3 / r5, -1 / r5, 1 / r5, 3 / r5}, 1e-15);
  EXPECT_NEAR(c.source.std, r5, 1e-15);
}

TEST(Denormalize, Examples) {
  expect_values(denormalize(Instance::from_values({-1, 1}), {2, 1}), {1, 3});
  expect_values(denormalize(Instance::from_values({0, 0}), {5, 0}), {5, 5});
  expect_values(denormalize(Instance::from_values({1, 1}), {0, 2}), {2, 2});
}

TEST(MatchedTarget, Examples) {
  expect_values(matched_target(Instance::from_values({0, 4}), {2, 2}), {-1, 1});
  expect_values(matched_target(Instance::from_values({3, 3}), {3, 1}), {0, 0});
  // Degenerate noisy statistics select the zero target.
  expect_values(matched_target(Instance::from_values({3, 7}), {5, 0}), {0, 0}, 0.0);
}

TEST(MatchedTarget, EqualsTNeWhenTargetIsInput) {
  Rng rng(11);
  const Instance y = random_instance(rng, Shape{1, 5, 7});
  const auto n = t_ne(y);
  EXPECT_EQ(matched_target(y, n.source), n.values);
}

TEST(Delta, Examples) {
  const Instance z = Instance::from_values({0.3, -0.2});
  EXPECT_EQ(delta(z, z), 0.0);
  EXPECT_DOUBLE_EQ(delta(Instance::from_values({1, 0}), Instance::from_values({0, 0})), 1.0);
  EXPECT_THROW(delta(Instance::from_values({1, 0}), Instance::from_values({0, 0, 0})), Error);
}

TEST(Delta, ApproachesRootDForLargeNoise) {
  Rng rng(5);
  const Shape shape{1, 16, 16};
  const Instance x = random_instance(rng, shape);
  double acc = 0.0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    std::vector<double> v(shape.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = x[i] + 1000.0 / 255.0 * rng.normal();
    const Instance y(shape, std::move(v));
    const auto n = t_ne(y);
    acc += delta(n.values, matched_target(x, n.source));
  }
  EXPECT_NEAR(acc / trials / 16.0, 1.0, 0.02);
}

// Properties over random instances, probes and shapes.

TEST(InstanceProperties, AffineIdentities) {
  Rng rng(101);
  for (int trial = 0; trial < 300; ++trial) {
    const Instance y = random_instance(rng, random_shape(rng, 1, 12, 1 + rng.below(3)), -2.0, 2.0);
    if (y.size() < 2) continue;
    const double a = rng.uniform(0.01, 50.0);
    const double b = rng.uniform(-10.0, 10.0);
    const auto s = stats(y);
    const auto t = stats(affine(y, a, b));
    EXPECT_NEAR(t.mu, a * s.mu + b, 1e-10 * std::max(1.0, std::abs(a * s.mu + b)));
    EXPECT_NEAR(t.std, a * s.std, 1e-10 * a * s.std);
    EXPECT_LE(testing::max_abs_diff(t_ne(affine(y, a, b)).values, t_ne(y).values), 1e-9);
  }
}

TEST(InstanceProperties, ManifoldRoundTripIdempotenceAndNorm) {
  Rng rng(202);
  for (int trial = 0; trial < 300; ++trial) {
    const Instance y = random_instance(rng, random_shape(rng, 2, 16), -1.0, 3.0);
    const auto n = t_ne(y);
    const auto m = stats(n.values);
    EXPECT_NEAR(m.mu, 0.0, 1e-10);
    EXPECT_NEAR(m.std, 1.0, 1e-10);
    EXPECT_LE(testing::rel_error(denormalize(n.values, n.source), y), 1e-10);
    EXPECT_LE(testing::max_abs_diff(t_ne(n.values).values, n.values), 1e-9);
    EXPECT_NEAR(l2_norm(n.values), std::sqrt(static_cast<double>(y.size())), 1e-9);
  }
}

TEST(InstanceProperties, StatsReproducible) {
  Rng rng(303);
  for (int trial = 0; trial < 50; ++trial) {
    const Instance y = random_instance(rng, random_shape(rng, 1, 20));
    const auto a = stats(y);
    const auto b = stats(Instance(y.shape(), y.data()));
    EXPECT_EQ(a.mu, b.mu);
    EXPECT_EQ(a.std, b.std);
  }
}

TEST(InstanceProperties, DeltaIsScaledNoise) {
  // Under additive noise, y_tilde - x_tilde = (y - x) / std(y) elementwise.
  Rng rng(404);
  for (int trial = 0; trial < 100; ++trial) {
    const Shape shape = random_shape(rng, 4, 16);
    const Instance x = random_instance(rng, shape);
    const Instance y = random_instance(rng, shape, -0.2, 1.2);
    const auto n = t_ne(y);
    const Instance d = subtract(n.values, matched_target(x, n.source));
    for (std::size_t i = 0; i < d.size(); ++i) {
      EXPECT_NEAR(d[i], (y[i] - x[i]) / n.source.std, 1e-12);
    }
  }
}

}  // namespace
}  // namespace nedenoise
