// Copyright 2026 The nedenoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "nedenoise/instance.hpp"
#include "nedenoise/rng.hpp"

namespace nedenoise::testing {

/// Uniform values on [lo, hi) with the given shape.
inline Instance random_instance(Rng& rng, Shape shape, double lo = 0.0, double hi = 1.0) {
  std::vector<double> v(shape.size());
  for (double& x : v) x = rng.uniform(lo, hi);
  return Instance(shape, std::move(v));
}

/// Random grayscale shape with sides in [min_side, max_side].
inline Shape random_shape(Rng& rng, std::size_t min_side, std::size_t max_side, std::size_t channels = 1) {
  const auto span = max_side - min_side + 1;
  return Shape{channels, min_side + static_cast<std::size_t>(rng.below(span)),
               min_side + static_cast<std::size_t>(rng.below(span))};
}

/// Random (a, b) probe over the standard defect ranges.
struct Probe {
  double a;
  double b;
};
inline Probe random_probe(Rng& rng) { return {rng.uniform(0.5, 1.5), rng.uniform(-0.25, 0.25)}; }

inline double max_abs_diff(const Instance& lhs, const Instance& rhs) {
  double m = 0.0;
  for (std::size_t i = 0; i < lhs.size(); ++i) m = std::max(m, std::abs(lhs[i] - rhs[i]));
  return m;
}

inline double rel_error(const Instance& got, const Instance& want) {
  return std::sqrt(squared_distance(got, want)) / std::max(l2_norm(want), 1e-300);
}

inline void expect_values(const Instance& got, const std::vector<double>& want, double tol = 1e-12) {
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(got[i], want[i], tol) << "index " << i;
}

}  // namespace nedenoise::testing
