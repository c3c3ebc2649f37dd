// Copyright 2026 The nedenoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nedenoise {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Channel-major (C, H, W) extent of an instance.
struct Shape {
  std::size_t channels = 1;
  std::size_t height = 1;
  std::size_t width = 1;

  [[nodiscard]] constexpr std::size_t size() const noexcept { return channels * height * width; }
  [[nodiscard]] constexpr std::size_t plane() const noexcept { return height * width; }
  friend constexpr bool operator==(const Shape&, const Shape&) = default;
};

std::string to_string(const Shape& shape);

/// An image or patch viewed as a flat vector of d = C*H*W doubles.
///
/// Instances are immutable values. Every constructor validates that the
/// extent is non-empty, matches the value count and that all values are
/// finite; operations return new instances.
class Instance {
 public:
  Instance(Shape shape, std::vector<double> values);

  /// A single-channel row vector, handy for small examples.
  static Instance from_values(std::vector<double> values);
  static Instance constant(Shape shape, double value);
  static Instance zeros(Shape shape) { return constant(shape, 0.0); }

  [[nodiscard]] const Shape& shape() const noexcept { return shape_; }
  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }
  [[nodiscard]] double at(std::size_t c, std::size_t y, std::size_t x) const {
    return values_[(c * shape_.height + y) * shape_.width + x];
  }
  [[nodiscard]] const std::vector<double>& data() const noexcept { return values_; }

  friend bool operator==(const Instance&, const Instance&) = default;

 private:
  Shape shape_;
  std::vector<double> values_;
};

/// Pooled mean and (population) standard deviation of one instance.
struct InstanceStats {
  double mu = 0.0;
  double std = 0.0;
};

/// Output of the normalization map together with the statistics that
/// produced it, so callers can invert the transform.
struct NormalizedInstance {
  Instance values;
  InstanceStats source;
};

/// mu = mean over all entries, std = ||y - mu 1|| / sqrt(d). Never per channel.
InstanceStats stats(const Instance& y);

/// (y - mu 1) / std, or the zero instance when std(y) == 0 exactly.
NormalizedInstance t_ne(const Instance& y);

/// s.std * z + s.mu * 1.
Instance denormalize(const Instance& z, const InstanceStats& s);

/// Clean target expressed in the noisy instance's coordinates,
/// (x - s.mu 1) / s.std, or zero when s.std == 0.
Instance matched_target(const Instance& x, const InstanceStats& s);

/// Euclidean distance between normalized input and normalized target.
double delta(const Instance& y_tilde, const Instance& x_tilde);

// Elementwise helpers shared across modules.

/// a * y + b * 1.
Instance affine(const Instance& y, double a, double b);
Instance add(const Instance& lhs, const Instance& rhs);
Instance subtract(const Instance& lhs, const Instance& rhs);
double squared_distance(const Instance& lhs, const Instance& rhs);
double l2_norm(const Instance& y);
double l2_norm(std::span<const double> v);

void require_same_shape(const Instance& lhs, const Instance& rhs, const char* what);

}  // namespace nedenoise
