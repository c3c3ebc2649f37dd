// Copyright 2026 The nedenoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "nedenoise/instance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nedenoise {

std::string to_string(const Shape& shape) {
  return "(" + std::to_string(shape.channels) + "," + std::to_string(shape.height) + "," +
         std::to_string(shape.width) + ")";
}

Instance::Instance(Shape shape, std::vector<double> values) : shape_(shape), values_(std::move(values)) {
  if (shape_.size() == 0) {
    throw Error("empty instance shape " + to_string(shape_));
  }
  if (values_.size() != shape_.size()) {
    throw Error("instance has " + std::to_string(values_.size()) + " values but shape " + to_string(shape_));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw Error("non-finite instance");
    }
  }
}

Instance Instance::from_values(std::vector<double> values) {
  const Shape shape{1, 1, values.size()};
  return Instance(shape, std::move(values));
}

Instance Instance::constant(Shape shape, double value) {
  return Instance(shape, std::vector<double>(shape.size(), value));
}

InstanceStats stats(const Instance& y) {
  const auto v = y.values();
  const double d = static_cast<double>(v.size());
  if (std::all_of(v.begin(), v.end(), [&](double x) { return x == v[0]; })) {
    return {v[0], 0.0};  // exact for constants; summation would round
  }
  const double mu = std::accumulate(v.begin(), v.end(), 0.0) / d;
  double ss = 0.0;
  for (double x : v) {
    const double c = x - mu;
    ss += c * c;
  }
  const InstanceStats s{mu, std::sqrt(ss / d)};
  if (!std::isfinite(s.mu) || !std::isfinite(s.std)) {
    throw Error("non-finite instance");
  }
  return s;
}

NormalizedInstance t_ne(const Instance& y) {
  const InstanceStats s = stats(y);
  if (s.std == 0.0) {
    return {Instance::zeros(y.shape()), s};
  }
  std::vector<double> z(y.size());
  const auto v = y.values();
  for (std::size_t i = 0; i < z.size(); ++i) {
    z[i] = (v[i] - s.mu) / s.std;
  }
  return {Instance(y.shape(), std::move(z)), s};
}

Instance denormalize(const Instance& z, const InstanceStats& s) {
  if (!std::isfinite(s.mu) || !std::isfinite(s.std)) {
    throw Error("denormalize: non-finite statistics");
  }
  return affine(z, s.std, s.mu);
}

Instance matched_target(const Instance& x, const InstanceStats& s) {
  if (s.std == 0.0) {
    return Instance::zeros(x.shape());
  }
  std::vector<double> out(x.size());
  const auto v = x.values();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = (v[i] - s.mu) / s.std;
  }
  return Instance(x.shape(), std::move(out));
}

double delta(const Instance& y_tilde, const Instance& x_tilde) {
  require_same_shape(y_tilde, x_tilde, "delta");
  return std::sqrt(squared_distance(y_tilde, x_tilde));
}

Instance affine(const Instance& y, double a, double b) {
  std::vector<double> out(y.size());
  const auto v = y.values();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = a * v[i] + b;
  }
  return Instance(y.shape(), std::move(out));
}

Instance add(const Instance& lhs, const Instance& rhs) {
  require_same_shape(lhs, rhs, "add");
  std::vector<double> out(lhs.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = lhs[i] + rhs[i];
  }
  return Instance(lhs.shape(), std::move(out));
}

Instance subtract(const Instance& lhs, const Instance& rhs) {
  require_same_shape(lhs, rhs, "subtract");
  std::vector<double> out(lhs.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = lhs[i] - rhs[i];
  }
  return Instance(lhs.shape(), std::move(out));
}

double squared_distance(const Instance& lhs, const Instance& rhs) {
  require_same_shape(lhs, rhs, "squared_distance");
  double acc = 0.0;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    const double e = lhs[i] - rhs[i];
    acc += e * e;
  }
  return acc;
}

double l2_norm(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) {
    acc += x * x;
  }
  return std::sqrt(acc);
}

double l2_norm(const Instance& y) { return l2_norm(y.values()); }

void require_same_shape(const Instance& lhs, const Instance& rhs, const char* what) {
  if (lhs.shape() != rhs.shape()) {
    throw Error(std::string(what) + ": shape mismatch " + to_string(lhs.shape()) + " vs " + to_string(rhs.shape()));
  }
}

}  // namespace nedenoise
