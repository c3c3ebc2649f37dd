// Copyright 2026 The nedenoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>

#include "nedenoise/instance.hpp"

namespace nedenoise {

/// Which affine group a map is known to commute with.
enum class EquivarianceClass {
  kNormalization,  // f(ay + b1) = a f(y) + b1
  kScaleOnly,      // f(ay) = a f(y)
  kNone,
  kUnknown,
};

std::string_view to_string(EquivarianceClass c);

struct BackboneInfo {
  std::string name;
  EquivarianceClass equivariance = EquivarianceClass::kUnknown;
};

/// A shape-preserving, deterministic denoising map.
class Backbone {
 public:
  virtual ~Backbone() = default;

  [[nodiscard]] virtual Instance denoise(const Instance& z) const = 0;
  [[nodiscard]] virtual BackboneInfo info() const = 0;

  Instance operator()(const Instance& z) const { return denoise(z); }
};

using BackbonePtr = std::shared_ptr<const Backbone>;
using InstanceMap = std::function<Instance(const Instance&)>;

/// Adapts a callable into a Backbone with the given descriptor.
class FunctionBackbone final : public Backbone {
 public:
  FunctionBackbone(BackboneInfo info, InstanceMap fn) : info_(std::move(info)), fn_(std::move(fn)) {}

  Instance denoise(const Instance& z) const override { return fn_(z); }
  BackboneInfo info() const override { return info_; }

 private:
  BackboneInfo info_;
  InstanceMap fn_;
};

BackbonePtr make_backbone(std::string name, EquivarianceClass equivariance, InstanceMap fn);
BackbonePtr identity_backbone();
BackbonePtr zero_backbone();

/// Calls the backbone and checks that it preserved the input shape.
Instance checked_denoise(const Backbone& backbone, const Instance& z);

InstanceMap as_map(BackbonePtr backbone);

/// Reflect (mirror without edge repeat) index into [0, n).
std::ptrdiff_t reflect_index(std::ptrdiff_t i, std::ptrdiff_t n);

}  // namespace nedenoise
