// Copyright 2026 The nedenoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "nedenoise/backbone.hpp"

namespace nedenoise {

std::string_view to_string(EquivarianceClass c) {
  switch (c) {
    case EquivarianceClass::kNormalization:
      return "NE";
    case EquivarianceClass::kScaleOnly:
      return "SE-only";
    case EquivarianceClass::kNone:
      return "none";
    case EquivarianceClass::kUnknown:
      break;
  }
  return "unknown";
}

BackbonePtr make_backbone(std::string name, EquivarianceClass equivariance, InstanceMap fn) {
  return std::make_shared<FunctionBackbone>(BackboneInfo{std::move(name), equivariance}, std::move(fn));
}

BackbonePtr identity_backbone() {
  return make_backbone("identity", EquivarianceClass::kNormalization, [](const Instance& z) { return z; });
}

BackbonePtr zero_backbone() {
  // Zero is scale-equivariant but not shift-equivariant.
  return make_backbone("zero", EquivarianceClass::kScaleOnly,
                       [](const Instance& z) { return Instance::zeros(z.shape()); });
}

Instance checked_denoise(const Backbone& backbone, const Instance& z) {
  Instance out = backbone.denoise(z);
  if (out.shape() != z.shape()) {
    throw Error("backbone not shape-preserving: " + backbone.info().name + " mapped " + to_string(z.shape()) +
                " to " + to_string(out.shape()));
  }
  return out;
}

InstanceMap as_map(BackbonePtr backbone) {
  return [b = std::move(backbone)](const Instance& z) { return checked_denoise(*b, z); };
}

std::ptrdiff_t reflect_index(std::ptrdiff_t i, std::ptrdiff_t n) {
  if (n == 1) {
    return 0;
  }
  const std::ptrdiff_t period = 2 * (n - 1);
  i %= period;
  if (i < 0) {
    i += period;
  }
  return i < n ? i : period - i;
}

}  // namespace nedenoise
