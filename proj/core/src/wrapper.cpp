// Copyright 2026 The nedenoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "nedenoise/wrapper.hpp"

#include <cmath>

namespace nedenoise {

std::string_view to_string(WrapMode mode) {
  switch (mode) {
    case WrapMode::kNone:
      return "none";
    case WrapMode::kDirect:
      return "direct";
    case WrapMode::kResidual:
      return "residual";
    case WrapMode::kInputOnly:
      return "input-only";
  }
  return "none";
}

WrapMode parse_wrap_mode(std::string_view text) {
  if (text == "none") return WrapMode::kNone;
  if (text == "direct") return WrapMode::kDirect;
  if (text == "residual") return WrapMode::kResidual;
  if (text == "input-only" || text == "inputonly") return WrapMode::kInputOnly;
  throw Error("unknown wrap mode '" + std::string(text) + "'");
}

WrapStats wrap_stats(const Instance& y, double epsilon) {
  WrapStats ws;
  ws.raw = stats(y);
  ws.degenerate = ws.raw.std == 0.0;
  ws.std_used = epsilon > 0.0 ? ws.raw.std + epsilon : ws.raw.std;
  return ws;
}

Instance wrap_normalize(const Instance& y, const WrapStats& ws) {
  if (ws.degenerate) {
    return Instance::zeros(y.shape());
  }
  return matched_target(y, InstanceStats{ws.raw.mu, ws.std_used});
}

WrappedDenoiser::WrappedDenoiser(BackbonePtr backbone, WrapMode mode, double epsilon)
    : backbone_(std::move(backbone)), mode_(mode), epsilon_(epsilon) {
  if (!backbone_) {
    throw Error("wrapper: null backbone");
  }
  if (!(epsilon_ >= 0.0)) {
    throw Error("wrapper: epsilon must be >= 0");
  }
}

Instance WrappedDenoiser::apply(const Instance& y) const {
  if (mode_ == WrapMode::kNone) {
    return checked_denoise(*backbone_, y);
  }
  const WrapStats ws = wrap_stats(y, epsilon_);
  const Instance z = wrap_normalize(y, ws);
  switch (mode_) {
    case WrapMode::kDirect:
      if (ws.degenerate) {
        return Instance::constant(y.shape(), ws.raw.mu);
      }
      return affine(checked_denoise(*backbone_, z), ws.std_used, ws.raw.mu);
    case WrapMode::kResidual: {
      if (ws.degenerate) {
        return y;
      }
      const Instance h = checked_denoise(*backbone_, z);
      std::vector<double> out(y.size());
      for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = y[i] - ws.std_used * h[i];
      }
      return Instance(y.shape(), std::move(out));
    }
    case WrapMode::kInputOnly:
      return checked_denoise(*backbone_, z);
    case WrapMode::kNone:
      break;
  }
  return checked_denoise(*backbone_, y);
}

InstanceMap WrappedDenoiser::as_map() const {
  return [self = *this](const Instance& y) { return self.apply(y); };
}

BackbonePtr WrappedDenoiser::as_backbone() const {
  auto eq = EquivarianceClass::kUnknown;
  if ((mode_ == WrapMode::kDirect || mode_ == WrapMode::kResidual) && epsilon_ == 0.0) {
    eq = EquivarianceClass::kNormalization;
  } else if (mode_ == WrapMode::kNone) {
    eq = backbone_->info().equivariance;
  } else if (mode_ == WrapMode::kInputOnly) {
    eq = EquivarianceClass::kNone;
  }
  return make_backbone(std::string(to_string(mode_)) + "(" + backbone_->info().name + ")", eq, as_map());
}

BackbonePtr residual_to_direct(BackbonePtr h) {
  const std::string name = "direct_from_residual(" + h->info().name + ")";
  return make_backbone(name, EquivarianceClass::kUnknown,
                       [h = std::move(h)](const Instance& z) { return subtract(z, checked_denoise(*h, z)); });
}

BackbonePtr restrict_to_manifold(InstanceMap f, std::string name) {
  return make_backbone(std::move(name), EquivarianceClass::kUnknown, std::move(f));
}

double ne_defect(const InstanceMap& f, const Instance& y, double a, double b, double tau) {
  if (!(a > 0.0)) {
    throw Error("ne_defect: a must be positive");
  }
  const Instance lhs = f(affine(y, a, b));
  const Instance rhs = affine(f(y), a, b);
  return std::sqrt(squared_distance(lhs, rhs)) / (l2_norm(rhs) + tau);
}

}  // namespace nedenoise
