// Copyright 2026 The nedenoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string_view>

#include "nedenoise/backbone.hpp"

namespace nedenoise {

enum class WrapMode {
  kNone,       // g(y)
  kDirect,     // std(y) g(T(y)) + mu(y) 1
  kResidual,   // y - std(y) h(T(y))
  kInputOnly,  // g(T(y)), no denormalization
};

std::string_view to_string(WrapMode mode);
/// Parses "none", "direct", "residual" or "input-only".
WrapMode parse_wrap_mode(std::string_view text);

inline constexpr double kDefaultEpsilon = 1e-5;

/// Statistics actually used by the wrapper for one input: `std_used` is
/// std(y) + epsilon (or std(y) when epsilon is 0), and `degenerate` marks
/// the exact-constant guardrail branch.
struct WrapStats {
  InstanceStats raw;
  double std_used = 0.0;
  bool degenerate = false;
};

WrapStats wrap_stats(const Instance& y, double epsilon);

/// (y - mu 1) / std_used, or zero on the guardrail branch.
Instance wrap_normalize(const Instance& y, const WrapStats& ws);

/// Backbone plus wrapping mode.
///
/// With epsilon = 0 this is the ideal wrapper, with T(y) = 0 and output
/// mu(y) 1 on constant inputs. With epsilon > 0 the scale is std(y) + epsilon;
/// the exact-constant guardrail still applies. Outputs are never clamped.
class WrappedDenoiser {
 public:
  WrappedDenoiser(BackbonePtr backbone, WrapMode mode, double epsilon = kDefaultEpsilon);

  [[nodiscard]] Instance apply(const Instance& y) const;
  Instance operator()(const Instance& y) const { return apply(y); }

  [[nodiscard]] const BackbonePtr& backbone() const noexcept { return backbone_; }
  [[nodiscard]] WrapMode mode() const noexcept { return mode_; }
  [[nodiscard]] double epsilon() const noexcept { return epsilon_; }

  [[nodiscard]] InstanceMap as_map() const;
  /// The wrapped map as a Backbone; Direct and Residual report NE when
  /// epsilon is 0.
  [[nodiscard]] BackbonePtr as_backbone() const;

 private:
  BackbonePtr backbone_;
  WrapMode mode_;
  double epsilon_;
};

/// z -> z - h(z). Direct-wrapping the result equals Residual-wrapping h.
BackbonePtr residual_to_direct(BackbonePtr h);

/// Restriction of an instance map to the normalized manifold, usable as a
/// backbone. For an NE map f, Direct-wrapping the restriction reproduces f.
BackbonePtr restrict_to_manifold(InstanceMap f, std::string name = "restriction");

inline constexpr double kDefectTau = 1e-8;

/// ||f(ay + b1) - (a f(y) + b1)|| / (||a f(y) + b1|| + tau).
double ne_defect(const InstanceMap& f, const Instance& y, double a, double b, double tau = kDefectTau);

}  // namespace nedenoise
