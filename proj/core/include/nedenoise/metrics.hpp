// Copyright 2026 The nedenoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "nedenoise/instance.hpp"

namespace nedenoise {

/// Value reported for an exact match instead of +infinity.
inline constexpr double kQualityCap = 300.0;

/// 10 log10(d R^2 / ||xhat - x||^2) in dB, capped at kQualityCap.
double psnr(const Instance& xhat, const Instance& x, double dynamic_range = 1.0);

/// Mean SSIM over the valid region of an 11x11 Gaussian window
/// (sigma 1.5, K1 = 0.01, K2 = 0.03, dynamic range 1). Grayscale only.
double ssim(const Instance& xhat, const Instance& x);

/// -10 log10 ||g_out - x_tilde||^2, capped at kQualityCap.
double q_value(const Instance& g_out, const Instance& x_tilde);

}  // namespace nedenoise
