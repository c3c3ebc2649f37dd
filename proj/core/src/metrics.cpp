// Copyright 2026 The nedenoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "nedenoise/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace nedenoise {

namespace {

constexpr std::size_t kWindow = 11;
constexpr double kWindowSigma = 1.5;
constexpr double kC1 = (0.01 * 1.0) * (0.01 * 1.0);
constexpr double kC2 = (0.03 * 1.0) * (0.03 * 1.0);

std::array<double, kWindow> gaussian_window() {
  std::array<double, kWindow> w{};
  double sum = 0.0;
  const double c = (kWindow - 1) / 2.0;
  for (std::size_t i = 0; i < kWindow; ++i) {
    const double t = static_cast<double>(i) - c;
    w[i] = std::exp(-t * t / (2.0 * kWindowSigma * kWindowSigma));
    sum += w[i];
  }
  for (double& v : w) v /= sum;
  return w;
}

// Separable 'valid' filtering of an h x w plane.
std::vector<double> filter_valid(const std::vector<double>& plane, std::size_t h, std::size_t w,
                                 const std::array<double, kWindow>& k) {
  const std::size_t ow = w - kWindow + 1;
  const std::size_t oh = h - kWindow + 1;
  std::vector<double> tmp(h * ow);
  for (std::size_t y = 0; y < h; ++y)
    for (std::size_t x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (std::size_t j = 0; j < kWindow; ++j) acc += k[j] * plane[y * w + x + j];
      tmp[y * ow + x] = acc;
    }
  std::vector<double> out(oh * ow);
  for (std::size_t y = 0; y < oh; ++y)
    for (std::size_t x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (std::size_t i = 0; i < kWindow; ++i) acc += k[i] * tmp[(y + i) * ow + x];
      out[y * ow + x] = acc;
    }
  return out;
}

double capped_db(double ratio) {
  if (ratio <= 0.0 || !std::isfinite(ratio)) {
    return kQualityCap;
  }
  return std::min(kQualityCap, 10.0 * std::log10(ratio));
}

}  // namespace

double psnr(const Instance& xhat, const Instance& x, double dynamic_range) {
  if (!(dynamic_range > 0.0)) {
    throw Error("psnr: dynamic range must be positive");
  }
  const double err = squared_distance(xhat, x);
  if (err == 0.0) {
    return kQualityCap;
  }
  const double d = static_cast<double>(x.size());
  return capped_db(d * dynamic_range * dynamic_range / err);
}

double ssim(const Instance& xhat, const Instance& x) {
  require_same_shape(xhat, x, "ssim");
  const Shape& s = x.shape();
  if (s.channels != 1) {
    throw Error("ssim: grayscale instances only");
  }
  if (s.height < kWindow || s.width < kWindow) {
    throw Error("ssim: image " + to_string(s) + " smaller than the 11x11 window");
  }
  const auto k = gaussian_window();
  const std::vector<double>& a = xhat.data();
  const std::vector<double>& b = x.data();
  std::vector<double> aa(a.size()), bb(a.size()), ab(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    aa[i] = a[i] * a[i];
    bb[i] = b[i] * b[i];
    ab[i] = a[i] * b[i];
  }
  const auto mu_a = filter_valid(a, s.height, s.width, k);
  const auto mu_b = filter_valid(b, s.height, s.width, k);
  const auto e_aa = filter_valid(aa, s.height, s.width, k);
  const auto e_bb = filter_valid(bb, s.height, s.width, k);
  const auto e_ab = filter_valid(ab, s.height, s.width, k);
  double acc = 0.0;
  for (std::size_t i = 0; i < mu_a.size(); ++i) {
    const double ma = mu_a[i];
    const double mb = mu_b[i];
    const double va = e_aa[i] - ma * ma;
    const double vb = e_bb[i] - mb * mb;
    const double cov = e_ab[i] - ma * mb;
    acc += ((2.0 * ma * mb + kC1) * (2.0 * cov + kC2)) / ((ma * ma + mb * mb + kC1) * (va + vb + kC2));
  }
  return acc / static_cast<double>(mu_a.size());
}

double q_value(const Instance& g_out, const Instance& x_tilde) {
  const double err = squared_distance(g_out, x_tilde);
  if (err == 0.0) {
    return kQualityCap;
  }
  return std::min(kQualityCap, -10.0 * std::log10(err));
}

}  // namespace nedenoise
