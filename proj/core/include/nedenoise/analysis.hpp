// Copyright 2026 The nedenoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "nedenoise/backbone.hpp"
#include "nedenoise/noise.hpp"

namespace nedenoise {

/// Empirical p-quantile with linear interpolation between order statistics.
double quantile(std::vector<double> samples, double p);

// ---------------------------------------------------------------------------
// Equivariance defect

/// ne_defect for every (image, trial) with a ~ U(0.5, 1.5), b ~ U(-0.25, 0.25).
std::vector<double> ne_defect_samples(const InstanceMap& f, const std::vector<Instance>& images, std::size_t trials,
                                      std::uint64_t seed);

/// Mean of ne_defect_samples.
double epsilon_ne_sweep(const InstanceMap& f, const std::vector<Instance>& images, std::size_t trials,
                        std::uint64_t seed);

// ---------------------------------------------------------------------------
// Difficulty distributions

/// ||T(y) - (x - mu(y) 1) / std(y)||.
double difficulty(const Instance& x, const Instance& y);

struct Histogram {
  double lo = 0.0;
  double hi = 1.0;
  std::vector<std::size_t> counts;
};

struct DeltaDistribution {
  double sigma = 0.0;
  std::vector<double> samples;
  double q_lo = 0.0;  // 2.5% quantile
  double q_hi = 0.0;  // 97.5% quantile
  double mean_delta = 0.0;
  double mean_delta_sq = 0.0;
  Histogram histogram;
};

/// Samples Delta on `n_patches` AWGN-corrupted patch_size x patch_size
/// patches per sigma (8-bit units). Patch i is the same clean patch for
/// every sigma; noise streams are independent.
std::vector<DeltaDistribution> delta_stats(const std::vector<Instance>& corpus, const std::vector<double>& sigmas,
                                           std::size_t n_patches, std::size_t patch_size, std::uint64_t seed,
                                           std::size_t histogram_bins = 50);

struct CoverageTable {
  std::vector<double> train_sigmas;
  std::vector<double> test_sigmas;
  /// Central 95% interval per training sigma.
  std::vector<std::pair<double, double>> intervals;
  /// percent[i][j] = m(test_sigmas[j]; train_sigmas[i]) in [0, 100].
  std::vector<std::vector<double>> percent;

  [[nodiscard]] double at(double train_sigma, double test_sigma) const;
};

/// Fraction (percent) of each test sigma's samples inside each train
/// sigma's central 95% interval. Every requested sigma must be present.
CoverageTable coverage_table(const std::vector<DeltaDistribution>& distributions,
                             const std::vector<double>& train_sigmas, const std::vector<double>& test_sigmas);

// ---------------------------------------------------------------------------
// Normalized error versus difficulty

struct BinnedSeries {
  double sigma = 0.0;
  std::vector<std::size_t> count;
  std::vector<double> q_mean;
  std::vector<double> q_std;
  /// Central 95% of this sigma's own Delta distribution.
  double display_lo = 0.0;
  double display_hi = 0.0;
};

struct BinnedCurve {
  std::vector<double> edges;  // bins + 1 ascending edges
  std::vector<BinnedSeries> series;

  [[nodiscard]] std::size_t bins() const noexcept { return edges.empty() ? 0 : edges.size() - 1; }
};

/// For each sigma, draws `n_patches` corrupted patches, re-expresses the
/// model output in the input's (mu, std) coordinates, and bins
/// Q = -10 log10 ||(f(y) - mu 1)/std - x_tilde||^2 by Delta. Bins are
/// fixed-width over the pooled central 99% Delta range.
BinnedCurve q_vs_delta(const InstanceMap& model, const std::vector<Instance>& corpus,
                       const std::vector<double>& sigmas, std::size_t bins, std::size_t n_patches,
                       std::size_t patch_size, std::uint64_t seed, std::size_t threads = 1);

/// Largest spread of per-bin mean Q across sigmas, over bins whose center
/// lies inside at least two series' display ranges with >= min_count
/// samples each. Zero when no bin qualifies.
double max_cross_sigma_gap(const BinnedCurve& curve, std::size_t min_count = 20);

// ---------------------------------------------------------------------------
// Jacobian rows and Euler residual

inline constexpr double kFiniteDifferenceStep = 1e-4;

struct JacobianRow {
  std::size_t index = 0;
  Instance filter;  // row reshaped to the input grid
  double row_sum = 0.0;
};

struct JacobianReport {
  std::vector<JacobianRow> rows;
  /// ||f(y) - J y|| / ||f(y)||, with the full central-difference Jacobian.
  double rho = 0.0;
};

JacobianReport jacobian_rows(const InstanceMap& f, const Instance& y, std::span<const std::size_t> row_indices,
                             double step = kFiniteDifferenceStep);

// ---------------------------------------------------------------------------
// Noise-level mismatch sweep

struct SweepRow {
  double sigma_test = 0.0;
  double input_psnr_mean = 0.0;
  double output_psnr_mean = 0.0;
  double output_ssim_mean = 0.0;
  std::vector<double> input_psnr;
  std::vector<double> output_psnr;
  std::vector<double> output_ssim;
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

/// Corrupts every image at every sigma_test (noise stream keyed by image
/// index), denoises and records PSNR/SSIM. Images must be at least 11x11.
SweepResult mismatch_sweep(const InstanceMap& model, const std::vector<Instance>& images,
                           const std::vector<double>& sigma_tests, std::uint64_t seed,
                           NoiseKind noise = NoiseKind::kGaussian, std::size_t threads = 1);

}  // namespace nedenoise
