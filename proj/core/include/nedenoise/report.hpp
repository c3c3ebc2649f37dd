// Copyright 2026 The nedenoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "nedenoise/analysis.hpp"
#include "nedenoise/csv.hpp"
#include "nedenoise/sampler.hpp"

namespace nedenoise {

// CSV tables and matching SVG plots for every analysis artifact. Each plot
// is drawn from exactly the numbers in its table.

/// sigma_test,image,input_psnr,output_psnr,ssim; one row per (sigma, image).
CsvTable sweep_csv(const SweepResult& sweep, std::uint64_t seed);
/// Mean output PSNR against sigma_test, one line per labelled sweep.
std::string sweep_svg(const std::vector<std::pair<std::string, SweepResult>>& sweeps);

/// train_sigma followed by one column per test sigma, in percent.
CsvTable coverage_csv(const CoverageTable& table, std::uint64_t seed);
std::string coverage_svg(const CoverageTable& table);

/// sigma,bin_lo,bin_hi,count,q_mean,q_std.
CsvTable binned_csv(const BinnedCurve& curve, std::uint64_t seed);
/// Per-sigma mean Q over bins with samples that fall in the sigma's display range.
std::string binned_svg(const BinnedCurve& curve);

/// sigma,q_lo,q_hi,mean_delta,mean_delta_sq.
CsvTable delta_summary_csv(const std::vector<DeltaDistribution>& dists, std::uint64_t seed);
/// sigma,bin_lo,bin_hi,count.
CsvTable delta_histogram_csv(const std::vector<DeltaDistribution>& dists, std::uint64_t seed);
std::string delta_histogram_svg(const std::vector<DeltaDistribution>& dists);

struct DefectSummary {
  std::string map;
  std::vector<double> samples;
};
/// map,mean,median,max,probes.
CsvTable epsilon_ne_csv(const std::vector<DefectSummary>& rows, std::uint64_t seed);

/// step,loss.
CsvTable loss_csv(const std::vector<double>& losses, std::uint64_t seed);
std::string loss_svg(const std::vector<double>& losses);

/// t,sigma_hat,h,gamma,psnr with a footer carrying the stop reason and
/// the one-pass, best, final PSNR and gap.
CsvTable trajectory_csv(const Trajectory& traj, std::uint64_t seed);
std::string trajectory_svg(const Trajectory& traj);

/// index,row_sum plus a rho footer; filters as index,y,x,weight.
CsvTable jacobian_summary_csv(const JacobianReport& report, std::uint64_t seed);
CsvTable jacobian_filters_csv(const JacobianReport& report, std::uint64_t seed);

}  // namespace nedenoise
