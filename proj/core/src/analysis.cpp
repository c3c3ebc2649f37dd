// Copyright 2026 The nedenoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "nedenoise/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nedenoise/corpus.hpp"
#include "nedenoise/metrics.hpp"
#include "nedenoise/parallel.hpp"
#include "nedenoise/rng.hpp"
#include "nedenoise/wrapper.hpp"

namespace nedenoise {

namespace {

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

const DeltaDistribution& find_sigma(const std::vector<DeltaDistribution>& dists, double sigma) {
  for (const auto& d : dists) {
    if (d.sigma == sigma) return d;
  }
  throw Error("coverage_table: no Delta samples for sigma " + std::to_string(sigma));
}

}  // namespace

double quantile(std::vector<double> samples, double p) {
  if (samples.empty()) {
    throw Error("quantile of an empty sample");
  }
  std::sort(samples.begin(), samples.end());
  const double pos = std::clamp(p, 0.0, 1.0) * static_cast<double>(samples.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, samples.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return samples[lo] + frac * (samples[hi] - samples[lo]);
}

std::vector<double> ne_defect_samples(const InstanceMap& f, const std::vector<Instance>& images, std::size_t trials,
                                      std::uint64_t seed) {
  if (trials == 0) {
    throw Error("epsilon_ne_sweep: trials must be >= 1");
  }
  const Rng root(seed);
  std::vector<double> out;
  out.reserve(images.size() * trials);
  for (std::size_t i = 0; i < images.size(); ++i) {
    Rng rng = root.substream(i);
    for (std::size_t t = 0; t < trials; ++t) {
      const double a = rng.uniform(0.5, 1.5);
      const double b = rng.uniform(-0.25, 0.25);
      out.push_back(ne_defect(f, images[i], a, b));
    }
  }
  return out;
}

double epsilon_ne_sweep(const InstanceMap& f, const std::vector<Instance>& images, std::size_t trials,
                        std::uint64_t seed) {
  return mean_of(ne_defect_samples(f, images, trials, seed));
}

double difficulty(const Instance& x, const Instance& y) {
  const NormalizedInstance yt = t_ne(y);
  return delta(yt.values, matched_target(x, yt.source));
}

std::vector<DeltaDistribution> delta_stats(const std::vector<Instance>& corpus, const std::vector<double>& sigmas,
                                           std::size_t n_patches, std::size_t patch_size, std::uint64_t seed,
                                           std::size_t histogram_bins) {
  if (n_patches < 1000) {
    throw Error("delta_stats: need at least 1000 patches per sigma");
  }
  const Rng root(seed);
  const Rng patch_root = root.substream(0);
  std::vector<Instance> patches;
  patches.reserve(n_patches);
  for (std::size_t i = 0; i < n_patches; ++i) {
    Rng rng = patch_root.substream(i);
    patches.push_back(sample_patch(corpus, patch_size, rng));
  }
  const double root_d = std::sqrt(static_cast<double>(patches.front().size()));
  std::vector<DeltaDistribution> out;
  for (std::size_t s = 0; s < sigmas.size(); ++s) {
    DeltaDistribution dist;
    dist.sigma = sigmas[s];
    dist.samples.reserve(n_patches);
    Rng noise_rng = root.substream(1 + s);
    const NoiseModel noise{NoiseKind::kGaussian, sigmas[s]};
    for (const auto& x : patches) {
      dist.samples.push_back(difficulty(x, corrupt(x, noise, noise_rng)));
    }
    dist.q_lo = quantile(dist.samples, 0.025);
    dist.q_hi = quantile(dist.samples, 0.975);
    dist.mean_delta = mean_of(dist.samples);
    double sq = 0.0;
    for (double v : dist.samples) sq += v * v;
    dist.mean_delta_sq = sq / static_cast<double>(dist.samples.size());
    dist.histogram.lo = 0.0;
    dist.histogram.hi = 1.25 * root_d;
    dist.histogram.counts.assign(histogram_bins, 0);
    const double width = (dist.histogram.hi - dist.histogram.lo) / static_cast<double>(histogram_bins);
    for (double v : dist.samples) {
      auto k = static_cast<std::size_t>((v - dist.histogram.lo) / width);
      dist.histogram.counts[std::min(k, histogram_bins - 1)]++;
    }
    out.push_back(std::move(dist));
  }
  return out;
}

double CoverageTable::at(double train_sigma, double test_sigma) const {
  for (std::size_t i = 0; i < train_sigmas.size(); ++i) {
    if (train_sigmas[i] != train_sigma) continue;
    for (std::size_t j = 0; j < test_sigmas.size(); ++j) {
      if (test_sigmas[j] == test_sigma) return percent[i][j];
    }
  }
  throw Error("coverage table has no entry for the requested sigmas");
}

CoverageTable coverage_table(const std::vector<DeltaDistribution>& distributions,
                             const std::vector<double>& train_sigmas, const std::vector<double>& test_sigmas) {
  CoverageTable table;
  table.train_sigmas = train_sigmas;
  table.test_sigmas = test_sigmas;
  for (double tr : train_sigmas) {
    const auto& train = find_sigma(distributions, tr);
    table.intervals.emplace_back(train.q_lo, train.q_hi);
    std::vector<double> row;
    for (double te : test_sigmas) {
      const auto& test = find_sigma(distributions, te);
      const auto inside = std::count_if(test.samples.begin(), test.samples.end(),
                                        [&](double v) { return v >= train.q_lo && v <= train.q_hi; });
      row.push_back(100.0 * static_cast<double>(inside) / static_cast<double>(test.samples.size()));
    }
    table.percent.push_back(std::move(row));
  }
  return table;
}

BinnedCurve q_vs_delta(const InstanceMap& model, const std::vector<Instance>& corpus,
                       const std::vector<double>& sigmas, std::size_t bins, std::size_t n_patches,
                       std::size_t patch_size, std::uint64_t seed, std::size_t threads) {
  if (bins < 5) {
    throw Error("q_vs_delta: need at least 5 bins");
  }
  struct Sample {
    double delta = 0.0;
    double q = 0.0;
    bool valid = false;
  };
  const Rng root(seed);
  std::vector<std::vector<Sample>> per_sigma(sigmas.size(), std::vector<Sample>(n_patches));
  parallel_for(sigmas.size() * n_patches, threads, [&](std::size_t task) {
    const std::size_t s = task / n_patches;
    const std::size_t i = task % n_patches;
    Rng rng = root.substream(s).substream(i);
    const Instance x = sample_patch(corpus, patch_size, rng);
    const Instance y = corrupt(x, NoiseModel{NoiseKind::kGaussian, sigmas[s]}, rng);
    const InstanceStats st = stats(y);
    if (st.std == 0.0) return;
    const Instance x_tilde = matched_target(x, st);
    const Instance y_tilde = t_ne(y).values;
    const Instance rewritten = matched_target(model(y), st);
    per_sigma[s][i] = Sample{delta(y_tilde, x_tilde), q_value(rewritten, x_tilde), true};
  });

  std::vector<double> pooled;
  for (const auto& v : per_sigma)
    for (const auto& smp : v)
      if (smp.valid) pooled.push_back(smp.delta);
  if (pooled.empty()) {
    throw Error("q_vs_delta: no valid samples");
  }
  const double lo = quantile(pooled, 0.005);
  double hi = quantile(pooled, 0.995);
  if (hi <= lo) hi = lo + 1e-12;
  BinnedCurve curve;
  curve.edges.resize(bins + 1);
  for (std::size_t k = 0; k <= bins; ++k) {
    curve.edges[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(bins);
  }
  const double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t s = 0; s < sigmas.size(); ++s) {
    BinnedSeries series;
    series.sigma = sigmas[s];
    series.count.assign(bins, 0);
    series.q_mean.assign(bins, 0.0);
    series.q_std.assign(bins, 0.0);
    std::vector<double> sum(bins, 0.0);
    std::vector<double> sum_sq(bins, 0.0);
    std::vector<double> own;
    for (const auto& smp : per_sigma[s]) {
      if (!smp.valid) continue;
      own.push_back(smp.delta);
      if (smp.delta < lo || smp.delta > hi) continue;
      const std::size_t k = std::min(static_cast<std::size_t>((smp.delta - lo) / width), bins - 1);
      series.count[k]++;
      sum[k] += smp.q;
      sum_sq[k] += smp.q * smp.q;
    }
    for (std::size_t k = 0; k < bins; ++k) {
      if (series.count[k] == 0) continue;
      const double n = static_cast<double>(series.count[k]);
      series.q_mean[k] = sum[k] / n;
      series.q_std[k] = std::sqrt(std::max(0.0, sum_sq[k] / n - series.q_mean[k] * series.q_mean[k]));
    }
    if (!own.empty()) {
      series.display_lo = quantile(own, 0.025);
      series.display_hi = quantile(own, 0.975);
    }
    curve.series.push_back(std::move(series));
  }
  return curve;
}

double max_cross_sigma_gap(const BinnedCurve& curve, std::size_t min_count) {
  double gap = 0.0;
  for (std::size_t k = 0; k < curve.bins(); ++k) {
    const double center = 0.5 * (curve.edges[k] + curve.edges[k + 1]);
    double q_min = 0.0;
    double q_max = 0.0;
    std::size_t members = 0;
    for (const auto& s : curve.series) {
      if (s.count[k] < min_count || center < s.display_lo || center > s.display_hi) continue;
      if (members == 0) {
        q_min = q_max = s.q_mean[k];
      } else {
        q_min = std::min(q_min, s.q_mean[k]);
        q_max = std::max(q_max, s.q_mean[k]);
      }
      ++members;
    }
    if (members >= 2) gap = std::max(gap, q_max - q_min);
  }
  return gap;
}

JacobianReport jacobian_rows(const InstanceMap& f, const Instance& y, std::span<const std::size_t> row_indices,
                             double step) {
  const std::size_t d = y.size();
  for (std::size_t r : row_indices) {
    if (r >= d) throw Error("jacobian_rows: row index out of range");
  }
  const Instance fy = f(y);
  if (fy.shape() != y.shape()) {
    throw Error("jacobian_rows: map is not shape-preserving");
  }
  std::vector<double> jy(d, 0.0);
  std::vector<std::vector<double>> rows(row_indices.size(), std::vector<double>(d, 0.0));
  std::vector<double> probe = y.data();
  for (std::size_t j = 0; j < d; ++j) {
    const double orig = probe[j];
    probe[j] = orig + step;
    const Instance plus = f(Instance(y.shape(), probe));
    probe[j] = orig - step;
    const Instance minus = f(Instance(y.shape(), probe));
    probe[j] = orig;
    for (std::size_t i = 0; i < d; ++i) {
      const double col = (plus[i] - minus[i]) / (2.0 * step);
      jy[i] += col * orig;
    }
    for (std::size_t r = 0; r < row_indices.size(); ++r) {
      const std::size_t i = row_indices[r];
      rows[r][j] = (plus[i] - minus[i]) / (2.0 * step);
    }
  }
  JacobianReport report;
  double num = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double e = fy[i] - jy[i];
    num += e * e;
  }
  report.rho = std::sqrt(num) / l2_norm(fy);
  for (std::size_t r = 0; r < row_indices.size(); ++r) {
    const double sum = std::accumulate(rows[r].begin(), rows[r].end(), 0.0);
    report.rows.push_back(JacobianRow{row_indices[r], Instance(y.shape(), std::move(rows[r])), sum});
  }
  return report;
}

SweepResult mismatch_sweep(const InstanceMap& model, const std::vector<Instance>& images,
                           const std::vector<double>& sigma_tests, std::uint64_t seed, NoiseKind noise,
                           std::size_t threads) {
  const Rng root(seed);
  const std::size_t n = images.size();
  SweepResult result;
  result.rows.resize(sigma_tests.size());
  for (std::size_t s = 0; s < sigma_tests.size(); ++s) {
    auto& row = result.rows[s];
    row.sigma_test = sigma_tests[s];
    row.input_psnr.assign(n, 0.0);
    row.output_psnr.assign(n, 0.0);
    row.output_ssim.assign(n, 0.0);
  }
  parallel_for(sigma_tests.size() * n, threads, [&](std::size_t task) {
    const std::size_t s = task / n;
    const std::size_t i = task % n;
    Rng rng = root.substream(s).substream(i);
    const Instance& x = images[i];
    const Instance y = corrupt(x, NoiseModel{noise, sigma_tests[s]}, rng);
    const Instance xhat = model(y);
    auto& row = result.rows[s];
    row.input_psnr[i] = psnr(y, x);
    row.output_psnr[i] = psnr(xhat, x);
    row.output_ssim[i] = ssim(xhat, x);
  });
  for (auto& row : result.rows) {
    row.input_psnr_mean = mean_of(row.input_psnr);
    row.output_psnr_mean = mean_of(row.output_psnr);
    row.output_ssim_mean = mean_of(row.output_ssim);
  }
  return result;
}

}  // namespace nedenoise
