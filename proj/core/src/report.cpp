// Copyright 2026 The nedenoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "nedenoise/report.hpp"

#include <cmath>
#include <limits>

#include "nedenoise/svg.hpp"

namespace nedenoise {

namespace {

std::string opt_number(const std::optional<double>& v) { return v ? format_number(*v) : "nan"; }

}  // namespace

CsvTable sweep_csv(const SweepResult& sweep, std::uint64_t seed) {
  CsvTable t({"sigma_test", "image", "input_psnr", "output_psnr", "ssim"}, seed);
  for (const auto& row : sweep.rows) {
    for (std::size_t i = 0; i < row.output_psnr.size(); ++i) {
      t.row(std::vector<double>{row.sigma_test, static_cast<double>(i), row.input_psnr[i], row.output_psnr[i],
                                row.output_ssim[i]});
    }
  }
  return t;
}

std::string sweep_svg(const std::vector<std::pair<std::string, SweepResult>>& sweeps) {
  std::vector<LineSeries> series;
  for (const auto& [label, sweep] : sweeps) {
    LineSeries s{label, {}, {}};
    for (const auto& row : sweep.rows) {
      s.x.push_back(row.sigma_test);
      s.y.push_back(row.output_psnr_mean);
    }
    series.push_back(std::move(s));
  }
  return svg_line_plot(series, {"Output PSNR versus test noise level", "sigma_test", "PSNR (dB)"});
}

CsvTable coverage_csv(const CoverageTable& table, std::uint64_t seed) {
  std::vector<std::string> header{"train_sigma"};
  for (double s : table.test_sigmas) header.push_back("test_" + format_number(s));
  CsvTable t(header, seed);
  for (std::size_t i = 0; i < table.train_sigmas.size(); ++i) {
    std::vector<double> row{table.train_sigmas[i]};
    row.insert(row.end(), table.percent[i].begin(), table.percent[i].end());
    t.row(row);
  }
  return t;
}

std::string coverage_svg(const CoverageTable& table) {
  std::vector<std::string> rows;
  std::vector<std::string> cols;
  for (double s : table.train_sigmas) rows.push_back("train " + format_number(s));
  for (double s : table.test_sigmas) cols.push_back(format_number(s));
  return svg_heatmap(table.percent, rows, cols, {"Coverage (%)", "test sigma", "training sigma"});
}

CsvTable binned_csv(const BinnedCurve& curve, std::uint64_t seed) {
  CsvTable t({"sigma", "bin_lo", "bin_hi", "count", "q_mean", "q_std"}, seed);
  for (const auto& s : curve.series) {
    for (std::size_t k = 0; k < curve.bins(); ++k) {
      t.row(std::vector<double>{s.sigma, curve.edges[k], curve.edges[k + 1], static_cast<double>(s.count[k]),
                                s.q_mean[k], s.q_std[k]});
    }
  }
  return t;
}

std::string binned_svg(const BinnedCurve& curve) {
  std::vector<LineSeries> series;
  for (const auto& s : curve.series) {
    LineSeries line{"sigma " + format_number(s.sigma), {}, {}};
    for (std::size_t k = 0; k < curve.bins(); ++k) {
      const double c = 0.5 * (curve.edges[k] + curve.edges[k + 1]);
      if (s.count[k] == 0 || c < s.display_lo || c > s.display_hi) continue;
      line.x.push_back(c);
      line.y.push_back(s.q_mean[k]);
    }
    series.push_back(std::move(line));
  }
  return svg_line_plot(series, {"Normalized error versus difficulty", "Delta", "Q (dB)"});
}

CsvTable delta_summary_csv(const std::vector<DeltaDistribution>& dists, std::uint64_t seed) {
  CsvTable t({"sigma", "q_lo", "q_hi", "mean_delta", "mean_delta_sq"}, seed);
  for (const auto& d : dists) t.row(std::vector<double>{d.sigma, d.q_lo, d.q_hi, d.mean_delta, d.mean_delta_sq});
  return t;
}

CsvTable delta_histogram_csv(const std::vector<DeltaDistribution>& dists, std::uint64_t seed) {
  CsvTable t({"sigma", "bin_lo", "bin_hi", "count"}, seed);
  for (const auto& d : dists) {
    const auto& h = d.histogram;
    const double w = (h.hi - h.lo) / static_cast<double>(h.counts.size());
    for (std::size_t k = 0; k < h.counts.size(); ++k) {
      t.row(std::vector<double>{d.sigma, h.lo + w * static_cast<double>(k), h.lo + w * static_cast<double>(k + 1),
                                static_cast<double>(h.counts[k])});
    }
  }
  return t;
}

std::string delta_histogram_svg(const std::vector<DeltaDistribution>& dists) {
  std::vector<LineSeries> series;
  for (const auto& d : dists) {
    const auto& h = d.histogram;
    const double w = (h.hi - h.lo) / static_cast<double>(h.counts.size());
    LineSeries line{"sigma " + format_number(d.sigma), {}, {}};
    for (std::size_t k = 0; k < h.counts.size(); ++k) {
      line.x.push_back(h.lo + w * (static_cast<double>(k) + 0.5));
      line.y.push_back(static_cast<double>(h.counts[k]));
    }
    series.push_back(std::move(line));
  }
  return svg_line_plot(series, {"Difficulty histograms", "Delta", "count"});
}

CsvTable epsilon_ne_csv(const std::vector<DefectSummary>& rows, std::uint64_t seed) {
  CsvTable t({"map", "mean", "median", "max", "probes"}, seed);
  for (const auto& r : rows) {
    double mean = 0.0;
    double mx = 0.0;
    for (double v : r.samples) {
      mean += v;
      mx = std::max(mx, v);
    }
    const double n = static_cast<double>(r.samples.size());
    const double median = r.samples.empty() ? std::numeric_limits<double>::quiet_NaN() : quantile(r.samples, 0.5);
    t.row({r.map, format_number(n > 0 ? mean / n : std::numeric_limits<double>::quiet_NaN()), format_number(median),
           format_number(mx), std::to_string(r.samples.size())});
  }
  return t;
}

CsvTable loss_csv(const std::vector<double>& losses, std::uint64_t seed) {
  CsvTable t({"step", "loss"}, seed);
  for (std::size_t i = 0; i < losses.size(); ++i) t.row(std::vector<double>{static_cast<double>(i + 1), losses[i]});
  return t;
}

std::string loss_svg(const std::vector<double>& losses) {
  LineSeries s{"loss", {}, {}};
  for (std::size_t i = 0; i < losses.size(); ++i) {
    s.x.push_back(static_cast<double>(i + 1));
    s.y.push_back(losses[i]);
  }
  return svg_line_plot({s}, {"Training loss", "step", "batch loss"});
}

CsvTable trajectory_csv(const Trajectory& traj, std::uint64_t seed) {
  CsvTable t({"t", "sigma_hat", "h", "gamma", "psnr"}, seed);
  for (const auto& r : traj.records) {
    t.row(std::vector<double>{static_cast<double>(r.t), r.sigma_hat, r.h, r.gamma, r.psnr});
  }
  t.footer("stop", std::string(to_string(traj.stop)));
  t.footer("one_pass_psnr", opt_number(traj.one_pass_psnr));
  t.footer("best_psnr", opt_number(traj.best_psnr));
  t.footer("final_psnr", opt_number(traj.final_psnr));
  t.footer("gap", opt_number(traj.gap));
  return t;
}

std::string trajectory_svg(const Trajectory& traj) {
  LineSeries sig{"sigma_hat x 255", {}, {}};
  LineSeries q{"PSNR (dB)", {}, {}};
  for (const auto& r : traj.records) {
    sig.x.push_back(static_cast<double>(r.t));
    sig.y.push_back(r.sigma_hat * 255.0);
    q.x.push_back(static_cast<double>(r.t));
    q.y.push_back(r.psnr);
  }
  return svg_line_plot({sig, q}, {"Sampler trajectory", "iteration", "value"});
}

CsvTable jacobian_summary_csv(const JacobianReport& report, std::uint64_t seed) {
  CsvTable t({"index", "row_sum"}, seed);
  for (const auto& r : report.rows) t.row(std::vector<double>{static_cast<double>(r.index), r.row_sum});
  t.footer("rho", format_number(report.rho));
  return t;
}

CsvTable jacobian_filters_csv(const JacobianReport& report, std::uint64_t seed) {
  CsvTable t({"index", "y", "x", "weight"}, seed);
  for (const auto& r : report.rows) {
    const Shape& s = r.filter.shape();
    for (std::size_t y = 0; y < s.height; ++y)
      for (std::size_t x = 0; x < s.width; ++x)
        t.row(std::vector<double>{static_cast<double>(r.index), static_cast<double>(y), static_cast<double>(x),
                                  r.filter.at(0, y, x)});
  }
  return t;
}

}  // namespace nedenoise
