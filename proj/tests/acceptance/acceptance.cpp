// Copyright 2026 The nedenoise Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite: one PASS/FAIL line per criterion. Criteria 7 and 10
// train models end to end through the command-line entry point.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

#include "cli.hpp"
#include "nedenoise/analysis.hpp"
#include "nedenoise/classical.hpp"
#include "nedenoise/config.hpp"
#include "nedenoise/corpus.hpp"
#include "nedenoise/csv.hpp"
#include "nedenoise/metrics.hpp"
#include "nedenoise/ne_layers.hpp"
#include "nedenoise/noise.hpp"
#include "nedenoise/patch_models.hpp"
#include "nedenoise/sampler.hpp"
#include "nedenoise/training.hpp"
#include "nedenoise/wrapper.hpp"

namespace {

using namespace nedenoise;
namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  std::string id;
  std::string name;
  double budget_seconds;
  std::function<Outcome()> check;
};

fs::path g_work;

std::string fmt(const char* pattern, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c, d);
  return buf;
}

Instance random_instance(Rng& rng, Shape shape) {
  std::vector<double> v(shape.size());
  for (double& x : v) x = rng.uniform();
  return Instance(shape, std::move(v));
}

Shape random_shape(Rng& rng, std::size_t lo, std::size_t hi) {
  return Shape{1, lo + rng.below(hi - lo + 1), lo + rng.below(hi - lo + 1)};
}

std::vector<std::pair<std::string, BackbonePtr>> library_backbones(Rng& rng) {
  std::vector<double> k(5);
  for (double& v : k) v = rng.uniform(-0.5, 1.0);
  NlmParams absolute;
  absolute.mode = NlmBandwidth::kAbsolute;
  absolute.bandwidth = 0.1;
  PatchLinear linear = PatchLinear::zeros(4);
  for (double& v : linear.parameters()) v = rng.uniform(-0.3, 0.3);
  return {
      {"identity", identity_backbone()},
      {"box", std::make_shared<UnitSumConv>(Stencil::separable({1.0 / 3, 1.0 / 3, 1.0 / 3}))},
      {"conv", std::make_shared<Conv2d>(Stencil::separable(k))},
      {"dct_threshold", std::make_shared<DctThreshold>(4, 0.1)},
      {"nlm", std::make_shared<Nlm>(NlmParams{})},
      {"nlm_absolute", std::make_shared<Nlm>(absolute)},
      {"patch_mlp_residual", PatchMlp(PatchMlpParams::random(4, 16, PredictionConvention::kResidual, rng)).freeze()},
      {"patch_mlp_clean", PatchMlp(PatchMlpParams::random(4, 16, PredictionConvention::kClean, rng)).freeze()},
      {"patch_linear", linear.freeze()},
      {"ne_arch", std::make_shared<NeArchStack>(NeArchStack::random(4, 3, rng))},
  };
}

// ---------------------------------------------------------------------------
// 1. Exact NE of wrapped maps

Outcome exact_ne() {
  Rng rng(101);
  const auto backbones = library_backbones(rng);
  double worst = 0.0;
  std::string worst_name;
  std::size_t probes = 0;
  for (const auto& [name, bb] : backbones) {
    for (auto mode : {WrapMode::kDirect, WrapMode::kResidual}) {
      const InstanceMap f = WrappedDenoiser(bb, mode, 0.0).as_map();
      Rng pr = rng.substream(probes);
      for (int t = 0; t < 1000; ++t) {
        const Instance y = random_instance(pr, random_shape(pr, 8, 16));
        const double a = pr.uniform(0.5, 1.5);
        const double b = pr.uniform(-0.25, 0.25);
        const double e = ne_defect(f, y, a, b);
        if (!(e <= worst)) {
          worst = e;
          worst_name = name + "/" + std::string(to_string(mode));
        }
        ++probes;
      }
    }
  }
  return {worst <= 1e-10, fmt("max ne_defect %.3g over %.0f probes, %.0f backbones x 2 modes", worst,
                              static_cast<double>(probes), static_cast<double>(backbones.size())) +
                              " (worst " + worst_name + ")"};
}

// ---------------------------------------------------------------------------
// 2. Characterization identities

Outcome characterization() {
  Rng rng(202);
  double round_trip = 0.0;
  double norm_err = 0.0;
  double rewrap = 0.0;
  double constant = 0.0;
  const auto backbones = library_backbones(rng);
  for (int t = 0; t < 1000; ++t) {
    const Instance y = affine(random_instance(rng, random_shape(rng, 4, 16)), rng.uniform(0.01, 3), rng.uniform(-1, 1));
    const auto n = t_ne(y);
    const Instance back = denormalize(n.values, n.source);
    round_trip = std::max(round_trip, std::sqrt(squared_distance(back, y)) / l2_norm(y));
    const double root_d = std::sqrt(static_cast<double>(y.size()));
    norm_err = std::max(norm_err, std::abs(l2_norm(n.values) - root_d));
  }
  for (const auto& [name, bb] : backbones) {
    for (auto mode : {WrapMode::kDirect, WrapMode::kResidual}) {
      const WrappedDenoiser f(bb, mode, 0.0);
      const Instance c = Instance::constant(Shape{1, 9, 9}, rng.uniform(-1, 2));
      constant = std::max(constant, std::sqrt(squared_distance(f(c), c)));
      const WrappedDenoiser again(restrict_to_manifold(f.as_map()), WrapMode::kDirect, 0.0);
      for (int t = 0; t < 20; ++t) {
        const Instance y = random_instance(rng, random_shape(rng, 8, 12));
        const Instance fy = f(y);
        rewrap = std::max(rewrap, std::sqrt(squared_distance(again(y), fy)) / l2_norm(fy));
      }
    }
  }
  const bool pass = round_trip <= 1e-10 && constant == 0.0 && rewrap <= 1e-10 && norm_err <= 1e-9;
  return {pass, fmt("round trip %.2g rel, constant error %.2g, rewrap %.2g rel, | ||z|| - sqrt(d) | %.2g", round_trip,
                    constant, rewrap, norm_err)};
}

// ---------------------------------------------------------------------------
// 3. Loss and PSNR decomposition

Outcome decomposition() {
  Rng rng(303);
  const auto backbones = library_backbones(rng);
  double mse_err = 0.0;
  double psnr_err = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const auto& bb = backbones[t % backbones.size()].second;
    const Instance x = random_instance(rng, random_shape(rng, 8, 16));
    const Instance y = affine(random_instance(rng, x.shape()), rng.uniform(0.05, 2), rng.uniform(-0.5, 0.5));
    const Instance out = WrappedDenoiser(bb, WrapMode::kDirect, 0.0)(y);
    const auto n = t_ne(y);
    const Instance g = bb->denoise(n.values);
    const Instance x_tilde = matched_target(x, n.source);
    const double raw = squared_distance(out, x);
    const double normalized = squared_distance(g, x_tilde);
    mse_err = std::max(mse_err, std::abs(raw - n.source.std * n.source.std * normalized) / raw);
    const double d = static_cast<double>(x.size());
    const double three = 10 * std::log10(d) - 20 * std::log10(n.source.std) + q_value(g, x_tilde);
    psnr_err = std::max(psnr_err, std::abs(psnr(out, x) - three));
  }
  return {mse_err <= 1e-10 && psnr_err <= 1e-9,
          fmt("raw vs std^2 normalized MSE %.2g rel, three-term PSNR %.2g dB over 1000 pairs", mse_err, psnr_err)};
}

// ---------------------------------------------------------------------------
// 4. Delta geometry

Outcome delta_geometry() {
  Rng rng(404);
  double delta_err = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const Instance x = random_instance(rng, random_shape(rng, 4, 16));
    const Instance y = affine(random_instance(rng, x.shape()), rng.uniform(0.1, 2), rng.uniform(-1, 1));
    const auto n = t_ne(y);
    const Instance lhs = subtract(n.values, matched_target(x, n.source));
    const Instance rhs = affine(subtract(y, x), 1.0 / n.source.std, 0.0);
    for (std::size_t i = 0; i < lhs.size(); ++i) delta_err = std::max(delta_err, std::abs(lhs[i] - rhs[i]));
  }
  const auto clean = images_of(generate_corpus(100, 64, CorpusMix{}, 405));
  const double d = 4096.0;
  std::string slices;
  bool slices_ok = true;
  for (double snr : {0.25, 1.0, 4.0}) {
    const double sx = 0.1;
    const double sn = sx / std::sqrt(snr);
    double acc = 0.0;
    Rng nr = rng.substream(static_cast<std::uint64_t>(snr * 100));
    for (const auto& img : clean) {
      const auto s = stats(img);
      const Instance x = affine(img, sx / s.std, 0.5 - s.mu * sx / s.std);
      std::vector<double> y(x.size());
      for (std::size_t i = 0; i < y.size(); ++i) y[i] = x[i] + sn * nr.normal();
      const double dl = difficulty(x, Instance(x.shape(), std::move(y)));
      acc += dl * dl;
    }
    const double mean = acc / static_cast<double>(clean.size());
    const double want = d / (1.0 + snr);
    const double rel = std::abs(mean / want - 1.0);
    slices_ok = slices_ok && rel <= 0.05;
    slices += fmt(" SNR %.2g: %.4g vs %.4g;", snr, mean, want);
  }
  double big = 0.0;
  Rng nr = rng.substream(999);
  for (const auto& x : clean) big += difficulty(x, corrupt(x, NoiseModel{NoiseKind::kGaussian, 1000.0}, nr));
  big /= static_cast<double>(clean.size());
  const double big_rel = std::abs(big / std::sqrt(d) - 1.0);
  return {delta_err <= 1e-12 && slices_ok && big_rel <= 0.02,
          fmt("delta identity %.2g;", delta_err) + slices + fmt(" sigma=1000: Delta/sqrt(d) = %.4f", big / std::sqrt(d))};
}

// ---------------------------------------------------------------------------
// 5. Coverage asymmetry

Outcome coverage() {
  const std::vector<double> sigmas = {10, 20, 30, 40, 50};
  const auto corpus = images_of(generate_corpus(64, 64, CorpusMix{}, 0));
  const auto table = coverage_table(delta_stats(corpus, sigmas, 100000, 8, 0), sigmas, sigmas);
  bool diag_ok = true;
  double diag_lo = 100.0;
  double diag_hi = 0.0;
  for (double s : sigmas) {
    const double m = table.at(s, s);
    diag_lo = std::min(diag_lo, m);
    diag_hi = std::max(diag_hi, m);
    diag_ok = diag_ok && std::abs(m - 95.0) <= 1.0;
  }
  const double low_covers_high = table.at(10, 50);
  const double high_covers_low = table.at(50, 10);
  return {diag_ok && low_covers_high > high_covers_low,
          fmt("diagonal in [%.2f, %.2f]; m(50; train 10) = %.2f > m(10; train 50) = %.2f", diag_lo, diag_hi,
              low_covers_high, high_covers_low)};
}

// ---------------------------------------------------------------------------
// 6. Gradient oracle

Outcome gradient_oracle() {
  Rng rng(606);
  double worst = 0.0;
  for (int probe = 0; probe < 10; ++probe) {
    PatchMlp model(PatchMlpParams::random(8, 16, probe % 2 ? PredictionConvention::kClean
                                                           : PredictionConvention::kResidual, rng));
    const Shape shape{1, 16, 16};
    const TrainingPair pair{random_instance(rng, shape), random_instance(rng, shape)};
    for (auto wrap : {WrapMode::kNone, WrapMode::kDirect}) {
      std::vector<double> grad(model.parameters().size(), 0.0);
      loss_and_gradient(model, pair, wrap, 0.0, LossKind::kMse, grad);
      auto params = model.parameters();
      std::vector<double> scratch(params.size());
      double num = 0.0;
      double den = 0.0;
      for (std::size_t k = 0; k < params.size(); ++k) {
        const double orig = params[k];
        const double h = 1e-5;
        params[k] = orig + h;
        const double up = loss_and_gradient(model, pair, wrap, 0.0, LossKind::kMse, scratch);
        params[k] = orig - h;
        const double down = loss_and_gradient(model, pair, wrap, 0.0, LossKind::kMse, scratch);
        params[k] = orig;
        const double fd = (up - down) / (2 * h);
        num += (grad[k] - fd) * (grad[k] - fd);
        den += fd * fd;
      }
      worst = std::max(worst, std::sqrt(num / den));
    }
  }
  return {worst <= 1e-4, fmt("max relative gradient error %.3g over 10 probes x {bare, direct}", worst)};
}

// ---------------------------------------------------------------------------
// CLI helpers for end-to-end criteria

void cli_or_throw(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  if (cli::run(args, out, err) != cli::kExitOk) {
    std::string joined;
    for (const auto& a : args) joined += a + " ";
    throw std::runtime_error("command failed: " + joined + "\n" + err.str());
  }
}

std::map<std::string, std::string> footers(const fs::path& csv) {
  std::map<std::string, std::string> out;
  std::istringstream in(read_text(csv));
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("# ", 0) != 0) continue;
    const auto eq = line.find('=');
    if (eq != std::string::npos) out[line.substr(2, eq - 2)] = line.substr(eq + 1);
  }
  return out;
}

std::string train_once(const std::string& tag, const std::vector<std::string>& extra) {
  const fs::path dir = g_work / tag;
  if (!fs::exists(dir / "model.ckpt")) {
    std::vector<std::string> args = {"train", "--run_dir", dir.string()};
    args.insert(args.end(), extra.begin(), extra.end());
    cli_or_throw(args);
  }
  return (dir / "model.ckpt").string();
}

// ---------------------------------------------------------------------------
// 7. Mismatch trend

Outcome mismatch_trend() {
  std::map<std::string, std::map<double, double>> mean;
  for (const char* wrap : {"none", "direct"}) {
    const std::string ckpt = train_once(std::string("c7-") + wrap, {"--sigma_train", "10", "--hidden", "64", "--tile", "8",
                                                                   "--steps", "20000", "--seed", "7", "--wrap", wrap});
    const fs::path dir = g_work / (std::string("c7-sweep-") + wrap);
    fs::remove_all(dir);
    cli_or_throw({"sweep", "--checkpoint", ckpt, "--wrap", wrap, "--epsilon", "1e-05", "--test_count", "32",
                  "--sigma_tests", "10,50", "--run_dir", dir.string()});
    const auto rows = parse_csv(read_text(dir / "sweep.csv"));
    std::map<double, std::pair<double, int>> acc;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      auto& a = acc[parse_double(rows[i][0], "sigma")];
      a.first += parse_double(rows[i][3], "psnr");
      ++a.second;
    }
    for (const auto& [s, a] : acc) mean[wrap][s] = a.first / a.second;
  }
  const double gain50 = mean["direct"][50] - mean["none"][50];
  const double diff10 = std::abs(mean["direct"][10] - mean["none"][10]);
  return {gain50 >= 1.0 && diff10 <= 0.5,
          fmt("sigma_test 50: wrapped %.2f vs bare %.2f dB; sigma_test 10: wrapped %.2f vs bare %.2f dB",
              mean["direct"][50], mean["none"][50], mean["direct"][10], mean["none"][10])};
}

// ---------------------------------------------------------------------------
// 8. Euler identity and adaptive filters

Outcome adaptive_filters() {
  Rng rng(808);
  std::vector<double> k(3);
  for (double& v : k) v = rng.uniform(-0.2, 0.8);
  PatchLinear linear = PatchLinear::zeros(4);
  for (double& v : linear.parameters()) v = rng.uniform(-0.1, 0.1);
  const std::vector<std::pair<std::string, BackbonePtr>> linear_backbones = {
      {"box", std::make_shared<UnitSumConv>(Stencil::separable({0.25, 0.5, 0.25}))},
      {"conv", std::make_shared<Conv2d>(Stencil::separable(k))},
      {"patch_linear", linear.freeze()},
  };
  const auto images = images_of(generate_corpus(2, 32, CorpusMix{}, 809));
  double rho = 0.0;
  double row_err = 0.0;
  for (const auto& [name, bb] : linear_backbones) {
    const InstanceMap f = WrappedDenoiser(bb, WrapMode::kDirect, 0.0).as_map();
    for (const auto& x : images) {
      const Instance y = corrupt(x, NoiseModel{NoiseKind::kGaussian, 25.0}, rng);
      const std::vector<std::size_t> rows = {0, 31, 16 * 32 + 16, 1023};
      const auto rep = jacobian_rows(f, y, rows);
      rho = std::max(rho, rep.rho);
      for (const auto& r : rep.rows) row_err = std::max(row_err, std::abs(r.row_sum - 1.0));
    }
  }
  return {rho <= 1e-5 && row_err <= 1e-4,
          fmt("max rho %.3g, max |row sum - 1| %.3g on 32x32 instances (box, conv, patch_linear)", rho, row_err)};
}

// ---------------------------------------------------------------------------
// 9. Sampler identities

Outcome sampler_identities() {
  Rng rng(909);
  const InstanceMap denoiser =
      WrappedDenoiser(std::make_shared<UnitSumConv>(Stencil::separable({0.25, 0.5, 0.25})), WrapMode::kDirect)
          .as_map();
  const auto images = images_of(generate_corpus(4, 32, CorpusMix{}, 910));
  bool gamma_zero = true;
  bool full_projector = true;
  bool consistent = true;
  for (const auto& x : images) {
    Rng r1 = rng.substream(1);
    const Instance y0 = corrupt(x, NoiseModel{NoiseKind::kGaussian, 10.0}, r1);
    const auto traj = residual_stop_denoise(denoiser, y0, residual_stop_config(), r1, x);
    for (const auto& rec : traj.records) gamma_zero = gamma_zero && rec.gamma == 0.0;
    SamplerConfig beta_one;
    beta_one.beta = 1.0;
    beta_one.t_max = 200;
    const Projector half = make_inpainting_mask(x.shape(), 0.5, r1);
    for (const auto& rec : sampler_run(denoiser, half, half.apply(x), beta_one, r1).records) {
      gamma_zero = gamma_zero && rec.gamma == 0.0;
    }
    SamplerConfig cfg;
    cfg.t_max = 200;
    full_projector = full_projector && sampler_run(denoiser, Projector::ones(x.shape()), x, cfg, r1).x_hat == x;
    for (double f : {0.05, 0.1, 0.3}) {
      const Projector p = make_inpainting_mask(x.shape(), f, r1);
      const Instance xc = p.apply(x);
      consistent = consistent && p.apply(sampler_run(denoiser, p, xc, cfg, r1).x_hat) == xc;
    }
  }
  SamplerConfig cfg;
  double h_err = 0.0;
  h_err = std::max(h_err, std::abs(cfg.step_size(1) - 0.01));
  h_err = std::max(h_err, std::abs(cfg.step_size(10) - 0.1 / 1.09));
  h_err = std::max(h_err, std::abs(cfg.step_size(100) - 1.0 / 1.99));
  return {gamma_zero && full_projector && consistent && h_err <= 1e-12,
          std::string("beta=1 gamma=0: ") + (gamma_zero ? "yes" : "no") + ", P=I bitwise: " +
              (full_projector ? "yes" : "no") + ", P x_hat = x_c bitwise: " + (consistent ? "yes" : "no") +
              fmt(", h schedule error %.2g", h_err)};
}

// ---------------------------------------------------------------------------
// 10. Inpainting and residual-stop reuse

Outcome reuse_trend() {
  constexpr int kImages = 12;
  struct Totals {
    double inpaint_final = 0.0;
    double observed = 0.0;
    double abs_gap = 0.0;
    int diverged = 0;
  };
  std::map<std::string, Totals> totals;
  for (const char* wrap : {"direct", "none"}) {
    const std::string ckpt =
        train_once(std::string("c10-") + wrap,
                   {"--wrap", wrap, "--sigma_train", "10", "--objective", "n2n", "--seed", "7", "--hidden", "128",
                    "--corpus_count", "1024", "--schedule", "halve", "--steps", "20000"});
    auto& t = totals[wrap];
    for (int i = 0; i < kImages; ++i) {
      const std::vector<std::string> common = {"--checkpoint", ckpt, "--wrap", wrap, "--image_index", std::to_string(i),
                                               "--test_count", std::to_string(kImages), "--seed", "11"};
      const fs::path den = g_work / ("c10-denoise-" + std::string(wrap) + std::to_string(i));
      fs::remove_all(den);
      std::vector<std::string> args = {"sample", "denoise", "--run_dir", den.string()};
      args.insert(args.end(), common.begin(), common.end());
      cli_or_throw(args);
      t.abs_gap += std::abs(parse_double(footers(den / "trajectory.csv").at("gap"), "gap"));

      const fs::path inp = g_work / ("c10-inpaint-" + std::string(wrap) + std::to_string(i));
      fs::remove_all(inp);
      args = {"sample", "inpaint", "--fraction", "0.1", "--sigma0", "1", "--sigmaL", "0.01", "--h0", "0.01",
              "--beta", "0.01", "--run_dir", inp.string()};
      args.insert(args.end(), common.begin(), common.end());
      std::ostringstream out;
      std::ostringstream err;
      if (cli::run(args, out, err) != cli::kExitOk) {
        // A run whose state overflows counts as the worst possible reconstruction.
        if (err.str().find("non-finite state") == std::string::npos) throw std::runtime_error(err.str());
        t.inpaint_final = -std::numeric_limits<double>::infinity();
        ++t.diverged;
        continue;
      }
      const auto f = footers(inp / "trajectory.csv");
      t.inpaint_final += parse_double(f.at("final_psnr"), "final");
      t.observed += parse_double(f.at("one_pass_psnr"), "observed");
    }
  }
  const auto& w = totals["direct"];
  const auto& b = totals["none"];
  const double wf = w.inpaint_final / kImages;
  const double bf = b.inpaint_final / kImages;
  const double obs = w.observed / kImages;
  const double wg = w.abs_gap / kImages;
  const double bg = b.abs_gap / kImages;
  const bool pass = w.diverged == 0 && wf > bf && wf > obs && wg < bg;
  return {pass, fmt("inpaint final PSNR wrapped %.2f vs unwrapped %.4g dB, observed projection %.2f dB; ", wf, bf, obs) +
                    fmt("mean |gap| wrapped %.2f vs unwrapped %.2f dB over 12 images", wg, bg) +
                    (b.diverged ? fmt(" (unwrapped overflowed on %.0f)", b.diverged) : std::string())};
}

// ---------------------------------------------------------------------------
// 11. epsilon_NE ordering

Outcome epsilon_ordering() {
  const std::string trained = train_once("c11-softne", {"--steps", "5000", "--softne", "true", "--sigma_train", "10",
                                                        "--seed", "7"});
  const std::string untrained = train_once("c11-untrained", {"--steps", "0", "--seed", "7"});
  const auto images = images_of(generate_corpus(16, 64, CorpusMix{}, 8));
  const BackbonePtr soft = PatchMlp(load_checkpoint(trained)).freeze();
  const BackbonePtr raw = PatchMlp(load_checkpoint(untrained)).freeze();
  const auto wrapped = ne_defect_samples(WrappedDenoiser(soft, WrapMode::kDirect, 0.0).as_map(), images, 10, 7);
  const double wrapped_max = *std::max_element(wrapped.begin(), wrapped.end());
  const double soft_mean = epsilon_ne_sweep(as_map(soft), images, 10, 7);
  const double raw_mean = epsilon_ne_sweep(as_map(raw), images, 10, 7);
  return {wrapped_max <= 1e-10 && wrapped_max < soft_mean && soft_mean < raw_mean,
          fmt("wrapped max %.3g <= 1e-10 < soft-NE bare %.4g < untrained bare %.4g (mean over 160 probes)", wrapped_max,
              soft_mean, raw_mean)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app("nedenoise acceptance suite");
  std::string only;
  std::string work = (fs::temp_directory_path() / "nedenoise_acceptance").string();
  bool fresh = false;
  app.add_option("--only", only, "comma-separated criterion ids, e.g. C1,C7");
  app.add_option("--work", work, "scratch directory for trained models and run directories");
  app.add_flag("--fresh", fresh, "discard cached models in the scratch directory");
  CLI11_PARSE(app, argc, argv);
  g_work = work;
  if (fresh) fs::remove_all(g_work);
  fs::create_directories(g_work);

  const std::vector<Criterion> criteria = {
      {"C1", "exact NE of wrapped backbones", 30, exact_ne},
      {"C2", "characterization identities", 5, characterization},
      {"C3", "loss and PSNR decomposition", 10, decomposition},
      {"C4", "Delta geometry", 60, delta_geometry},
      {"C5", "coverage asymmetry", 300, coverage},
      {"C6", "gradient oracle", 30, gradient_oracle},
      {"C7", "mismatch trend", 900, mismatch_trend},
      {"C8", "Euler identity and unit-sum filters", 120, adaptive_filters},
      {"C9", "sampler identities", 30, sampler_identities},
      {"C10", "inpainting and residual-stop reuse", 1200, reuse_trend},
      {"C11", "epsilon_NE ordering", 600, epsilon_ordering},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && ("," + only + ",").find("," + c.id + ",") == std::string::npos) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_budget = secs < c.budget_seconds;
    const bool pass = o.pass && in_budget;
    failures += pass ? 0 : 1;
    std::cout << (pass ? "PASS " : "FAIL ") << c.id << " " << c.name << ": " << o.detail
              << fmt(" [%.1f s, budget %.0f s]", secs, c.budget_seconds) << (in_budget ? "" : " over budget")
              << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
