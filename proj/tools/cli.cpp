// Copyright 2026 The nedenoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <functional>
#include <iomanip>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#include "nedenoise/analysis.hpp"
#include "nedenoise/classical.hpp"
#include "nedenoise/config.hpp"
#include "nedenoise/corpus.hpp"
#include "nedenoise/metrics.hpp"
#include "nedenoise/noise.hpp"
#include "nedenoise/parallel.hpp"
#include "nedenoise/patch_models.hpp"
#include "nedenoise/pgm.hpp"
#include "nedenoise/report.hpp"
#include "nedenoise/sampler.hpp"
#include "nedenoise/svg.hpp"
#include "nedenoise/training.hpp"
#include "nedenoise/wrapper.hpp"

namespace nedenoise::cli {

namespace fs = std::filesystem;

namespace {

/// Bad input from the user (missing file, malformed value); exit code 1.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct OptionSpec {
  std::string key;
  std::string fallback;
  std::string help;
};

struct RunContext {
  Config cfg;
  fs::path dir;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  std::ostream* out = nullptr;
};

using Action = std::function<void(RunContext&)>;

struct CommandSpec {
  std::string name;  // as typed, e.g. "analyze qdelta"
  std::string help;
  std::vector<OptionSpec> options;
  Action action;
};

// ---------------------------------------------------------------------------
// Option groups shared between commands

std::vector<OptionSpec> corpus_options() {
  return {
      {"corpus", "synthetic", "training corpus: a directory of PGM files or 'synthetic'"},
      {"corpus_count", "64", "synthetic corpus size"},
      {"corpus_size", "64", "synthetic image side"},
      {"corpus_mix", "0.4,0.25,0.1,0.25", "synthetic mix weights field,mosaic,gradient,grating"},
      {"corpus_seed", "", "synthetic corpus seed (default: seed)"},
  };
}

std::vector<OptionSpec> test_options() {
  return {
      {"images", "synthetic", "evaluation images: a directory of PGM files or 'synthetic'"},
      {"test_count", "16", "synthetic evaluation set size"},
      {"test_size", "64", "synthetic evaluation image side"},
      {"test_seed", "", "synthetic evaluation seed (default: seed + 1)"},
  };
}

std::vector<OptionSpec> model_options() {
  return {
      {"backbone", "mlp", "mlp (needs --checkpoint), dct, nlm, nlm-absolute, box or identity"},
      {"checkpoint", "", "patch-MLP checkpoint file"},
      {"wrap", "direct", "none, direct, residual or input-only"},
      {"epsilon", "1e-05", "wrapper stabilizer added to std"},
      {"dct_block", "8", "DCT block size"},
      {"dct_threshold", "0.1", "DCT soft threshold"},
      {"nlm_bandwidth", "0.4", "NLM kappa (relative) or h (absolute)"},
  };
}

std::vector<OptionSpec> operator+(std::vector<OptionSpec> a, const std::vector<OptionSpec>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

// ---------------------------------------------------------------------------
// Config helpers

std::string get(const Config& c, std::string_view key) {
  auto v = c.get(key);
  if (!v) throw Error("internal: unresolved key " + std::string(key));
  return *v;
}
double get_double(const Config& c, std::string_view key) { return parse_double(get(c, key), key); }
std::size_t get_size(const Config& c, std::string_view key) {
  return static_cast<std::size_t>(parse_uint(get(c, key), key));
}
std::vector<double> get_list(const Config& c, std::string_view key) { return parse_double_list(get(c, key), key); }
bool get_bool(const Config& c, std::string_view key) { return c.get_bool(key, false); }

std::vector<Instance> load_pgm_dir(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw UsageError("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".pgm") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw UsageError("no .pgm files in " + dir.string());
  std::vector<Instance> out;
  for (const auto& f : files) out.push_back(read_pgm(f));
  return out;
}

std::vector<Instance> load_training_corpus(const Config& c) {
  const std::string src = get(c, "corpus");
  if (src != "synthetic") return load_pgm_dir(src);
  return images_of(generate_corpus(get_size(c, "corpus_count"), get_size(c, "corpus_size"),
                                   CorpusMix::parse(get(c, "corpus_mix")), parse_uint(get(c, "corpus_seed"), "seed")));
}

std::vector<Instance> load_test_images(const Config& c) {
  const std::string src = get(c, "images");
  if (src != "synthetic") return load_pgm_dir(src);
  return images_of(generate_corpus(get_size(c, "test_count"), get_size(c, "test_size"),
                                   CorpusMix::parse(get(c, "corpus_mix")), parse_uint(get(c, "test_seed"), "seed")));
}

BackbonePtr load_backbone(const Config& c) {
  const std::string kind = get(c, "backbone");
  if (kind == "mlp") {
    const std::string path = get(c, "checkpoint");
    if (path.empty()) throw UsageError("backbone mlp needs --checkpoint");
    if (!fs::exists(path)) throw UsageError("checkpoint not found: " + path);
    return PatchMlp(load_checkpoint(path)).freeze();
  }
  if (kind == "dct") return std::make_shared<DctThreshold>(get_size(c, "dct_block"), get_double(c, "dct_threshold"));
  if (kind == "nlm" || kind == "nlm-absolute") {
    NlmParams p;
    p.mode = kind == "nlm" ? NlmBandwidth::kRelativeToStd : NlmBandwidth::kAbsolute;
    p.bandwidth = get_double(c, "nlm_bandwidth");
    return std::make_shared<Nlm>(p);
  }
  if (kind == "box") return std::make_shared<UnitSumConv>(Stencil::separable({1.0 / 3, 1.0 / 3, 1.0 / 3}));
  if (kind == "identity") return identity_backbone();
  throw UsageError("unknown backbone '" + kind + "'");
}

InstanceMap load_denoiser(const Config& c) {
  BackbonePtr bb = load_backbone(c);
  const WrapMode mode = parse_wrap_mode(get(c, "wrap"));
  if (mode == WrapMode::kNone) return as_map(std::move(bb));
  return WrappedDenoiser(std::move(bb), mode, get_double(c, "epsilon")).as_map();
}

void save_svg(const fs::path& path, const std::string& svg) { write_text(path, svg); }

// ---------------------------------------------------------------------------
// Commands

void cmd_gen_corpus(RunContext& ctx) {
  const std::size_t n = get_size(ctx.cfg, "count");
  if (n < 1) throw UsageError("count must be >= 1");
  const std::size_t size = get_size(ctx.cfg, "size");
  const auto corpus = generate_corpus(n, size, CorpusMix::parse(get(ctx.cfg, "mix")), ctx.seed);
  CsvTable manifest({"file", "kind", "sigma_x", "slope_y", "slope_x"}, ctx.seed);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    std::ostringstream name;
    name << "image_" << std::setw(5) << std::setfill('0') << i << ".pgm";
    write_pgm(ctx.dir / name.str(), corpus[i].image);
    manifest.row({name.str(), std::string(to_string(corpus[i].kind)), format_number(stats(corpus[i].image).std),
                  format_number(corpus[i].slope_y), format_number(corpus[i].slope_x)});
  }
  manifest.save(ctx.dir / "manifest.csv");
  *ctx.out << "generated " << n << " images\n";
}

void cmd_train(RunContext& ctx) {
  const Config& c = ctx.cfg;
  TrainConfig tc;
  tc.sigma_train = get_double(c, "sigma_train");
  tc.noise = parse_noise_kind(get(c, "noise"));
  tc.patch_size = get_size(c, "patch_size");
  tc.batch_size = get_size(c, "batch_size");
  tc.steps = get_size(c, "steps");
  tc.learning_rate = get_double(c, "lr");
  tc.schedule = parse_lr_schedule(get(c, "schedule"));
  tc.halve_every = get_size(c, "halve_every");
  tc.loss = parse_loss_kind(get(c, "loss"));
  tc.objective = parse_objective(get(c, "objective"));
  tc.softne = get_bool(c, "softne");
  tc.wrap = parse_wrap_mode(get(c, "wrap"));
  tc.epsilon = get_double(c, "epsilon");
  tc.seed = ctx.seed;
  tc.validate();
  const auto convention = get(c, "convention") == "clean"      ? PredictionConvention::kClean
                          : get(c, "convention") == "residual" ? PredictionConvention::kResidual
                                                               : throw UsageError("convention must be clean or residual");
  Rng init = Rng(ctx.seed).substream(0xC0FFEE);
  PatchMlp model(PatchMlpParams::random(get_size(c, "tile"), get_size(c, "hidden"), convention, init));
  const auto corpus = load_training_corpus(c);
  const auto losses = train(model, corpus, tc);
  save_checkpoint(model.params(), ctx.dir / "model.ckpt");
  loss_csv(losses, ctx.seed).save(ctx.dir / "loss.csv");
  save_svg(ctx.dir / "loss.svg", loss_svg(losses));
  *ctx.out << "trained " << tc.steps << " steps";
  if (!losses.empty()) *ctx.out << ", final batch loss " << format_number(losses.back());
  *ctx.out << "\n";
}

void cmd_sweep(RunContext& ctx) {
  const auto model = load_denoiser(ctx.cfg);
  const auto images = load_test_images(ctx.cfg);
  const auto sweep = mismatch_sweep(model, images, get_list(ctx.cfg, "sigma_tests"), ctx.seed,
                                    parse_noise_kind(get(ctx.cfg, "noise")), ctx.threads);
  sweep_csv(sweep, ctx.seed).save(ctx.dir / "sweep.csv");
  save_svg(ctx.dir / "sweep.svg", sweep_svg({{get(ctx.cfg, "wrap"), sweep}}));
  for (const auto& r : sweep.rows) {
    *ctx.out << "sigma_test " << format_number(r.sigma_test) << ": PSNR " << format_number(r.output_psnr_mean)
             << " dB\n";
  }
}

std::vector<DeltaDistribution> delta_for(const RunContext& ctx, const std::vector<double>& sigmas) {
  return delta_stats(load_training_corpus(ctx.cfg), sigmas, get_size(ctx.cfg, "patches"),
                     get_size(ctx.cfg, "patch_size"), ctx.seed, get_size(ctx.cfg, "bins"));
}

void cmd_analyze_delta(RunContext& ctx) {
  const auto dists = delta_for(ctx, get_list(ctx.cfg, "sigmas"));
  delta_summary_csv(dists, ctx.seed).save(ctx.dir / "delta_summary.csv");
  delta_histogram_csv(dists, ctx.seed).save(ctx.dir / "delta_histogram.csv");
  save_svg(ctx.dir / "delta_histogram.svg", delta_histogram_svg(dists));
  *ctx.out << "sampled " << dists.size() << " difficulty distributions\n";
}

void cmd_analyze_coverage(RunContext& ctx) {
  const auto sigmas = get_list(ctx.cfg, "sigmas");
  const auto dists = delta_for(ctx, sigmas);
  const auto table = coverage_table(dists, sigmas, sigmas);
  coverage_csv(table, ctx.seed).save(ctx.dir / "coverage.csv");
  save_svg(ctx.dir / "coverage.svg", coverage_svg(table));
  *ctx.out << "coverage matrix " << sigmas.size() << "x" << sigmas.size() << "\n";
}

void cmd_analyze_qdelta(RunContext& ctx) {
  const auto curve = q_vs_delta(load_denoiser(ctx.cfg), load_training_corpus(ctx.cfg), get_list(ctx.cfg, "sigmas"),
                                get_size(ctx.cfg, "bins"), get_size(ctx.cfg, "patches"),
                                get_size(ctx.cfg, "patch_size"), ctx.seed, ctx.threads);
  const double gap = max_cross_sigma_gap(curve);
  auto table = binned_csv(curve, ctx.seed);
  table.footer("max_cross_sigma_gap", format_number(gap));
  table.save(ctx.dir / "qdelta.csv");
  save_svg(ctx.dir / "qdelta.svg", binned_svg(curve));
  *ctx.out << "max cross-sigma gap " << format_number(gap) << " dB\n";
}

void cmd_analyze_ne_defect(RunContext& ctx) {
  const auto images = load_test_images(ctx.cfg);
  const auto samples = ne_defect_samples(load_denoiser(ctx.cfg), images, get_size(ctx.cfg, "trials"), ctx.seed);
  const std::string label = get(ctx.cfg, "backbone") + "/" + get(ctx.cfg, "wrap");
  epsilon_ne_csv({{label, samples}}, ctx.seed).save(ctx.dir / "epsilon_ne.csv");
  double mean = 0.0;
  for (double v : samples) mean += v;
  *ctx.out << "epsilon_NE " << format_number(mean / static_cast<double>(samples.size())) << "\n";
}

Instance pick_image(const Config& c) {
  const std::string path = get(c, "image");
  if (!path.empty()) {
    if (!fs::exists(path)) throw UsageError("image not found: " + path);
    return read_pgm(path);
  }
  const auto images = load_test_images(c);
  const std::size_t idx = get_size(c, "image_index");
  if (idx >= images.size()) throw UsageError("image_index out of range");
  return images[idx];
}

void cmd_analyze_jacobian(RunContext& ctx) {
  const Instance full = pick_image(ctx.cfg);
  const std::size_t side = std::min({get_size(ctx.cfg, "crop"), full.shape().height, full.shape().width});
  const Instance y = crop(full, 0, 0, side, side);
  std::vector<std::size_t> rows;
  for (double r : get_list(ctx.cfg, "rows")) {
    if (r < 0) {
      rows.push_back((side / 2) * side + side / 2);
    } else {
      rows.push_back(static_cast<std::size_t>(r));
    }
  }
  const auto report = jacobian_rows(load_denoiser(ctx.cfg), y, rows);
  jacobian_summary_csv(report, ctx.seed).save(ctx.dir / "jacobian.csv");
  jacobian_filters_csv(report, ctx.seed).save(ctx.dir / "jacobian_filters.csv");
  *ctx.out << "rho " << format_number(report.rho) << "\n";
}

SamplerConfig sampler_config(const Config& c) {
  SamplerConfig s;
  s.sigma0 = get_double(c, "sigma0");
  s.sigmaL = get_double(c, "sigmaL");
  s.h0 = get_double(c, "h0");
  s.beta = get_double(c, "beta");
  s.t_max = get_size(c, "t_max");
  s.validate();
  return s;
}

void write_trajectory(const RunContext& ctx, const Trajectory& traj) {
  trajectory_csv(traj, ctx.seed).save(ctx.dir / "trajectory.csv");
  save_svg(ctx.dir / "trajectory.svg", trajectory_svg(traj));
  write_pgm(ctx.dir / "reconstruction.pgm", traj.x_hat);
  *ctx.out << "stopped (" << to_string(traj.stop) << ") after " << traj.records.size() << " steps";
  if (traj.final_psnr) *ctx.out << ", final PSNR " << format_number(*traj.final_psnr) << " dB";
  *ctx.out << "\n";
}

void cmd_sample_denoise(RunContext& ctx) {
  const Instance x = pick_image(ctx.cfg);
  Rng rng(ctx.seed);
  Rng noise_rng = rng.substream(1);
  Rng sampler_rng = rng.substream(2);
  const Instance y0 = corrupt(x, NoiseModel{NoiseKind::kGaussian, get_double(ctx.cfg, "sigma_init")}, noise_rng);
  write_pgm(ctx.dir / "noisy.pgm", y0);
  const auto traj = residual_stop_denoise(load_denoiser(ctx.cfg), y0, sampler_config(ctx.cfg), sampler_rng, x);
  write_trajectory(ctx, traj);
}

void cmd_sample_inpaint(RunContext& ctx) {
  const Instance x = pick_image(ctx.cfg);
  Rng rng(ctx.seed);
  Rng mask_rng = rng.substream(1);
  Rng sampler_rng = rng.substream(2);
  const Projector p = make_inpainting_mask(x.shape(), get_double(ctx.cfg, "fraction"), mask_rng);
  const Instance x_c = p.apply(x);
  write_pgm(ctx.dir / "observed.pgm", x_c);
  const auto traj = sampler_run(load_denoiser(ctx.cfg), p, x_c, sampler_config(ctx.cfg), sampler_rng, x);
  write_trajectory(ctx, traj);
}

std::vector<CommandSpec> commands() {
  const std::vector<OptionSpec> sampler = {
      {"sigma0", "1", "initial noise level"}, {"sigmaL", "0.01", "stopping level"},
      {"h0", "0.01", "initial step"},         {"beta", "0.01", "noise injection control"},
      {"t_max", "1000", "iteration budget"},
  };
  const std::vector<OptionSpec> image = {
      {"image", "", "input PGM (default: a synthetic evaluation image)"},
      {"image_index", "0", "index into the synthetic evaluation set"},
  };
  const std::vector<OptionSpec> analysis = {
      {"sigmas", "10,20,30,40,50", "noise levels in 8-bit units"},
      {"patches", "1000", "patches per sigma"},
      {"patch_size", "8", "analysis patch side"},
  };
  return {
      {"gen-corpus",
       "write a synthetic PGM corpus and manifest",
       {{"count", "16", "number of images"},
        {"size", "64", "image side"},
        {"mix", "0.4,0.25,0.1,0.25", "weights field,mosaic,gradient,grating"}},
       cmd_gen_corpus},
      {"train",
       "train a patch MLP",
       std::vector<OptionSpec>{{"sigma_train", "10", "training noise level (8-bit units)"},
                               {"noise", "gaussian", "gaussian, uniform, laplace or rayleigh"},
                               {"patch_size", "16", "training instance side"},
                               {"tile", "8", "MLP tile side P"},
                               {"hidden", "64", "hidden width"},
                               {"convention", "residual", "clean or residual prediction"},
                               {"batch_size", "16", "instances per step"},
                               {"steps", "1000", "Adam steps"},
                               {"lr", "0.001", "learning rate"},
                               {"schedule", "constant", "constant or halve"},
                               {"halve_every", "0", "halving period (0: steps/5)"},
                               {"loss", "mse", "mse or l1"},
                               {"objective", "supervised", "supervised or n2n"},
                               {"softne", "false", "affine orbit augmentation"},
                               {"wrap", "none", "wrapper used during training"},
                               {"epsilon", "1e-05", "wrapper stabilizer"}} +
           corpus_options(),
       cmd_train},
      {"sweep",
       "evaluate a denoiser over test noise levels",
       model_options() + test_options() + corpus_options() +
           std::vector<OptionSpec>{{"sigma_tests", "5,10,15,20,25,30,40,50,60,75,100", "test levels"},
                                   {"noise", "gaussian", "noise model"}},
       cmd_sweep},
      {"analyze delta", "difficulty distributions",
       analysis + corpus_options() + std::vector<OptionSpec>{{"bins", "50", "histogram bins"}}, cmd_analyze_delta},
      {"analyze coverage", "coverage matrix",
       analysis + corpus_options() + std::vector<OptionSpec>{{"bins", "50", "histogram bins"}},
       cmd_analyze_coverage},
      {"analyze qdelta", "normalized error versus difficulty",
       analysis + corpus_options() + model_options() + std::vector<OptionSpec>{{"bins", "20", "Delta bins"}},
       cmd_analyze_qdelta},
      {"analyze ne-defect", "equivariance defect",
       model_options() + test_options() + corpus_options() +
           std::vector<OptionSpec>{{"trials", "10", "probes per image"}},
       cmd_analyze_ne_defect},
      {"analyze jacobian", "finite-difference Jacobian rows",
       model_options() + test_options() + corpus_options() + image +
           std::vector<OptionSpec>{{"crop", "32", "analysed window side"},
                                   {"rows", "-1", "row indices (-1: center pixel)"}},
       cmd_analyze_jacobian},
      {"sample denoise", "residual-stopped denoising",
       model_options() + test_options() + corpus_options() + image +
           std::vector<OptionSpec>{{"sigma_init", "10", "initial noise level (8-bit units)"},
                                   {"sigma0", "1", "unused by this variant"},
                                   {"sigmaL", "0.00392156862745098", "stopping level"},
                                   {"h0", "0.01", "initial step"},
                                   {"beta", "1", "must be 1"},
                                   {"t_max", "1000", "iteration budget"}},
       cmd_sample_denoise},
      {"sample inpaint", "random-mask inpainting",
       model_options() + test_options() + corpus_options() + image + sampler +
           std::vector<OptionSpec>{{"fraction", "0.1", "observed pixel fraction"}},
       cmd_sample_inpaint},
  };
}

std::string timestamp_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y%m%dT%H%M%S");
  return s.str();
}

fs::path make_run_dir(const fs::path& root, const std::string& stem) {
  fs::create_directories(root);
  fs::path dir = root / stem;
  for (int k = 1; fs::exists(dir); ++k) dir = root / (stem + "-" + std::to_string(k));
  fs::create_directories(dir);
  return dir;
}

}  // namespace

std::string run_dir_name(const std::string& command, const std::string& timestamp, std::uint64_t seed) {
  std::string c = command;
  std::replace(c.begin(), c.end(), ' ', '-');
  return c + "-" + timestamp + "-" + std::to_string(seed);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const auto specs = commands();
  CLI::App app{"nedenoise: normalization-equivariant denoising toolkit"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "show help for every command");

  struct Bound {
    const CommandSpec* spec = nullptr;
    CLI::App* app = nullptr;
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;
  };
  std::vector<std::unique_ptr<Bound>> bound;
  std::map<std::string, CLI::App*> groups;
  for (const auto& spec : specs) {
    auto b = std::make_unique<Bound>();
    b->spec = &spec;
    const auto space = spec.name.find(' ');
    CLI::App* parent = &app;
    std::string leaf = spec.name;
    if (space != std::string::npos) {
      const std::string group = spec.name.substr(0, space);
      if (!groups.count(group)) {
        groups[group] = app.add_subcommand(group, group + " subcommands");
        groups[group]->require_subcommand(1);
      }
      parent = groups[group];
      leaf = spec.name.substr(space + 1);
    }
    b->app = parent->add_subcommand(leaf, spec.help);
    std::vector<OptionSpec> opts = spec.options;
    opts.insert(opts.end(), {{"seed", "", "RNG seed (fallback: NE_SEED, then 0)"},
                             {"threads", "", "worker threads (default: hardware parallelism)"},
                             {"config", "", "key=value file; flags override it"},
                             {"out", "out", "root of run directories"},
                             {"run_dir", "", "exact output directory (overrides --out)"}});
    for (const auto& o : opts) {
      if (b->options.count(o.key)) continue;
      std::string names = "--" + o.key;
      std::string dashed = o.key;
      std::replace(dashed.begin(), dashed.end(), '_', '-');
      if (dashed != o.key) names += ",--" + dashed;
      std::string help = o.help;
      if (!o.fallback.empty()) help += " [" + o.fallback + "]";
      b->options[o.key] = b->app->add_option(names, b->values[o.key], help);
    }
    bound.push_back(std::move(b));
  }

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUserError;
  }

  const Bound* chosen = nullptr;
  for (const auto& b : bound)
    if (b->app->parsed()) chosen = b.get();
  if (!chosen) {
    err << "no command given\n";
    return kExitUserError;
  }

  try {
    Config file;
    const auto& vals = chosen->values;
    auto given = [&](const std::string& key) { return chosen->options.at(key)->count() > 0; };
    if (given("config")) {
      const std::string path = vals.at("config");
      if (!fs::exists(path)) throw UsageError("config not found: " + path);
      file = Config::parse(read_text(path));
    }
    if (auto cmd = file.get("command"); cmd && *cmd != chosen->spec->name) {
      throw UsageError("config was written by '" + *cmd + "', not '" + chosen->spec->name + "'");
    }
    for (const auto& [k, v] : file.entries()) {
      if (k != "command" && !chosen->options.count(k)) throw UsageError("unknown config key '" + k + "'");
    }

    Config resolved;
    resolved.set("command", chosen->spec->name);
    std::vector<OptionSpec> all = chosen->spec->options;
    all.push_back({"seed", "", ""});
    all.push_back({"threads", "", ""});
    for (const auto& o : all) {
      std::string v = o.fallback;
      if (auto f = file.get(o.key)) v = *f;
      if (given(o.key)) v = vals.at(o.key);
      resolved.set(o.key, v);
    }
    if (!given("seed") && !file.contains("seed")) {
      const char* env = std::getenv("NE_SEED");
      resolved.set("seed", env && *env ? env : "0");
    }
    RunContext ctx;
    ctx.seed = parse_uint(get(resolved, "seed"), "seed");
    if (resolved.get("corpus_seed") == std::optional<std::string>("")) {
      resolved.set("corpus_seed", std::to_string(ctx.seed));
    }
    if (resolved.get("test_seed") == std::optional<std::string>("")) {
      resolved.set("test_seed", std::to_string(ctx.seed + 1));
    }
    if (get(resolved, "threads").empty()) resolved.set("threads", std::to_string(default_thread_count()));
    ctx.threads = std::max<std::size_t>(1, get_size(resolved, "threads"));
    ctx.cfg = resolved;
    ctx.out = &out;

    const std::string run_dir = given("run_dir") ? vals.at("run_dir") : file.get_string("run_dir", "");
    if (!run_dir.empty()) {
      ctx.dir = run_dir;
      fs::create_directories(ctx.dir);
    } else {
      const std::string root = given("out") ? vals.at("out") : "out";
      ctx.dir = make_run_dir(root, run_dir_name(chosen->spec->name, timestamp_now(), ctx.seed));
    }
    write_text(ctx.dir / "run.cfg", resolved.str());
    chosen->spec->action(ctx);
    out << "wrote " << ctx.dir.string() << "\n";
    return kExitOk;
  } catch (const DivergenceError& e) {
    err << "error: training diverged at step " << e.step() << ": " << e.what() << "\n";
    return kExitInternalError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUserError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUserError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternalError;
  }
}

}  // namespace nedenoise::cli
