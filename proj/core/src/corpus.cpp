// Copyright 2026 The nedenoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "nedenoise/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "nedenoise/backbone.hpp"

namespace nedenoise {

namespace {

using Index = std::ptrdiff_t;

// Log-uniform contrast so that patch signal variance spans several decades.
double draw_contrast(Rng& rng) { return std::exp(rng.uniform(std::log(0.01), std::log(0.3))); }

std::vector<double> clip01(std::vector<double> v) {
  for (double& x : v) x = std::clamp(x, 0.0, 1.0);
  return v;
}

std::vector<double> blur(const std::vector<double>& img, std::size_t n, double sigma) {
  const auto r = static_cast<Index>(std::ceil(3.0 * sigma));
  std::vector<double> k(static_cast<std::size_t>(2 * r + 1));
  double ks = 0.0;
  for (Index i = -r; i <= r; ++i) {
    k[static_cast<std::size_t>(i + r)] = std::exp(-0.5 * static_cast<double>(i * i) / (sigma * sigma));
    ks += k[static_cast<std::size_t>(i + r)];
  }
  for (double& v : k) v /= ks;
  const auto ni = static_cast<Index>(n);
  std::vector<double> tmp(n * n);
  std::vector<double> out(n * n);
  for (Index y = 0; y < ni; ++y)
    for (Index x = 0; x < ni; ++x) {
      double acc = 0.0;
      for (Index j = -r; j <= r; ++j) acc += k[static_cast<std::size_t>(j + r)] * img[static_cast<std::size_t>(y * ni + reflect_index(x + j, ni))];
      tmp[static_cast<std::size_t>(y * ni + x)] = acc;
    }
  for (Index y = 0; y < ni; ++y)
    for (Index x = 0; x < ni; ++x) {
      double acc = 0.0;
      for (Index i = -r; i <= r; ++i) acc += k[static_cast<std::size_t>(i + r)] * tmp[static_cast<std::size_t>(reflect_index(y + i, ni) * ni + x)];
      out[static_cast<std::size_t>(y * ni + x)] = acc;
    }
  return out;
}

GeneratedImage gaussian_field(std::size_t n, Rng& rng) {
  static constexpr double kScales[] = {1.0, 2.5, 6.0};
  std::vector<double> noise(n * n);
  for (double& v : noise) v = rng.normal();
  const double scale = kScales[rng.below(3)];
  auto field = blur(noise, n, scale);
  const InstanceStats s = stats(Instance::from_values(field));
  const double contrast = draw_contrast(rng);
  const double mean = rng.uniform(0.25, 0.75);
  for (double& v : field) v = mean + contrast * (v - s.mu) / s.std;
  return {Instance(Shape{1, n, n}, clip01(std::move(field))), CorpusKind::kGaussianField};
}

GeneratedImage mosaic(std::size_t n, Rng& rng) {
  const std::size_t cells = 4 + rng.below(21);
  std::vector<double> cy(cells), cx(cells), level(cells);
  const double contrast = draw_contrast(rng);
  const double mean = rng.uniform(0.25, 0.75);
  for (std::size_t k = 0; k < cells; ++k) {
    cy[k] = rng.uniform(0.0, static_cast<double>(n));
    cx[k] = rng.uniform(0.0, static_cast<double>(n));
    level[k] = mean + contrast * rng.normal();
  }
  std::vector<double> img(n * n);
  for (std::size_t y = 0; y < n; ++y)
    for (std::size_t x = 0; x < n; ++x) {
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < cells; ++k) {
        const double dy = static_cast<double>(y) + 0.5 - cy[k];
        const double dx = static_cast<double>(x) + 0.5 - cx[k];
        const double d = dy * dy + dx * dx;
        if (d < best_d) {
          best_d = d;
          best = k;
        }
      }
      img[y * n + x] = level[best];
    }
  return {Instance(Shape{1, n, n}, clip01(std::move(img))), CorpusKind::kMosaic};
}

GeneratedImage gradient(std::size_t n, Rng& rng) {
  // Total ramp range <= 0.7 keeps the image inside [0, 1] without clipping.
  const double range = rng.uniform(0.02, 0.7);
  const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double span = static_cast<double>(n - 1 > 0 ? n - 1 : 1);
  const double a = range * std::sin(angle) / span;
  const double b = range * std::cos(angle) / span;
  const double half = (std::abs(a) + std::abs(b)) * span / 2.0;
  const double mean = rng.uniform(half, 1.0 - half);
  const double c = (static_cast<double>(n) - 1.0) / 2.0;
  std::vector<double> img(n * n);
  for (std::size_t y = 0; y < n; ++y)
    for (std::size_t x = 0; x < n; ++x) {
      img[y * n + x] = mean + a * (static_cast<double>(y) - c) + b * (static_cast<double>(x) - c);
    }
  return {Instance(Shape{1, n, n}, std::move(img)), CorpusKind::kGradient, a, b};
}

GeneratedImage grating(std::size_t n, Rng& rng) {
  const double freq = rng.uniform(0.02, 0.25);
  const double angle = rng.uniform(0.0, std::numbers::pi);
  const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double contrast = draw_contrast(rng) * std::numbers::sqrt2;
  const double mean = rng.uniform(0.25, 0.75);
  const double fy = freq * std::sin(angle);
  const double fx = freq * std::cos(angle);
  std::vector<double> img(n * n);
  for (std::size_t y = 0; y < n; ++y)
    for (std::size_t x = 0; x < n; ++x) {
      img[y * n + x] = mean + contrast * std::sin(2.0 * std::numbers::pi *
                                                      (fy * static_cast<double>(y) + fx * static_cast<double>(x)) +
                                                  phase);
    }
  return {Instance(Shape{1, n, n}, clip01(std::move(img))), CorpusKind::kGrating};
}

}  // namespace

std::string_view to_string(CorpusKind kind) {
  switch (kind) {
    case CorpusKind::kGaussianField:
      return "field";
    case CorpusKind::kMosaic:
      return "mosaic";
    case CorpusKind::kGradient:
      return "gradient";
    case CorpusKind::kGrating:
      return "grating";
  }
  return "field";
}

CorpusKind parse_corpus_kind(std::string_view text) {
  if (text == "field") return CorpusKind::kGaussianField;
  if (text == "mosaic") return CorpusKind::kMosaic;
  if (text == "gradient") return CorpusKind::kGradient;
  if (text == "grating") return CorpusKind::kGrating;
  throw Error("unknown corpus kind '" + std::string(text) + "'");
}

CorpusMix CorpusMix::parse(std::string_view text) {
  std::vector<double> w;
  std::stringstream ss{std::string(text)};
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      w.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw Error("corpus mix: bad weight '" + item + "'");
    }
  }
  if (w.size() != 4) {
    throw Error("corpus mix needs 4 comma-separated weights (field,mosaic,gradient,grating)");
  }
  for (double v : w) {
    if (!(v >= 0.0)) throw Error("corpus mix weights must be >= 0");
  }
  if (w[0] + w[1] + w[2] + w[3] <= 0.0) {
    throw Error("corpus mix weights sum to zero");
  }
  return {w[0], w[1], w[2], w[3]};
}

double ramp_sigma(double slope_y, double slope_x, std::size_t height, std::size_t width) {
  const double h = static_cast<double>(height);
  const double w = static_cast<double>(width);
  return std::sqrt(slope_y * slope_y * (h * h - 1.0) / 12.0 + slope_x * slope_x * (w * w - 1.0) / 12.0);
}

GeneratedImage generate_image(CorpusKind kind, std::size_t size, Rng& rng) {
  if (size < 2) {
    throw Error("corpus images must be at least 2x2");
  }
  switch (kind) {
    case CorpusKind::kGaussianField:
      return gaussian_field(size, rng);
    case CorpusKind::kMosaic:
      return mosaic(size, rng);
    case CorpusKind::kGradient:
      return gradient(size, rng);
    case CorpusKind::kGrating:
      return grating(size, rng);
  }
  throw Error("unknown corpus kind");
}

std::vector<GeneratedImage> generate_corpus(std::size_t count, std::size_t size, const CorpusMix& mix,
                                            std::uint64_t seed) {
  const double weights[] = {mix.field, mix.mosaic, mix.gradient, mix.grating};
  const double total = weights[0] + weights[1] + weights[2] + weights[3];
  if (!(total > 0.0)) {
    throw Error("corpus mix weights sum to zero");
  }
  const Rng root(seed);
  std::vector<GeneratedImage> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng = root.substream(i);
    double pick = rng.uniform() * total;
    std::size_t k = 0;
    for (std::size_t j = 0; j < 4; ++j) {
      if (weights[j] == 0.0) continue;
      k = j;
      if (pick < weights[j]) break;
      pick -= weights[j];
    }
    out.push_back(generate_image(static_cast<CorpusKind>(k), size, rng));
  }
  return out;
}

std::vector<Instance> images_of(const std::vector<GeneratedImage>& corpus) {
  std::vector<Instance> out;
  out.reserve(corpus.size());
  for (const auto& g : corpus) out.push_back(g.image);
  return out;
}

Instance crop(const Instance& image, std::size_t top, std::size_t left, std::size_t height, std::size_t width) {
  const Shape& s = image.shape();
  if (top + height > s.height || left + width > s.width) {
    throw Error("crop window outside image");
  }
  std::vector<double> out;
  out.reserve(s.channels * height * width);
  for (std::size_t c = 0; c < s.channels; ++c)
    for (std::size_t y = 0; y < height; ++y)
      for (std::size_t x = 0; x < width; ++x) out.push_back(image.at(c, top + y, left + x));
  return Instance(Shape{s.channels, height, width}, std::move(out));
}

Instance sample_patch(const std::vector<Instance>& corpus, std::size_t patch_size, Rng& rng) {
  if (corpus.empty()) {
    throw Error("empty corpus");
  }
  const Instance& img = corpus[rng.below(corpus.size())];
  const Shape& s = img.shape();
  if (s.height < patch_size || s.width < patch_size) {
    throw Error("patch size exceeds image size");
  }
  const std::size_t top = rng.below(s.height - patch_size + 1);
  const std::size_t left = rng.below(s.width - patch_size + 1);
  return crop(img, top, left, patch_size, patch_size);
}

}  // namespace nedenoise
