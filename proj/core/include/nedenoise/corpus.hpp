// Copyright 2026 The nedenoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "nedenoise/instance.hpp"
#include "nedenoise/rng.hpp"

namespace nedenoise {

/// Families of the seeded synthetic training corpus.
enum class CorpusKind {
  kGaussianField,  // blurred white noise at one of three smoothness scales
  kMosaic,         // piecewise-constant Voronoi cells
  kGradient,       // linear ramp, never clipped
  kGrating,        // sinusoidal grating
};

std::string_view to_string(CorpusKind kind);
CorpusKind parse_corpus_kind(std::string_view text);

/// Relative weights of the four families; need not be normalized.
struct CorpusMix {
  double field = 0.4;
  double mosaic = 0.25;
  double gradient = 0.1;
  double grating = 0.25;

  /// Parses "field,mosaic,gradient,grating" weights, e.g. "0.4,0.3,0.1,0.2".
  static CorpusMix parse(std::string_view text);
};

struct GeneratedImage {
  Instance image;
  CorpusKind kind;
  /// Ramp slopes per pixel step (gradient images only).
  double slope_y = 0.0;
  double slope_x = 0.0;
};

/// Closed-form pooled standard deviation of the ramp a*i + b*j on an
/// H x W grid: sqrt(a^2 (H^2 - 1)/12 + b^2 (W^2 - 1)/12).
double ramp_sigma(double slope_y, double slope_x, std::size_t height, std::size_t width);

GeneratedImage generate_image(CorpusKind kind, std::size_t size, Rng& rng);

/// Deterministic corpus of `count` single-channel size x size images.
std::vector<GeneratedImage> generate_corpus(std::size_t count, std::size_t size, const CorpusMix& mix,
                                            std::uint64_t seed);

std::vector<Instance> images_of(const std::vector<GeneratedImage>& corpus);

/// Uniform image, then uniform top-left corner.
Instance sample_patch(const std::vector<Instance>& corpus, std::size_t patch_size, Rng& rng);

/// Copies the (top, left) patch_size x patch_size window of every channel.
Instance crop(const Instance& image, std::size_t top, std::size_t left, std::size_t height, std::size_t width);

}  // namespace nedenoise
