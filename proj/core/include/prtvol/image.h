// Copyright 2026 The prtvol Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "prtvol/math.h"

namespace prtvol {

/// Row-major linear RGB image, row 0 at the top. `alpha` is the accumulated
/// volume-rendering weight when produced by the renderer.
struct LinearImage {
  int width = 0;
  int height = 0;
  std::vector<Rgb> pixels;
  std::optional<std::vector<double>> alpha;

  LinearImage() = default;
  LinearImage(int w, int h);

  Rgb& at(int x, int y) { return pixels[index(x, y)]; }
  const Rgb& at(int x, int y) const { return pixels[index(x, y)]; }
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
           static_cast<std::size_t>(x);
  }
};

/// Decoded portable float map, row 0 at the top (the file stores rows
/// bottom-to-top; the reader flips).
struct PfmImage {
  int width = 0;
  int height = 0;
  int channels = 0;  // 3 for "PF", 1 for "Pf"
  std::vector<float> data;
};

/// Throws FormatError on malformed headers, truncated data, or NaN/Inf texels
/// (message names the pixel).
PfmImage read_pfm(const std::string& path);

/// Writes little-endian PFM (negative scale). channels must be 1 or 3.
void write_pfm(const std::string& path, const PfmImage& image);

/// Color PFM from the image's RGB channels, unclamped.
void write_pfm(const std::string& path, const LinearImage& image);

/// Color image -> LinearImage, rejecting grayscale input.
LinearImage to_linear_image(const PfmImage& pfm);

/// sRGB encoding of a linear value: clamp to [0, 1] then the piecewise
/// 12.92 / 1.055 x^(1/2.4) - 0.055 curve.
double linear_to_srgb(double v);

/// 8-bit binary PPM (P6) after exposure and sRGB encoding.
void write_srgb_ppm(const std::string& path, const LinearImage& image, double exposure = 1.0);

/// 8-bit grayscale PGM (P5) of the alpha channel. Throws if alpha is absent.
void write_alpha_pgm(const std::string& path, const LinearImage& image);

}  // namespace prtvol
