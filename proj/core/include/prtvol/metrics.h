// Copyright 2026 The prtvol Authors
// SPDX-License-Identifier: Apache-2.0

// Normal-map accuracy metrics: masked cosine similarity and the L1 distance
// between Laplacians, where the Laplacian of an image is the image minus its
// Gaussian blur.
//
// Both metrics divide by the total pixel count L*M by default. The
// mask-normalized variant divides by the mask sum instead.

#pragma once

#include <string>
#include <vector>

#include "prtvol/image.h"
#include "prtvol/math.h"

namespace prtvol {

struct NormalMap {
  int width = 0;
  int height = 0;
  std::vector<Vec3> normals;
  std::vector<double> mask;  // per pixel, in [0, 1]

  NormalMap() = default;
  /// All normals +z, mask 1.
  NormalMap(int w, int h);

  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
           static_cast<std::size_t>(x);
  }
  Vec3& at(int x, int y) { return normals[index(x, y)]; }
  const Vec3& at(int x, int y) const { return normals[index(x, y)]; }
};

/// Color PFM as normals (raw values), optional grayscale PFM mask. Without a
/// mask, every pixel gets weight 1.
NormalMap load_normal_map(const std::string& normals_path, const std::string& mask_path = "");

enum class MetricNormalization { pixel_count, mask_sum };

struct MetricOptions {
  double blur_sigma = 1.0;
  MetricNormalization normalization = MetricNormalization::pixel_count;
};

/// (1/LM) sum_{l,m} (a . b) * min(mask_a, mask_b)
double normal_cosine_similarity(const NormalMap& a, const NormalMap& b,
                                const MetricOptions& options = {});

/// Single-channel image in row-major order.
struct ScalarImage {
  int width = 0;
  int height = 0;
  std::vector<double> values;
};

/// Normalized separable Gaussian, radius ceil(3 sigma).
std::vector<double> gaussian_kernel(double sigma);

/// Separable Gaussian blur with mirror padding (edge pixel not repeated).
ScalarImage gaussian_blur(const ScalarImage& img, double sigma);

/// img - gaussian_blur(img, sigma)
ScalarImage laplacian(const ScalarImage& img, double sigma);

/// (1/LM) sum over pixels and xyz components of |lap(a) - lap(b)| * min(mask_a, mask_b)
double laplacian_l1(const NormalMap& a, const NormalMap& b, const MetricOptions& options = {});

/// Axis-aligned pixel box.
struct PixelBox {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;
};

/// Crops `box` (pixels outside the map read as masked-out), pads the shorter
/// side symmetrically to a square, and resamples bilinearly to size x size.
/// Resampled normals are renormalized where the mask is non-zero.
NormalMap crop_pad_resize(const NormalMap& map, const PixelBox& box, int size = 256);

}  // namespace prtvol
