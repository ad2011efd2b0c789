// Copyright 2026 The prtvol Authors
// SPDX-License-Identifier: Apache-2.0

#include "prtvol/metrics.h"

#include <algorithm>
#include <cmath>

namespace prtvol {
namespace {

void check_same_size(const NormalMap& a, const NormalMap& b) {
  if (a.width != b.width || a.height != b.height) {
    throw InvalidArgument("normal maps differ in size: " + std::to_string(a.width) + "x" +
                          std::to_string(a.height) + " vs " + std::to_string(b.width) + "x" +
                          std::to_string(b.height));
  }
  if (a.normals.size() != a.mask.size() || b.normals.size() != b.mask.size()) {
    throw InvalidArgument("normal map and mask sizes differ");
  }
}

double normalizer(const NormalMap& a, const NormalMap& b, const MetricOptions& options) {
  if (options.normalization == MetricNormalization::pixel_count) {
    return static_cast<double>(a.normals.size());
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.mask.size(); ++i) sum += std::min(a.mask[i], b.mask[i]);
  return sum;
}

// Mirror index into [0, n): -1 -> 1, n -> n - 2.
int reflect(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

ScalarImage component(const NormalMap& map, int axis) {
  ScalarImage img{map.width, map.height, std::vector<double>(map.normals.size())};
  for (std::size_t i = 0; i < map.normals.size(); ++i) img.values[i] = map.normals[i][axis];
  return img;
}

}  // namespace

NormalMap::NormalMap(int w, int h) : width(w), height(h) {
  if (w <= 0 || h <= 0) throw InvalidArgument("NormalMap: non-positive size");
  normals.assign(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), Vec3{0, 0, 1});
  mask.assign(normals.size(), 1.0);
}

NormalMap load_normal_map(const std::string& normals_path, const std::string& mask_path) {
  const PfmImage n = read_pfm(normals_path);
  if (n.channels != 3) throw FormatError("normal map '" + normals_path + "' must be a color PFM");
  NormalMap map(n.width, n.height);
  for (std::size_t i = 0; i < map.normals.size(); ++i) {
    map.normals[i] = {n.data[3 * i], n.data[3 * i + 1], n.data[3 * i + 2]};
  }
  if (!mask_path.empty()) {
    const PfmImage m = read_pfm(mask_path);
    if (m.channels != 1) throw FormatError("mask '" + mask_path + "' must be a grayscale PFM");
    if (m.width != n.width || m.height != n.height) {
      throw FormatError("mask '" + mask_path + "' size differs from its normal map");
    }
    for (std::size_t i = 0; i < map.mask.size(); ++i) map.mask[i] = clamp01(m.data[i]);
  }
  return map;
}

double normal_cosine_similarity(const NormalMap& a, const NormalMap& b,
                                const MetricOptions& options) {
  check_same_size(a, b);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.normals.size(); ++i) {
    sum += dot(a.normals[i], b.normals[i]) * std::min(a.mask[i], b.mask[i]);
  }
  const double denom = normalizer(a, b, options);
  return denom > 0.0 ? sum / denom : 0.0;
}

std::vector<double> gaussian_kernel(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw InvalidArgument("gaussian blur sigma must be finite and > 0");
  }
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double v = std::exp(-0.5 * (i * i) / (sigma * sigma));
    k[static_cast<std::size_t>(i + radius)] = v;
    sum += v;
  }
  for (double& v : k) v /= sum;
  return k;
}

ScalarImage gaussian_blur(const ScalarImage& img, double sigma) {
  const std::vector<double> k = gaussian_kernel(sigma);
  const int r = static_cast<int>(k.size() / 2);
  const int w = img.width, h = img.height;
  auto at = [&](const std::vector<double>& v, int x, int y) {
    return v[static_cast<std::size_t>(y) * w + x];
  };
  std::vector<double> tmp(img.values.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double s = 0.0;
      for (int i = -r; i <= r; ++i) s += k[static_cast<std::size_t>(i + r)] * at(img.values, reflect(x + i, w), y);
      tmp[static_cast<std::size_t>(y) * w + x] = s;
    }
  }
  ScalarImage out{w, h, std::vector<double>(img.values.size())};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double s = 0.0;
      for (int i = -r; i <= r; ++i) s += k[static_cast<std::size_t>(i + r)] * at(tmp, x, reflect(y + i, h));
      out.values[static_cast<std::size_t>(y) * w + x] = s;
    }
  }
  return out;
}

ScalarImage laplacian(const ScalarImage& img, double sigma) {
  ScalarImage blurred = gaussian_blur(img, sigma);
  for (std::size_t i = 0; i < blurred.values.size(); ++i) {
    blurred.values[i] = img.values[i] - blurred.values[i];
  }
  return blurred;
}

double laplacian_l1(const NormalMap& a, const NormalMap& b, const MetricOptions& options) {
  check_same_size(a, b);
  double sum = 0.0;
  for (int axis = 0; axis < 3; ++axis) {
    const ScalarImage la = laplacian(component(a, axis), options.blur_sigma);
    const ScalarImage lb = laplacian(component(b, axis), options.blur_sigma);
    for (std::size_t i = 0; i < la.values.size(); ++i) {
      sum += std::abs(la.values[i] - lb.values[i]) * std::min(a.mask[i], b.mask[i]);
    }
  }
  const double denom = normalizer(a, b, options);
  return denom > 0.0 ? sum / denom : 0.0;
}

NormalMap crop_pad_resize(const NormalMap& map, const PixelBox& box, int size) {
  if (box.width <= 0 || box.height <= 0) throw InvalidArgument("crop box must be non-empty");
  if (size <= 0) throw InvalidArgument("output size must be positive");
  const int side = std::max(box.width, box.height);
  // Square in source pixel coordinates, centered on the box.
  const double x0 = box.x - 0.5 * (side - box.width);
  const double y0 = box.y - 0.5 * (side - box.height);

  auto fetch = [&](int x, int y, Vec3& n, double& m) {
    if (x < 0 || y < 0 || x >= map.width || y >= map.height) {
      n = {};
      m = 0.0;
      return;
    }
    const bool in_box = x >= box.x && y >= box.y && x < box.x + box.width && y < box.y + box.height;
    n = map.at(x, y);
    m = in_box ? map.mask[map.index(x, y)] : 0.0;
  };

  NormalMap out(size, size);
  const double scale = static_cast<double>(side) / size;
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const double sx = x0 + (x + 0.5) * scale - 0.5;
      const double sy = y0 + (y + 0.5) * scale - 0.5;
      const int ix = static_cast<int>(std::floor(sx));
      const int iy = static_cast<int>(std::floor(sy));
      const double fx = sx - ix, fy = sy - iy;
      Vec3 n;
      double m = 0.0;
      const double wts[4] = {(1 - fx) * (1 - fy), fx * (1 - fy), (1 - fx) * fy, fx * fy};
      const int dx[4] = {0, 1, 0, 1}, dy[4] = {0, 0, 1, 1};
      for (int k = 0; k < 4; ++k) {
        Vec3 nk;
        double mk;
        fetch(ix + dx[k], iy + dy[k], nk, mk);
        n += nk * (wts[k] * mk);
        m += wts[k] * mk;
      }
      const std::size_t i = out.index(x, y);
      out.mask[i] = m;
      const double len = length(n);
      out.normals[i] = m > 0.0 && len > 0.0 ? n / len : Vec3{};
    }
  }
  return out;
}

}  // namespace prtvol
