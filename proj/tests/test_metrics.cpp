// Copyright 2026 The prtvol Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "prtvol/error.h"
#include "prtvol/metrics.h"
#include "prtvol/rng.h"

namespace prtvol {
namespace {

NormalMap random_map(int w, int h, std::uint64_t seed) {
  NormalMap m(w, h);
  Rng rng(seed);
  for (auto& n : m.normals) n = rng.uniform_sphere().vec();
  return m;
}

TEST(Cosine, IdenticalOppositeAndMasked) {
  const NormalMap a = random_map(16, 12, 1);
  EXPECT_NEAR(normal_cosine_similarity(a, a), 1.0, 1e-12);
  NormalMap neg = a;
  for (auto& n : neg.normals) n = -n;
  EXPECT_NEAR(normal_cosine_similarity(a, neg), -1.0, 1e-12);
  NormalMap masked = a;
  std::fill(masked.mask.begin(), masked.mask.end(), 0.0);
  EXPECT_EQ(normal_cosine_similarity(a, masked), 0.0);
}

TEST(Cosine, NormalizationModes) {
  NormalMap a = random_map(10, 10, 2);
  for (int y = 0; y < 10; ++y) {
    for (int x = 5; x < 10; ++x) a.mask[a.index(x, y)] = 0.0;
  }
  EXPECT_NEAR(normal_cosine_similarity(a, a), 0.5, 1e-12);
  MetricOptions o;
  o.normalization = MetricNormalization::mask_sum;
  EXPECT_NEAR(normal_cosine_similarity(a, a, o), 1.0, 1e-12);
}

TEST(Cosine, SymmetricAndSizeChecked) {
  const NormalMap a = random_map(8, 8, 3), b = random_map(8, 8, 4);
  EXPECT_EQ(normal_cosine_similarity(a, b), normal_cosine_similarity(b, a));
  EXPECT_THROW(normal_cosine_similarity(a, random_map(8, 7, 5)), InvalidArgument);
}

TEST(Gaussian, KernelNormalizedWithRadius) {
  for (double sigma : {0.5, 1.0, 2.3}) {
    const auto k = gaussian_kernel(sigma);
    const int r = static_cast<int>(std::ceil(3.0 * sigma));
    ASSERT_EQ(k.size(), static_cast<std::size_t>(2 * r + 1));
    EXPECT_NEAR(std::accumulate(k.begin(), k.end(), 0.0), 1.0, 1e-12);
    EXPECT_EQ(k.front(), k.back());
  }
  EXPECT_THROW(gaussian_kernel(0.0), InvalidArgument);
}

TEST(Laplacian, ConstantImpulseAndRamp) {
  ScalarImage c{9, 7, std::vector<double>(63, 2.5)};
  for (double v : laplacian(c, 1.0).values) EXPECT_NEAR(v, 0.0, 1e-12);

  ScalarImage impulse{15, 15, std::vector<double>(225, 0.0)};
  impulse.values[7 * 15 + 7] = 1.0;
  const auto k = gaussian_kernel(1.0);
  const double kc = k[k.size() / 2];
  EXPECT_NEAR(laplacian(impulse, 1.0).values[7 * 15 + 7], 1.0 - kc * kc, 1e-12);

  ScalarImage ramp{20, 20, std::vector<double>(400)};
  for (int y = 0; y < 20; ++y) {
    for (int x = 0; x < 20; ++x) ramp.values[y * 20 + x] = 0.3 * x - 0.1 * y;
  }
  const ScalarImage lr = laplacian(ramp, 1.0);
  for (int y = 4; y < 16; ++y) {
    for (int x = 4; x < 16; ++x) EXPECT_NEAR(lr.values[y * 20 + x], 0.0, 1e-12);
  }
}

TEST(Laplacian, MirrorPaddingSkipsEdge) {
  // Pixel -1 mirrors pixel 1, so an impulse at 1 reaches pixel 0 from both sides.
  ScalarImage img{5, 1, {0, 1, 0, 0, 0}};
  const ScalarImage b = gaussian_blur(img, 0.5);
  const auto k = gaussian_kernel(0.5);
  EXPECT_NEAR(b.values[0], 2.0 * k[1], 1e-12);
  EXPECT_NEAR(b.values[1], k[2] + k[0], 1e-12);
}

TEST(LaplacianL1, IdentityOffsetAndSymmetry) {
  const NormalMap a = random_map(24, 24, 6), b = random_map(24, 24, 7);
  EXPECT_EQ(laplacian_l1(a, a), 0.0);
  NormalMap shifted = a;
  for (auto& n : shifted.normals) n = n + Vec3{0.2, -0.1, 0.05};
  EXPECT_LE(laplacian_l1(a, shifted), 1e-3);
  EXPECT_NEAR(laplacian_l1(a, b), laplacian_l1(b, a), 1e-12);
  EXPECT_GT(laplacian_l1(a, b), 0.1);
}

TEST(CropPadResize, PadsToSquareAndRenormalizes) {
  NormalMap m(8, 4);
  for (auto& n : m.normals) n = Vec3{0, 3, 4};
  const NormalMap r = crop_pad_resize(m, {0, 0, 8, 4}, 16);
  EXPECT_EQ(r.width, 16);
  EXPECT_EQ(r.height, 16);
  EXPECT_NEAR(r.mask[r.index(8, 8)], 1.0, 1e-12);
  EXPECT_NEAR(length(r.at(8, 8)), 1.0, 1e-12);
  EXPECT_NEAR(r.at(8, 8)[1], 0.6, 1e-12);
  EXPECT_EQ(r.mask[r.index(8, 0)], 0.0);
  EXPECT_EQ(r.mask[r.index(8, 15)], 0.0);
  const NormalMap outside = crop_pad_resize(m, {100, 100, 4, 4}, 4);
  for (double v : outside.mask) EXPECT_EQ(v, 0.0);
  EXPECT_THROW(crop_pad_resize(m, {0, 0, 0, 4}), InvalidArgument);
  EXPECT_THROW(crop_pad_resize(m, {0, 0, 4, 4}, 0), InvalidArgument);
}

}  // namespace
}  // namespace prtvol
