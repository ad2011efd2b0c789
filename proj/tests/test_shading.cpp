// Copyright 2026 The prtvol Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>

#include "prtvol/error.h"
#include "prtvol/rng.h"
#include "prtvol/shading.h"

namespace prtvol {
namespace {

ShVector clamped_cosine(const Direction& n) {
  return project([&](const Direction& d) { return std::max(0.0, dot(d.vec(), n.vec())); });
}

const ShLight& unit_light() {
  static const ShLight l = ShLight::from_scalar(
      project([](const Direction&) { return 1.0; }), Rgb(1.0));
  return l;
}

TransferSample sample_with(const Material& m, const Direction& n) {
  SurfacePoint p;
  p.normal = n;
  p.material = m;
  p.valid = true;
  return {p, clamped_cosine(n)};
}

TEST(Reflect, MirrorsAboutNormal) {
  const Direction n(0, 0, 1);
  EXPECT_EQ(reflect_direction(n, n).vec(), n.vec());
  const Direction r = reflect_direction(Direction(1, 0, 1), n);
  EXPECT_NEAR(r.x(), -1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(r.z(), 1.0 / std::sqrt(2.0), 1e-15);
  Rng rng(2);
  for (int k = 0; k < 50; ++k) {
    const Direction v = rng.uniform_sphere(), m = rng.uniform_sphere();
    const Direction w = reflect_direction(v, m);
    EXPECT_NEAR(dot(w.vec(), m.vec()), dot(v.vec(), m.vec()), 1e-12);
    EXPECT_NEAR(reflect_direction(w, m).x(), v.x(), 1e-12);
  }
}

TEST(Diffuse, ConstantLightRecoversAlbedo) {
  const Rgb albedo(0.8, 0.5, 0.25);
  Rng rng(3);
  for (int k = 0; k < 5; ++k) {
    const Rgb c = diffuse_radiance(albedo, clamped_cosine(rng.uniform_sphere()), unit_light());
    EXPECT_NEAR(c.r, 0.8, 1e-3);
    EXPECT_NEAR(c.g, 0.5, 1e-3);
    EXPECT_NEAR(c.b, 0.25, 1e-3);
  }
}

TEST(Diffuse, ZeroLightAndDegreeMismatch) {
  const Rgb c = diffuse_radiance(Rgb(1.0), clamped_cosine(Direction(0, 0, 1)), ShLight(4));
  EXPECT_EQ(c.r, 0.0);
  EXPECT_EQ(c.b, 0.0);
  EXPECT_THROW(diffuse_radiance(Rgb(1.0), ShVector(2), ShLight(4)), InvalidArgument);
}

TEST(Specular, TintZeroIsBlack) {
  const Direction n(0, 1, 0);
  const Rgb c = specular_radiance(0.0, n, n, clamped_cosine(n), unit_light());
  EXPECT_EQ(c.r, 0.0);
  EXPECT_EQ(c.g, 0.0);
}

TEST(Specular, ViewAlongNormalUsesPoleReconstruction) {
  // Degree-4 reconstruction of max(0, cos) at angle 0 is 31/32.
  const Direction n(0, 0, 1);
  const Rgb c = specular_radiance(0.4, n, n, clamped_cosine(n), unit_light());
  EXPECT_NEAR(c.r, 0.4 * 0.96875, 1e-3);
  EXPECT_NEAR(c.g, c.r, 1e-15);
}

TEST(Outgoing, CombinedIsDiffusePlusSpecular) {
  const Direction n(0.2, 0.3, 1.0);
  const Direction view(0.0, 0.5, 1.0);
  const RadianceSample no_tint = outgoing_radiance(sample_with({Rgb(0.6), 0.0}, n), view, unit_light());
  EXPECT_EQ(no_tint.combined, no_tint.diffuse);
  const RadianceSample mirror = outgoing_radiance(sample_with({Rgb(0.0), 1.0}, n), view, unit_light());
  EXPECT_EQ(mirror.combined, mirror.specular);
  const RadianceSample both = outgoing_radiance(sample_with({Rgb(0.3, 0.4, 0.5), 0.7}, n), view, unit_light());
  for (int c = 0; c < 3; ++c) EXPECT_EQ(both.combined[c], both.diffuse[c] + both.specular[c]);
}

}  // namespace
}  // namespace prtvol
