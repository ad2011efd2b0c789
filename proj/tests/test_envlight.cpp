// Copyright 2026 The prtvol Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>

#include "prtvol/envlight.h"
#include "prtvol/error.h"
#include "prtvol/image.h"
#include "prtvol/rng.h"
#include "test_util.h"

namespace prtvol {
namespace {

ShLight random_light(int degree, std::uint64_t seed) {
  Rng rng(seed);
  ShLight l(degree);
  for (auto& ch : l.channels) {
    for (std::size_t j = 0; j < ch.size(); ++j) ch[j] = j == 0 ? 3.0 : 0.08 * rng.normal();
  }
  return l;
}

TEST(EnvironmentLight, ConstantEverywhere) {
  const EnvironmentLight env = EnvironmentLight::constant(Rgb(0.2, 0.4, 0.8));
  Rng rng(1);
  for (int k = 0; k < 20; ++k) {
    const Rgb c = env.radiance(rng.uniform_sphere());
    EXPECT_EQ(c.r, 0.2);
    EXPECT_EQ(c.b, 0.8);
  }
  EXPECT_EQ(env.kind(), EnvironmentLight::Kind::constant);
  EXPECT_THROW(EnvironmentLight::constant(Rgb(-1.0)), InvalidArgument);
}

TEST(EnvironmentLight, EquirectangularConstantMapIsUniform) {
  LinearImage img(1, 2);
  img.at(0, 0) = img.at(0, 1) = Rgb(1.0);
  const EnvironmentLight env = EnvironmentLight::equirectangular(img);
  for (const Direction& d : {Direction(0, 0, 1), Direction(0, 0, -1), Direction(1, 0, 0),
                             Direction(0, -1, 0)}) {
    EXPECT_DOUBLE_EQ(env.radiance(d).g, 1.0);
  }
}

TEST(EnvironmentLight, EquirectangularOrientation) {
  // Top row is the +z pole; columns advance with phi from +x toward +y.
  LinearImage img(4, 2);
  for (int x = 0; x < 4; ++x) {
    img.at(x, 0) = Rgb(1.0, 0.0, x);
    img.at(x, 1) = Rgb(0.0, 1.0, x);
  }
  const EnvironmentLight env = EnvironmentLight::equirectangular(img);
  EXPECT_DOUBLE_EQ(env.radiance(Direction(0, 0, 1)).r, 1.0);
  EXPECT_DOUBLE_EQ(env.radiance(Direction(0, 0, -1)).g, 1.0);
  // phi = pi / 4 and 3 pi / 4 are the centers of columns 0 and 1.
  EXPECT_NEAR(env.radiance(Direction::from_spherical(0.25 * kPi, 0.25 * kPi)).b, 0.0, 1e-12);
  EXPECT_NEAR(env.radiance(Direction::from_spherical(0.25 * kPi, 0.75 * kPi)).b, 1.0, 1e-12);
  // Wraps between the last and first column at phi = 0.
  EXPECT_NEAR(env.radiance(Direction::from_spherical(0.25 * kPi, 0.0)).b, 1.5, 1e-12);
}

TEST(EnvironmentLight, RejectsInvalidTexelWithCoordinates) {
  LinearImage img(3, 2);
  img.at(2, 1) = Rgb(0.0, -1.0, 0.0);
  try {
    EnvironmentLight::equirectangular(img);
    FAIL();
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("(x=2, y=1)"), std::string::npos) << e.what();
  }
}

TEST(EnvironmentLight, LobePeaksOnAxis) {
  const Direction axis(1, 2, 3);
  const EnvironmentLight env = EnvironmentLight::lobe(axis, 4.0, Rgb(2.0));
  EXPECT_DOUBLE_EQ(env.radiance(axis).r, 2.0);
  EXPECT_NEAR(env.radiance(-axis).r, 2.0 * std::exp(-8.0), 1e-15);
  Rng rng(3);
  for (int k = 0; k < 50; ++k) {
    const double v = env.radiance(rng.uniform_sphere()).r;
    EXPECT_LE(v, 2.0);
    EXPECT_GE(v, 2.0 * std::exp(-8.0) - 1e-15);
  }
  EXPECT_THROW(EnvironmentLight::lobe(axis, -1.0, Rgb(1.0)), InvalidArgument);
}

TEST(ProjectToSh, ConstantLight) {
  const ShLight l = project_to_sh(EnvironmentLight::constant(Rgb(0.5, 1.0, 2.0)), 4);
  ASSERT_EQ(l.channels[0].size(), 25u);
  const double dc = 2.0 * std::sqrt(kPi);
  EXPECT_NEAR(l.channels[0][0], 0.5 * dc, 1e-3);
  EXPECT_NEAR(l.channels[1][0], 1.0 * dc, 1e-3);
  EXPECT_NEAR(l.channels[2][0], 2.0 * dc, 1e-3);
  for (const auto& ch : l.channels) {
    for (std::size_t j = 1; j < ch.size(); ++j) EXPECT_LE(std::abs(ch[j]), 1e-3);
  }
}

TEST(ProjectToSh, RecoversBandLimitedEquirectangularMap) {
  const ShLight truth = random_light(4, 11);
  LinearImage img(512, 256);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const Direction d = Direction::from_spherical((y + 0.5) * kPi / img.height,
                                                    (x + 0.5) * 2.0 * kPi / img.width);
      img.at(x, y) = reconstruct(truth, d);
    }
  }
  const ShLight got = project_to_sh(EnvironmentLight::equirectangular(img), 4);
  for (int c = 0; c < 3; ++c) {
    for (std::size_t j = 0; j < 25; ++j) EXPECT_NEAR(got.channels[c][j], truth.channels[c][j], 1e-3);
  }
}

TEST(ProjectToSh, BandLimitedIsExactAndTruncates) {
  const ShLight truth = random_light(4, 12);
  const EnvironmentLight env = EnvironmentLight::band_limited(truth);
  const ShLight same = project_to_sh(env, 4);
  EXPECT_EQ(same.channels[1], truth.channels[1]);
  const ShLight low = project_to_sh(env, 2, {}, 2.0);
  EXPECT_EQ(low.channels[0], truth.channels[0].truncated(2) * 2.0);
  const ShLight high = project_to_sh(env, 6);
  EXPECT_EQ(high.channels[2].truncated(4), truth.channels[2]);
  EXPECT_EQ(high.channels[2][30], 0.0);
  EXPECT_THROW(project_to_sh(env, 9), InvalidArgument);
}

TEST(ProjectToSh, ExposureScalesLinearly) {
  const EnvironmentLight env = EnvironmentLight::lobe(Direction(0, 1, 1), 3.0, Rgb(1, 2, 3));
  const ShLight a = project_to_sh(env, 3, {64, 128});
  const ShLight b = project_to_sh(env, 3, {64, 128}, 3.0);
  for (std::size_t j = 0; j < a.channels[0].size(); ++j) {
    EXPECT_NEAR(b.channels[2][j], 3.0 * a.channels[2][j], 1e-12);
  }
}

TEST(ShLightIo, JsonRoundTripAndErrors) {
  testing::TempDir dir;
  const ShLight l = random_light(3, 4);
  write_sh_light(dir.file("l.json"), l);
  const ShLight back = read_sh_light(dir.file("l.json"));
  for (int c = 0; c < 3; ++c) EXPECT_EQ(back.channels[c], l.channels[c]);
  EXPECT_NE(sh_light_to_json(l).find("condon-shortley"), std::string::npos);
  EXPECT_THROW(sh_light_from_json(R"({"degree": 1, "channels": [[1,0,0,0],[1,0,0,0]]})"),
               FormatError);
  EXPECT_THROW(sh_light_from_json(R"({"degree": 1, "channels": [[1,0,0],[1,0,0],[1,0,0]]})"),
               FormatError);
  EXPECT_THROW(sh_light_from_json("[]"), FormatError);
  EXPECT_THROW(read_sh_light(dir.file("missing.json")), Error);
}

TEST(AnalyticLightSpec, ParsesAndRejects) {
  EXPECT_EQ(parse_analytic_light("constant:1,2,3").radiance(Direction(0, 0, 1)).b, 3.0);
  const EnvironmentLight lobe = parse_analytic_light("lobe:0,0,1,5,1,1,1");
  EXPECT_EQ(lobe.kind(), EnvironmentLight::Kind::lobe);
  EXPECT_DOUBLE_EQ(lobe.radiance(Direction(0, 0, 1)).r, 1.0);
  for (const char* bad : {"constant", "constant:1,2", "constant:1,2,x", "sun:1,2,3",
                          "lobe:0,0,1,5,1,1", "constant:1,2,3,"}) {
    EXPECT_THROW(parse_analytic_light(bad), InvalidArgument) << bad;
  }
}

TEST(ShLightAlgebra, ReconstructAndArithmetic) {
  const ShLight l = ShLight::from_scalar(ShVector::basis_vector(0, 2), Rgb(1, 2, 3));
  const Rgb c = reconstruct(l * 2.0 + l, Direction(0.3, 0.1, -1));
  EXPECT_NEAR(c.r, 3.0 * 0.2820948, 1e-7);
  EXPECT_NEAR(c.b, 9.0 * 0.2820948, 1e-7);
  EXPECT_THROW(ShLight(ShVector(2), ShVector(2), ShVector(3)), InvalidArgument);
}

}  // namespace
}  // namespace prtvol
