// Copyright 2026 The prtvol Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <string>

#include "prtvol/error.h"
#include "prtvol/image.h"
#include "test_util.h"

namespace prtvol {
namespace {

using testing::read_file;
using testing::TempDir;
using testing::write_file;

std::string raw_floats(std::initializer_list<float> values, bool big_endian) {
  std::string out;
  for (float v : values) {
    char b[4];
    std::memcpy(b, &v, 4);
    if (big_endian) {
      std::swap(b[0], b[3]);
      std::swap(b[1], b[2]);
    }
    out.append(b, 4);
  }
  return out;
}

TEST(Pfm, RoundTripKeepsTopRowFirst) {
  TempDir dir;
  LinearImage img(3, 2);
  for (int y = 0; y < 2; ++y) {
    for (int x = 0; x < 3; ++x) img.at(x, y) = Rgb(x, y, 0.5 * x + y);
  }
  write_pfm(dir.file("a.pfm"), img);
  const PfmImage back = read_pfm(dir.file("a.pfm"));
  ASSERT_EQ(back.channels, 3);
  const LinearImage lin = to_linear_image(back);
  for (int y = 0; y < 2; ++y) {
    for (int x = 0; x < 3; ++x) {
      EXPECT_EQ(lin.at(x, y).r, img.at(x, y).r);
      EXPECT_EQ(lin.at(x, y).g, img.at(x, y).g);
      EXPECT_EQ(lin.at(x, y).b, img.at(x, y).b);
    }
  }
  const std::string bytes = read_file(dir.file("a.pfm"));
  EXPECT_EQ(bytes.substr(0, 12), "PF\n3 2\n-1.0\n");
  // First stored row is the bottom image row (y = 1).
  float first;
  std::memcpy(&first, bytes.data() + 12 + 4, 4);
  EXPECT_EQ(first, 1.0f);
}

TEST(Pfm, ReadsBigEndianGrayscale) {
  TempDir dir;
  write_file(dir.file("g.pfm"), "Pf\n2 1\n1.0\n" + raw_floats({0.25f, 4.0f}, true));
  const PfmImage img = read_pfm(dir.file("g.pfm"));
  EXPECT_EQ(img.channels, 1);
  EXPECT_EQ(img.data[0], 0.25f);
  EXPECT_EQ(img.data[1], 4.0f);
  EXPECT_THROW(to_linear_image(img), FormatError);
}

TEST(Pfm, ConstantMapOneByTwo) {
  TempDir dir;
  write_file(dir.file("c.pfm"), "PF\n1 2\n-1\n" + raw_floats({1, 1, 1, 1, 1, 1}, false));
  const LinearImage img = to_linear_image(read_pfm(dir.file("c.pfm")));
  EXPECT_EQ(img.width, 1);
  EXPECT_EQ(img.height, 2);
  EXPECT_EQ(img.at(0, 1).g, 1.0);
}

TEST(Pfm, BadMagicNamesHeader) {
  TempDir dir;
  write_file(dir.file("bad.pfm"), "P6\n1 1\n255\nabc");
  try {
    read_pfm(dir.file("bad.pfm"));
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("'P6'"), std::string::npos) << e.what();
  }
}

TEST(Pfm, NanTexelNamesPixel) {
  TempDir dir;
  const float nan = std::nanf("");
  write_file(dir.file("nan.pfm"), "Pf\n2 2\n-1\n" + raw_floats({0, 0, 0, nan}, false));
  try {
    read_pfm(dir.file("nan.pfm"));
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    // Second stored row is the top image row.
    EXPECT_NE(std::string(e.what()).find("(x=1, y=0)"), std::string::npos) << e.what();
  }
}

TEST(Pfm, MalformedHeadersAndTruncation) {
  TempDir dir;
  const struct {
    const char* name;
    std::string bytes;
  } cases[] = {
      {"dims", "PF\n0 1\n-1\n"},
      {"scale", "PF\n1 1\n0\n" + raw_floats({1, 1, 1}, false)},
      {"text", "PF\nw h\n-1\n"},
      {"short", "PF\n2 2\n-1\n" + raw_floats({1, 1, 1}, false)},
      {"empty", ""},
  };
  for (const auto& c : cases) {
    write_file(dir.file(c.name), c.bytes);
    EXPECT_THROW(read_pfm(dir.file(c.name)), FormatError) << c.name;
  }
  EXPECT_THROW(read_pfm(dir.file("missing.pfm")), Error);
}

TEST(Pfm, WriteRejectsInconsistentImage) {
  TempDir dir;
  PfmImage img{2, 2, 2, std::vector<float>(8)};
  EXPECT_THROW(write_pfm(dir.file("x.pfm"), img), InvalidArgument);
  img.channels = 3;
  EXPECT_THROW(write_pfm(dir.file("x.pfm"), img), InvalidArgument);
}

TEST(Srgb, TransferFunction) {
  EXPECT_EQ(linear_to_srgb(0.0), 0.0);
  EXPECT_NEAR(linear_to_srgb(1.0), 1.0, 1e-12);
  EXPECT_NEAR(linear_to_srgb(0.0031308), 0.04045, 1e-6);
  EXPECT_EQ(linear_to_srgb(2.0), 1.0);
  EXPECT_EQ(linear_to_srgb(-1.0), 0.0);
  EXPECT_NEAR(linear_to_srgb(0.5), 1.055 * std::pow(0.5, 1.0 / 2.4) - 0.055, 1e-12);
  EXPECT_THROW(linear_to_srgb(std::nan("")), InvalidArgument);
  double prev = 0.0;
  for (int i = 1; i <= 1000; ++i) {
    const double v = linear_to_srgb(i / 1000.0);
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(Ppm, SrgbAndAlphaOutputs) {
  TempDir dir;
  LinearImage img(2, 1);
  img.at(0, 0) = Rgb(0.0, 0.5, 1.0);
  img.at(1, 0) = Rgb(2.0, 0.25, 0.0);
  EXPECT_THROW(write_alpha_pgm(dir.file("a.pgm"), img), InvalidArgument);
  img.alpha = std::vector<double>{0.0, 1.0};
  write_srgb_ppm(dir.file("c.ppm"), img);
  write_alpha_pgm(dir.file("a.pgm"), img);
  const std::string ppm = read_file(dir.file("c.ppm"));
  ASSERT_EQ(ppm.substr(0, 11), "P6\n2 1\n255\n");
  const auto px = [&](std::size_t i) { return static_cast<unsigned char>(ppm[11 + i]); };
  EXPECT_EQ(px(0), 0);
  EXPECT_EQ(px(1), static_cast<unsigned char>(std::lround(linear_to_srgb(0.5) * 255.0)));
  EXPECT_EQ(px(2), 255);
  EXPECT_EQ(px(3), 255);
  const std::string pgm = read_file(dir.file("a.pgm"));
  ASSERT_EQ(pgm.substr(0, 11), "P5\n2 1\n255\n");
  EXPECT_EQ(static_cast<unsigned char>(pgm[11]), 0);
  EXPECT_EQ(static_cast<unsigned char>(pgm[12]), 255);

  write_srgb_ppm(dir.file("e.ppm"), img, 0.5);
  EXPECT_EQ(static_cast<unsigned char>(read_file(dir.file("e.ppm"))[11 + 3]),
            static_cast<unsigned char>(std::lround(linear_to_srgb(1.0) * 255.0)));
}

}  // namespace
}  // namespace prtvol
