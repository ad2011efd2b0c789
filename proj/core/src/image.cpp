// Copyright 2026 The prtvol Authors
// SPDX-License-Identifier: Apache-2.0

#include "prtvol/image.h"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace prtvol {
namespace {

std::string read_token(std::istream& in) {
  std::string tok;
  if (!(in >> tok)) throw FormatError("PFM: truncated header");
  return tok;
}

float byteswap_float(float v) {
  std::uint32_t bits = std::bit_cast<std::uint32_t>(v);
  bits = ((bits & 0x000000FFu) << 24) | ((bits & 0x0000FF00u) << 8) |
         ((bits & 0x00FF0000u) >> 8) | ((bits & 0xFF000000u) >> 24);
  return std::bit_cast<float>(bits);
}

std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(std::lround(clamp01(v) * 255.0));
}

}  // namespace

LinearImage::LinearImage(int w, int h) : width(w), height(h) {
  if (w <= 0 || h <= 0) throw InvalidArgument("LinearImage: non-positive size");
  pixels.assign(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), Rgb{});
}

PfmImage read_pfm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");

  PfmImage img;
  const std::string magic = read_token(in);
  if (magic == "PF") {
    img.channels = 3;
  } else if (magic == "Pf") {
    img.channels = 1;
  } else {
    throw FormatError("PFM '" + path + "': bad magic '" + magic.substr(0, 8) +
                      "' (expected PF or Pf)");
  }
  double scale = 0.0;
  try {
    img.width = std::stoi(read_token(in));
    img.height = std::stoi(read_token(in));
    scale = std::stod(read_token(in));
  } catch (const std::logic_error&) {
    throw FormatError("PFM '" + path + "': non-numeric header field");
  }
  if (img.width <= 0 || img.height <= 0) {
    throw FormatError("PFM '" + path + "': non-positive dimensions");
  }
  if (scale == 0.0 || !std::isfinite(scale)) {
    throw FormatError("PFM '" + path + "': invalid scale field");
  }
  // Exactly one whitespace byte separates the header from the raster.
  in.get();

  const bool file_little = scale < 0.0;
  const bool host_little = std::endian::native == std::endian::little;
  const std::size_t row_len = static_cast<std::size_t>(img.width) * img.channels;
  img.data.resize(row_len * static_cast<std::size_t>(img.height));
  std::vector<float> row(row_len);
  // File rows run bottom to top.
  for (int fr = 0; fr < img.height; ++fr) {
    in.read(reinterpret_cast<char*>(row.data()),
            static_cast<std::streamsize>(row_len * sizeof(float)));
    if (!in) throw FormatError("PFM '" + path + "': truncated raster");
    const int y = img.height - 1 - fr;
    for (std::size_t i = 0; i < row_len; ++i) {
      float v = file_little == host_little ? row[i] : byteswap_float(row[i]);
      if (!std::isfinite(v)) {
        std::ostringstream msg;
        msg << "PFM '" << path << "': non-finite value at pixel (x=" << i / img.channels
            << ", y=" << y << ")";
        throw FormatError(msg.str());
      }
      img.data[static_cast<std::size_t>(y) * row_len + i] = v;
    }
  }
  return img;
}

void write_pfm(const std::string& path, const PfmImage& image) {
  if (image.channels != 1 && image.channels != 3) {
    throw InvalidArgument("write_pfm: channels must be 1 or 3");
  }
  const std::size_t row_len = static_cast<std::size_t>(image.width) * image.channels;
  if (image.data.size() != row_len * static_cast<std::size_t>(image.height)) {
    throw InvalidArgument("write_pfm: data size does not match dimensions");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << (image.channels == 3 ? "PF" : "Pf") << "\n"
      << image.width << " " << image.height << "\n"
      << "-1.0\n";
  std::vector<float> row(row_len);
  for (int fr = 0; fr < image.height; ++fr) {
    const int y = image.height - 1 - fr;
    for (std::size_t i = 0; i < row_len; ++i) {
      const float v = image.data[static_cast<std::size_t>(y) * row_len + i];
      row[i] = std::endian::native == std::endian::little ? v : byteswap_float(v);
    }
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row_len * sizeof(float)));
  }
  if (!out) throw Error("write failed for '" + path + "'");
}

void write_pfm(const std::string& path, const LinearImage& image) {
  PfmImage pfm;
  pfm.width = image.width;
  pfm.height = image.height;
  pfm.channels = 3;
  pfm.data.reserve(image.pixels.size() * 3);
  for (const Rgb& c : image.pixels) {
    pfm.data.push_back(static_cast<float>(c.r));
    pfm.data.push_back(static_cast<float>(c.g));
    pfm.data.push_back(static_cast<float>(c.b));
  }
  write_pfm(path, pfm);
}

LinearImage to_linear_image(const PfmImage& pfm) {
  if (pfm.channels != 3) throw FormatError("expected a color PFM (PF), got grayscale (Pf)");
  LinearImage img(pfm.width, pfm.height);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    img.pixels[i] = Rgb(pfm.data[3 * i], pfm.data[3 * i + 1], pfm.data[3 * i + 2]);
  }
  return img;
}

double linear_to_srgb(double v) {
  if (!std::isfinite(v)) throw InvalidArgument("linear_to_srgb: non-finite input");
  const double c = clamp01(v);
  if (c <= 0.0031308) return 12.92 * c;
  if (c >= 1.0) return 1.0;
  return 1.055 * std::pow(c, 1.0 / 2.4) - 0.055;
}

void write_srgb_ppm(const std::string& path, const LinearImage& image, double exposure) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << "P6\n" << image.width << " " << image.height << "\n255\n";
  std::vector<std::uint8_t> bytes;
  bytes.reserve(image.pixels.size() * 3);
  for (const Rgb& c : image.pixels) {
    for (int k = 0; k < 3; ++k) bytes.push_back(to_byte(linear_to_srgb(c[k] * exposure)));
  }
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed for '" + path + "'");
}

void write_alpha_pgm(const std::string& path, const LinearImage& image) {
  if (!image.alpha) throw InvalidArgument("write_alpha_pgm: image has no alpha channel");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << "P5\n" << image.width << " " << image.height << "\n255\n";
  std::vector<std::uint8_t> bytes;
  bytes.reserve(image.alpha->size());
  for (double a : *image.alpha) bytes.push_back(to_byte(a));
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed for '" + path + "'");
}

}  // namespace prtvol
