// Copyright 2026 The prtvol Authors
// SPDX-License-Identifier: Apache-2.0

#include "prtvol/envlight.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "json.hpp"

namespace prtvol {
namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};

Rgb bilinear(const LinearImage& img, const Direction& dir) {
  const double theta = std::acos(std::clamp(dir.z(), -1.0, 1.0));
  double phi = std::atan2(dir.y(), dir.x());
  if (phi < 0.0) phi += 2.0 * kPi;

  const double u = phi / (2.0 * kPi) * img.width - 0.5;
  const double v = theta / kPi * img.height - 0.5;
  const double u0 = std::floor(u);
  const double v0 = std::floor(v);
  const double fu = u - u0;
  const double fv = v - v0;

  auto wrap_x = [&](long x) {
    const long w = img.width;
    return static_cast<int>(((x % w) + w) % w);
  };
  auto clamp_y = [&](long y) {
    return static_cast<int>(std::clamp<long>(y, 0, img.height - 1));
  };
  const int x0 = wrap_x(static_cast<long>(u0));
  const int x1 = wrap_x(static_cast<long>(u0) + 1);
  const int y0 = clamp_y(static_cast<long>(v0));
  const int y1 = clamp_y(static_cast<long>(v0) + 1);

  const Rgb top = img.at(x0, y0) * (1.0 - fu) + img.at(x1, y0) * fu;
  const Rgb bottom = img.at(x0, y1) * (1.0 - fu) + img.at(x1, y1) * fu;
  return top * (1.0 - fv) + bottom * fv;
}

std::vector<double> parse_numbers(const std::string& text) {
  std::vector<double> out;
  if (text.empty() || text.back() == ',') {
    throw InvalidArgument("light spec: empty number in '" + text + "'");
  }
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) throw InvalidArgument("light spec: empty number in '" + text + "'");
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw InvalidArgument("light spec: '" + item + "' is not a number");
    }
  }
  return out;
}

}  // namespace

ShLight::ShLight(ShVector r, ShVector g, ShVector b)
    : channels{std::move(r), std::move(g), std::move(b)} {
  if (channels[1].degree() != channels[0].degree() ||
      channels[2].degree() != channels[0].degree()) {
    throw InvalidArgument("ShLight: channels must share a degree");
  }
}

ShLight ShLight::from_scalar(const ShVector& v, const Rgb& color) {
  return ShLight(v * color.r, v * color.g, v * color.b);
}

ShLight& ShLight::operator+=(const ShLight& o) {
  for (int c = 0; c < 3; ++c) channels[c] += o.channels[c];
  return *this;
}

ShLight& ShLight::operator*=(double s) {
  for (auto& ch : channels) ch *= s;
  return *this;
}

ShLight operator+(ShLight a, const ShLight& b) { return a += b; }
ShLight operator*(ShLight a, double s) { return a *= s; }

Rgb reconstruct(const ShLight& light, const Direction& dir) {
  const ShVector basis = eval_basis(dir, light.degree());
  return {inner_product(light.channels[0], basis), inner_product(light.channels[1], basis),
          inner_product(light.channels[2], basis)};
}

EnvironmentLight EnvironmentLight::constant(const Rgb& color) {
  if (!is_finite(color) || color.r < 0 || color.g < 0 || color.b < 0) {
    throw InvalidArgument("constant light: color must be finite and non-negative");
  }
  return EnvironmentLight(Constant{color});
}

EnvironmentLight EnvironmentLight::lobe(const Direction& axis, double sharpness, const Rgb& color) {
  if (!std::isfinite(sharpness) || sharpness < 0.0) {
    throw InvalidArgument("lobe light: sharpness must be finite and >= 0");
  }
  if (!is_finite(color) || color.r < 0 || color.g < 0 || color.b < 0) {
    throw InvalidArgument("lobe light: color must be finite and non-negative");
  }
  return EnvironmentLight(Lobe{axis, sharpness, color});
}

EnvironmentLight EnvironmentLight::equirectangular(LinearImage pixels) {
  for (int y = 0; y < pixels.height; ++y) {
    for (int x = 0; x < pixels.width; ++x) {
      const Rgb& c = pixels.at(x, y);
      if (!is_finite(c) || c.r < 0 || c.g < 0 || c.b < 0) {
        throw InvalidArgument("environment map: invalid radiance at pixel (x=" +
                              std::to_string(x) + ", y=" + std::to_string(y) + ")");
      }
    }
  }
  return EnvironmentLight(Equirect{std::move(pixels)});
}

EnvironmentLight EnvironmentLight::band_limited(ShLight coeffs) {
  return EnvironmentLight(BandLimited{std::move(coeffs)});
}

EnvironmentLight::Kind EnvironmentLight::kind() const {
  return std::visit(Overloaded{[](const Equirect&) { return Kind::equirectangular; },
                               [](const Constant&) { return Kind::constant; },
                               [](const Lobe&) { return Kind::lobe; },
                               [](const BandLimited&) { return Kind::band_limited; }},
                    v_);
}

Rgb EnvironmentLight::radiance(const Direction& dir) const {
  return std::visit(
      Overloaded{[&](const Equirect& e) { return bilinear(e.image, dir); },
                 [](const Constant& c) { return c.color; },
                 [&](const Lobe& l) {
                   return l.color * std::exp(l.sharpness * (dot(l.axis.vec(), dir.vec()) - 1.0));
                 },
                 [&](const BandLimited& b) { return reconstruct(b.coeffs, dir); }},
      v_);
}

const LinearImage* EnvironmentLight::image() const {
  if (const auto* e = std::get_if<Equirect>(&v_)) return &e->image;
  return nullptr;
}

const ShLight* EnvironmentLight::sh_coefficients() const {
  if (const auto* b = std::get_if<BandLimited>(&v_)) return &b->coeffs;
  return nullptr;
}

EnvironmentLight load_envmap(const std::string& path) {
  return EnvironmentLight::equirectangular(to_linear_image(read_pfm(path)));
}

Rgb sample_direction(const EnvironmentLight& env, const Direction& dir) {
  return env.radiance(dir);
}

ShLight project_to_sh(const EnvironmentLight& env, int degree, QuadratureSpec quad,
                      double exposure) {
  if (degree < 0 || degree > 8) {
    throw InvalidArgument("project_to_sh: degree " + std::to_string(degree) +
                          " outside [0, 8]");
  }
  if (!std::isfinite(exposure)) throw InvalidArgument("project_to_sh: non-finite exposure");
  if (const ShLight* exact = env.sh_coefficients()) {
    ShLight out(degree);
    const std::size_t n = std::min(out.channels[0].size(), exact->channels[0].size());
    for (int c = 0; c < 3; ++c) {
      for (std::size_t j = 0; j < n; ++j) out.channels[c][j] = exact->channels[c][j] * exposure;
    }
    return out;
  }
  const SphericalQuadrature q(quad, degree);
  std::array<std::vector<double>, 3> values;
  for (auto& v : values) v.resize(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    const Rgb c = env.radiance(q.direction(i)) * exposure;
    values[0][i] = c.r;
    values[1][i] = c.g;
    values[2][i] = c.b;
  }
  return ShLight(q.project(values[0]), q.project(values[1]), q.project(values[2]));
}

std::string sh_light_to_json(const ShLight& light) {
  nlohmann::ordered_json doc;
  doc["degree"] = light.degree();
  doc["convention"] = kShConvention;
  auto channels = nlohmann::ordered_json::array();
  for (const auto& ch : light.channels) {
    channels.push_back(std::vector<double>(ch.coeffs().begin(), ch.coeffs().end()));
  }
  doc["channels"] = std::move(channels);
  return doc.dump(2) + "\n";
}

ShLight sh_light_from_json(const std::string& text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    const int degree = doc.at("degree").get<int>();
    const auto& ch = doc.at("channels");
    if (!ch.is_array() || ch.size() != 3) throw FormatError("SH light JSON: need 3 channels");
    return ShLight(ShVector(ch[0].get<std::vector<double>>(), degree),
                   ShVector(ch[1].get<std::vector<double>>(), degree),
                   ShVector(ch[2].get<std::vector<double>>(), degree));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("SH light JSON: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("SH light JSON: ") + e.what());
  }
}

void write_sh_light(const std::string& path, const ShLight& light) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << sh_light_to_json(light);
  if (!out) throw Error("write failed for '" + path + "'");
}

ShLight read_sh_light(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return sh_light_from_json(buf.str());
}

EnvironmentLight parse_analytic_light(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::vector<double> v =
      colon == std::string::npos ? std::vector<double>{} : parse_numbers(spec.substr(colon + 1));
  if (kind == "constant" && v.size() == 3) {
    return EnvironmentLight::constant({v[0], v[1], v[2]});
  }
  if (kind == "lobe" && v.size() == 7) {
    return EnvironmentLight::lobe(Direction(v[0], v[1], v[2]), v[3], {v[4], v[5], v[6]});
  }
  throw InvalidArgument("light spec '" + spec +
                        "' must be constant:r,g,b or lobe:ax,ay,az,sharpness,r,g,b");
}

}  // namespace prtvol
