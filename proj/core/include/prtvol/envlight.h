// Copyright 2026 The prtvol Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <string>
#include <variant>

#include "prtvol/image.h"
#include "prtvol/math.h"
#include "prtvol/sh.h"

namespace prtvol {

/// Per-channel SH projection of an environment light.
struct ShLight {
  std::array<ShVector, 3> channels;

  explicit ShLight(int degree = kDefaultShDegree)
      : channels{ShVector(degree), ShVector(degree), ShVector(degree)} {}
  ShLight(ShVector r, ShVector g, ShVector b);

  int degree() const { return channels[0].degree(); }

  /// Light with channel c = color[c] * v.
  static ShLight from_scalar(const ShVector& v, const Rgb& color);

  ShLight& operator+=(const ShLight& o);
  ShLight& operator*=(double s);
};

ShLight operator+(ShLight a, const ShLight& b);
ShLight operator*(ShLight a, double s);

/// Per-channel SH reconstruction (may be negative from ringing).
Rgb reconstruct(const ShLight& light, const Direction& dir);

/// Distant lighting L_i(omega).
///
/// Equirectangular maps follow: row 0 at theta = 0 (+z up), rows spanning
/// [0, pi]; column 0 starting at phi = 0 (+x) and increasing toward +y.
/// Pixel centers sit at theta = (i + 1/2) pi / H, phi = (k + 1/2) 2 pi / W.
class EnvironmentLight {
 public:
  enum class Kind { equirectangular, constant, lobe, band_limited };

  static EnvironmentLight constant(const Rgb& color);
  /// color * exp(sharpness * (axis . dir - 1)); peak at axis, minimum at -axis.
  static EnvironmentLight lobe(const Direction& axis, double sharpness, const Rgb& color);
  /// Takes a linear-radiance map; throws on negative or non-finite texels.
  static EnvironmentLight equirectangular(LinearImage pixels);
  /// Exactly band-limited light defined by SH coefficients. Radiance is the
  /// raw reconstruction, so coefficients should keep it non-negative.
  static EnvironmentLight band_limited(ShLight coeffs);

  Kind kind() const;
  Rgb radiance(const Direction& dir) const;

  /// Non-null only for equirectangular lights.
  const LinearImage* image() const;
  /// Non-null only for band-limited lights.
  const ShLight* sh_coefficients() const;

 private:
  struct Constant {
    Rgb color;
  };
  struct Lobe {
    Direction axis;
    double sharpness;
    Rgb color;
  };
  struct Equirect {
    LinearImage image;
  };
  struct BandLimited {
    ShLight coeffs;
  };
  using Variant = std::variant<Equirect, Constant, Lobe, BandLimited>;

  explicit EnvironmentLight(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

/// Reads a color PFM as an equirectangular light.
EnvironmentLight load_envmap(const std::string& path);

/// Bilinear lookup for maps (wrapping in phi, clamped in theta); closed form
/// for analytic kinds.
Rgb sample_direction(const EnvironmentLight& env, const Direction& dir);

/// Projects each channel by quadrature. degree must be in [0, 8]. A
/// band-limited light is projected exactly (truncated or zero-padded).
ShLight project_to_sh(const EnvironmentLight& env, int degree = kDefaultShDegree,
                      QuadratureSpec quad = {}, double exposure = 1.0);

/// {"degree", "convention", "channels": [[...], [...], [...]]}
std::string sh_light_to_json(const ShLight& light);
ShLight sh_light_from_json(const std::string& text);
void write_sh_light(const std::string& path, const ShLight& light);
ShLight read_sh_light(const std::string& path);

/// Parses "constant:r,g,b" or "lobe:ax,ay,az,sharpness,r,g,b".
EnvironmentLight parse_analytic_light(const std::string& spec);

}  // namespace prtvol
