// Copyright 2026 The prtvol Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "prtvol/error.h"

namespace prtvol {

inline constexpr double kPi = std::numbers::pi;

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3() = default;
  constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
  constexpr double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

  constexpr Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  constexpr Vec3& operator*=(double s) {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }

  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
constexpr Vec3 operator/(const Vec3& a, double s) { return {a.x / s, a.y / s, a.z / s}; }

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double length(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline bool is_finite(const Vec3& a) {
  return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z);
}
constexpr Vec3 abs(const Vec3& a) {
  return {a.x < 0 ? -a.x : a.x, a.y < 0 ? -a.y : a.y, a.z < 0 ? -a.z : a.z};
}

/// A unit-length 3-vector. Construction normalizes and rejects zero or
/// non-finite input, so every live Direction satisfies |d| = 1 to ~1e-15.
class Direction {
 public:
  /// +z
  constexpr Direction() : v_(0.0, 0.0, 1.0) {}
  Direction(double x, double y, double z) : Direction(Vec3{x, y, z}) {}
  explicit Direction(const Vec3& v) {
    if (!is_finite(v)) throw InvalidArgument("Direction: non-finite component");
    const double len = length(v);
    if (!(len > 0.0)) throw InvalidArgument("Direction: zero-length vector");
    v_ = v / len;
  }

  /// Spherical angles: theta from +z, phi from +x toward +y.
  static Direction from_spherical(double theta, double phi) {
    const double s = std::sin(theta);
    return Direction(Vec3{s * std::cos(phi), s * std::sin(phi), std::cos(theta)});
  }

  constexpr double x() const { return v_.x; }
  constexpr double y() const { return v_.y; }
  constexpr double z() const { return v_.z; }
  constexpr const Vec3& vec() const { return v_; }
  constexpr operator const Vec3&() const { return v_; }  // NOLINT

  Direction operator-() const {
    Direction d;
    d.v_ = -v_;
    return d;
  }

  friend constexpr bool operator==(const Direction&, const Direction&) = default;

 private:
  Vec3 v_;
};

/// Linear RGB triple. Radiance, albedo, and debug colors all use it.
struct Rgb {
  double r = 0.0;
  double g = 0.0;
  double b = 0.0;

  constexpr Rgb() = default;
  constexpr Rgb(double r_, double g_, double b_) : r(r_), g(g_), b(b_) {}
  constexpr explicit Rgb(double v) : r(v), g(v), b(v) {}

  constexpr double operator[](int i) const { return i == 0 ? r : (i == 1 ? g : b); }
  constexpr double& operator[](int i) { return i == 0 ? r : (i == 1 ? g : b); }

  constexpr Rgb& operator+=(const Rgb& o) {
    r += o.r;
    g += o.g;
    b += o.b;
    return *this;
  }
  constexpr Rgb& operator*=(double s) {
    r *= s;
    g *= s;
    b *= s;
    return *this;
  }

  friend constexpr bool operator==(const Rgb&, const Rgb&) = default;
};

constexpr Rgb operator+(Rgb a, const Rgb& b) { return a += b; }
constexpr Rgb operator-(const Rgb& a, const Rgb& b) { return {a.r - b.r, a.g - b.g, a.b - b.b}; }
constexpr Rgb operator*(Rgb a, double s) { return a *= s; }
constexpr Rgb operator*(double s, Rgb a) { return a *= s; }
constexpr Rgb operator*(const Rgb& a, const Rgb& b) { return {a.r * b.r, a.g * b.g, a.b * b.b}; }
inline bool is_finite(const Rgb& c) {
  return std::isfinite(c.r) && std::isfinite(c.g) && std::isfinite(c.b);
}

inline double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

/// Cubic Hermite step 3t^2 - 2t^3 on [0, 1], clamped outside.
inline double smoothstep(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * (3.0 - 2.0 * t);
}

}  // namespace prtvol
