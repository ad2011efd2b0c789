// Copyright 2026 The prtvol Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <variant>
#include <vector>

#include "prtvol/math.h"

namespace prtvol {

struct Material {
  Rgb albedo{0.5};
  double tint = 0.0;

  friend bool operator==(const Material&, const Material&) = default;
};

struct SoftSphere {
  Vec3 center;
  double radius = 1.0;
};

struct SoftBox {
  Vec3 center;
  Vec3 half_extent{1.0, 1.0, 1.0};
};

/// {x : lo <= normal . x <= hi}. hi = +inf gives a half-space.
struct Slab {
  Direction normal;
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
};

/// Density primitive. With d the signed distance to the shape (negative
/// inside) and w the softness, the density is
///   scale * smoothstep((w/2 - d) / w),
/// a C1 shell of width w centered on the boundary. softness = 0 gives a
/// hard step. Symmetric falloff keeps the integral across a boundary equal to
/// that of the hard shape.
struct Primitive {
  std::variant<SoftSphere, SoftBox, Slab> shape;
  double density_scale = 1.0;  // 1 / length
  double softness = 0.1;       // length
  Material material;

  double signed_distance(const Vec3& x) const;
  double density(const Vec3& x) const;
  /// Lipschitz bound of density(): 1.5 * scale / softness (inf if hard).
  double lipschitz() const;
  /// Radius of a sphere about `center` that contains all non-zero density,
  /// or +inf for slabs.
  double support_radius(const Vec3& center) const;
};

struct BoundingSphere {
  Vec3 center;
  double radius = 1.0;

  bool contains(const Vec3& x) const { return dot(x - center, x - center) <= radius * radius; }
  /// Parametric [t0, t1] where origin + t dir lies inside; nullopt on miss.
  std::optional<std::pair<double, double>> intersect(const Vec3& origin,
                                                     const Direction& dir) const;
};

struct MarchSettings {
  int primary_steps = 256;
  int secondary_steps = 64;
  double t_near = 0.0;
  double t_far = 100.0;
};

/// Analytic volumetric scene: density sigma(x), albedo rho(x), tint K(x).
/// Immutable after construction; all queries are thread-safe.
class VolumeScene {
 public:
  /// Validates parameters; throws InvalidArgument on non-finite values,
  /// negative scales, out-of-range materials, or a bounding sphere that does
  /// not enclose a bounded primitive.
  VolumeScene(BoundingSphere bounds, Material default_material, MarchSettings march,
              std::vector<Primitive> primitives);

  const BoundingSphere& bounds() const { return bounds_; }
  const Material& default_material() const { return default_material_; }
  const MarchSettings& march() const { return march_; }
  const std::vector<Primitive>& primitives() const { return primitives_; }

  /// Central-difference step h = min(softness > 0) / 4, or 1e-3 * radius
  /// when every primitive is hard.
  double gradient_step() const { return gradient_step_; }
  /// Start offset for secondary rays, 2h.
  double self_occlusion_offset() const { return 2.0 * gradient_step_; }

  double density(const Vec3& x) const;
  Material material(const Vec3& x) const;
  Vec3 density_gradient(const Vec3& x) const;

  /// Same scene with different march settings.
  VolumeScene with_march(const MarchSettings& march) const;

  /// Parametric hull [first, second] of origin + s dir over which some
  /// primitive density may be nonzero; nullopt when the ray misses them all.
  std::optional<std::pair<double, double>> support_hull(const Vec3& origin,
                                                        const Vec3& dir) const;

 private:
  // Flattened primitive for the density hot loop.
  struct Compiled {
    enum class Kind { sphere, box, slab } kind;
    Vec3 center;
    Vec3 extent;  // box half extent, or slab normal
    double radius, lo, hi;
    double scale, softness, half_softness, inv_softness;
    double support_r2;  // squared support radius about `center`, inf for slabs
  };
  static double evaluate(const Compiled& c, const Vec3& x);

  BoundingSphere bounds_;
  Material default_material_;
  MarchSettings march_;
  std::vector<Primitive> primitives_;
  std::vector<Compiled> compiled_;
  double gradient_step_;
};

/// Gradient magnitudes below this (per length unit) yield no normal.
inline constexpr double kMinGradient = 1e-6;

struct SurfacePoint {
  Vec3 position;
  Direction normal;
  Material material;
  bool valid = false;
};

double density_at(const VolumeScene& scene, const Vec3& x);

/// -grad sigma / |grad sigma| by central differences; nullopt where the
/// gradient vanishes (constant-density cores, empty space).
std::optional<Direction> normal_at(const VolumeScene& scene, const Vec3& x);

/// Density-weighted blend of primitive materials; the scene default where the
/// total density is zero.
Material material_at(const VolumeScene& scene, const Vec3& x);

/// Position, normal, and material at x; valid == false without a normal.
SurfacePoint surface_point_at(const VolumeScene& scene, const Vec3& x);

inline constexpr double kAlbedoPerturbation = 0.03;

using AlbedoField = std::function<Rgb(const Vec3&)>;

/// Mean over `samples` draws of |rho(x) - rho(x + eps)|_1 with
/// eps ~ N(0, sigma^2 I). Deterministic per seed.
double albedo_smoothness_residual(const AlbedoField& albedo, const Vec3& x, int samples,
                                  std::uint64_t seed, double sigma = kAlbedoPerturbation);
double albedo_smoothness_residual(const VolumeScene& scene, const Vec3& x, int samples,
                                  std::uint64_t seed, double sigma = kAlbedoPerturbation);

}  // namespace prtvol
