// Copyright 2026 The prtvol Authors
// SPDX-License-Identifier: Apache-2.0

#include "prtvol/field.h"

#include <algorithm>
#include <cmath>

#include "prtvol/rng.h"

namespace prtvol {
namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument("scene: " + what);
}

void validate_material(const Material& m, const std::string& where) {
  require(is_finite(m.albedo) && std::isfinite(m.tint), where + " material is not finite");
  for (int c = 0; c < 3; ++c) {
    require(m.albedo[c] >= 0.0 && m.albedo[c] <= 1.0, where + " albedo outside [0, 1]");
  }
  require(m.tint >= 0.0 && m.tint <= 1.0, where + " tint outside [0, 1]");
}

}  // namespace

double Primitive::signed_distance(const Vec3& x) const {
  return std::visit(
      Overloaded{[&](const SoftSphere& s) { return length(x - s.center) - s.radius; },
                 [&](const SoftBox& b) {
                   const Vec3 q = abs(x - b.center) - b.half_extent;
                   const Vec3 outside{std::max(q.x, 0.0), std::max(q.y, 0.0), std::max(q.z, 0.0)};
                   return length(outside) + std::min(std::max({q.x, q.y, q.z}), 0.0);
                 },
                 [&](const Slab& s) {
                   const double h = dot(s.normal.vec(), x);
                   return std::max(s.lo - h, h - s.hi);
                 }},
      shape);
}

double Primitive::density(const Vec3& x) const {
  const double d = signed_distance(x);
  if (softness <= 0.0) return d <= 0.0 ? density_scale : 0.0;
  return density_scale * smoothstep((0.5 * softness - d) / softness);
}

double Primitive::lipschitz() const {
  if (softness <= 0.0) return std::numeric_limits<double>::infinity();
  return 1.5 * density_scale / softness;
}

double Primitive::support_radius(const Vec3& center) const {
  const double pad = 0.5 * softness;
  return std::visit(
      Overloaded{[&](const SoftSphere& s) { return length(s.center - center) + s.radius + pad; },
                 [&](const SoftBox& b) {
                   return length(b.center - center) + length(b.half_extent) + pad;
                 },
                 [](const Slab&) { return std::numeric_limits<double>::infinity(); }},
      shape);
}

std::optional<std::pair<double, double>> BoundingSphere::intersect(const Vec3& origin,
                                                                   const Direction& dir) const {
  const Vec3 oc = origin - center;
  const double b = dot(oc, dir.vec());
  const double c = dot(oc, oc) - radius * radius;
  const double disc = b * b - c;
  if (disc < 0.0) return std::nullopt;
  const double s = std::sqrt(disc);
  return std::make_pair(-b - s, -b + s);
}

VolumeScene::VolumeScene(BoundingSphere bounds, Material default_material, MarchSettings march,
                         std::vector<Primitive> primitives)
    : bounds_(bounds),
      default_material_(default_material),
      march_(march),
      primitives_(std::move(primitives)) {
  require(is_finite(bounds_.center) && std::isfinite(bounds_.radius) && bounds_.radius > 0.0,
          "bounds must be a finite sphere with positive radius");
  validate_material(default_material_, "default");
  require(march_.primary_steps >= 1 && march_.secondary_steps >= 1, "step counts must be >= 1");
  require(std::isfinite(march_.t_near) && std::isfinite(march_.t_far) &&
              march_.t_near >= 0.0 && march_.t_far > march_.t_near,
          "march requires 0 <= t_near < t_far");

  double min_softness = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < primitives_.size(); ++i) {
    const Primitive& p = primitives_[i];
    const std::string where = "primitive " + std::to_string(i);
    require(std::isfinite(p.density_scale) && p.density_scale >= 0.0,
            where + " density_scale must be finite and >= 0");
    require(std::isfinite(p.softness) && p.softness >= 0.0,
            where + " softness must be finite and >= 0");
    validate_material(p.material, where);
    std::visit(Overloaded{[&](const SoftSphere& s) {
                            require(is_finite(s.center) && std::isfinite(s.radius) &&
                                        s.radius > 0.0,
                                    where + " sphere needs finite center and radius > 0");
                          },
                          [&](const SoftBox& b) {
                            require(is_finite(b.center) && is_finite(b.half_extent) &&
                                        b.half_extent.x > 0 && b.half_extent.y > 0 &&
                                        b.half_extent.z > 0,
                                    where + " box needs finite center and positive extent");
                          },
                          [&](const Slab& s) {
                            require(std::isfinite(s.lo) && !std::isnan(s.hi) && s.hi > s.lo,
                                    where + " slab needs finite lo < hi");
                          }},
               p.shape);
    const double reach = p.support_radius(bounds_.center);
    require(!std::isfinite(reach) || reach <= bounds_.radius * (1.0 + 1e-12),
            where + " extends outside the bounding sphere");
    if (p.softness > 0.0) min_softness = std::min(min_softness, p.softness);

    Compiled c{};
    c.scale = p.density_scale;
    c.softness = p.softness;
    c.half_softness = 0.5 * p.softness;
    c.inv_softness = p.softness > 0.0 ? 1.0 / p.softness : 0.0;
    std::visit(Overloaded{[&](const SoftSphere& s) {
                            c.kind = Compiled::Kind::sphere;
                            c.center = s.center;
                            c.radius = s.radius;
                            const double r = s.radius + c.half_softness;
                            c.support_r2 = r * r;
                          },
                          [&](const SoftBox& b) {
                            c.kind = Compiled::Kind::box;
                            c.center = b.center;
                            c.extent = b.half_extent;
                            const double r = length(b.half_extent) + c.half_softness;
                            c.support_r2 = r * r;
                          },
                          [&](const Slab& s) {
                            c.kind = Compiled::Kind::slab;
                            c.extent = s.normal.vec();
                            c.lo = s.lo;
                            c.hi = s.hi;
                            c.support_r2 = std::numeric_limits<double>::infinity();
                          }},
               p.shape);
    compiled_.push_back(c);
  }
  gradient_step_ = std::isfinite(min_softness) ? min_softness / 4.0 : 1e-3 * bounds_.radius;
}

double VolumeScene::evaluate(const Compiled& c, const Vec3& x) {
  const Vec3 r = x - c.center;
  const double r2 = dot(r, r);
  if (r2 > c.support_r2) return 0.0;
  double d;
  switch (c.kind) {
    case Compiled::Kind::sphere:
      d = std::sqrt(r2) - c.radius;
      break;
    case Compiled::Kind::box: {
      const double qx = std::abs(r.x) - c.extent.x;
      const double qy = std::abs(r.y) - c.extent.y;
      const double qz = std::abs(r.z) - c.extent.z;
      const double inside = std::min(std::max(qx, std::max(qy, qz)), 0.0);
      const double ox = std::max(qx, 0.0), oy = std::max(qy, 0.0), oz = std::max(qz, 0.0);
      const double o2 = ox * ox + oy * oy + oz * oz;
      d = (o2 > 0.0 ? std::sqrt(o2) : 0.0) + inside;
      break;
    }
    case Compiled::Kind::slab:
    default: {
      const double h = dot(c.extent, x);
      d = std::max(c.lo - h, h - c.hi);
      break;
    }
  }
  if (c.softness <= 0.0) return d <= 0.0 ? c.scale : 0.0;
  return c.scale * smoothstep((c.half_softness - d) * c.inv_softness);
}

std::optional<std::pair<double, double>> VolumeScene::support_hull(const Vec3& origin,
                                                                   const Vec3& dir) const {
  constexpr double kPad = 1e-6;
  const double inf = std::numeric_limits<double>::infinity();
  double lo = inf, hi = -inf;
  for (const Compiled& c : compiled_) {
    double a = -inf, b = inf;
    switch (c.kind) {
      case Compiled::Kind::sphere: {
        const Vec3 oc = origin - c.center;
        const double dd = dot(dir, dir);
        const double half_b = dot(oc, dir);
        const double disc = half_b * half_b - dd * (dot(oc, oc) - c.support_r2);
        if (disc < 0.0) continue;
        const double root = std::sqrt(disc);
        a = (-half_b - root) / dd;
        b = (-half_b + root) / dd;
        break;
      }
      case Compiled::Kind::box: {
        const double o[3] = {origin.x - c.center.x, origin.y - c.center.y, origin.z - c.center.z};
        const double d[3] = {dir.x, dir.y, dir.z};
        const double e[3] = {c.extent.x + c.half_softness, c.extent.y + c.half_softness,
                             c.extent.z + c.half_softness};
        bool miss = false;
        for (int k = 0; k < 3 && !miss; ++k) {
          if (d[k] == 0.0) {
            miss = std::abs(o[k]) > e[k];
            continue;
          }
          double t0 = (-e[k] - o[k]) / d[k];
          double t1 = (e[k] - o[k]) / d[k];
          if (t0 > t1) std::swap(t0, t1);
          a = std::max(a, t0);
          b = std::min(b, t1);
          miss = a > b;
        }
        if (miss) continue;
        break;
      }
      case Compiled::Kind::slab:
      default: {
        const double h0 = dot(c.extent, origin);
        const double dh = dot(c.extent, dir);
        const double l = c.lo - c.half_softness, u = c.hi + c.half_softness;
        if (dh == 0.0) {
          if (h0 < l || h0 > u) continue;
          break;
        }
        double t0 = (l - h0) / dh, t1 = (u - h0) / dh;
        if (t0 > t1) std::swap(t0, t1);
        if (std::isnan(t0)) t0 = -inf;
        if (std::isnan(t1)) t1 = inf;
        a = t0;
        b = t1;
        break;
      }
    }
    lo = std::min(lo, a - kPad);
    hi = std::max(hi, b + kPad);
  }
  if (!(hi >= lo)) return std::nullopt;
  return std::make_pair(lo, hi);
}

double VolumeScene::density(const Vec3& x) const {
  if (!bounds_.contains(x)) return 0.0;
  double sum = 0.0;
  for (const Compiled& c : compiled_) sum += evaluate(c, x);
  return sum;
}

Material VolumeScene::material(const Vec3& x) const {
  if (!bounds_.contains(x)) return default_material_;
  double total = 0.0;
  Rgb albedo;
  double tint = 0.0;
  for (std::size_t i = 0; i < primitives_.size(); ++i) {
    const Primitive& p = primitives_[i];
    const double w = evaluate(compiled_[i], x);
    if (w <= 0.0) continue;
    total += w;
    albedo += p.material.albedo * w;
    tint += p.material.tint * w;
  }
  if (total <= 0.0) return default_material_;
  Material m{albedo * (1.0 / total), tint / total};
  for (int c = 0; c < 3; ++c) m.albedo[c] = clamp01(m.albedo[c]);
  m.tint = clamp01(m.tint);
  return m;
}

Vec3 VolumeScene::density_gradient(const Vec3& x) const {
  const double h = gradient_step_;
  Vec3 g;
  for (int a = 0; a < 3; ++a) {
    Vec3 lo = x;
    Vec3 hi = x;
    lo[a] -= h;
    hi[a] += h;
    g[a] = (density(hi) - density(lo)) / (2.0 * h);
  }
  return g;
}

VolumeScene VolumeScene::with_march(const MarchSettings& march) const {
  return VolumeScene(bounds_, default_material_, march, primitives_);
}

double density_at(const VolumeScene& scene, const Vec3& x) { return scene.density(x); }

std::optional<Direction> normal_at(const VolumeScene& scene, const Vec3& x) {
  const Vec3 g = scene.density_gradient(x);
  if (!(length(g) >= kMinGradient)) return std::nullopt;
  return Direction(-g);
}

Material material_at(const VolumeScene& scene, const Vec3& x) { return scene.material(x); }

SurfacePoint surface_point_at(const VolumeScene& scene, const Vec3& x) {
  SurfacePoint p;
  p.position = x;
  p.material = scene.material(x);
  if (auto n = normal_at(scene, x)) {
    p.normal = *n;
    p.valid = true;
  }
  return p;
}

double albedo_smoothness_residual(const AlbedoField& albedo, const Vec3& x, int samples,
                                  std::uint64_t seed, double sigma) {
  if (samples < 1) throw InvalidArgument("albedo_smoothness_residual: samples must be >= 1");
  Rng rng(seed);
  const Rgb center = albedo(x);
  double sum = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Vec3 eps{sigma * rng.normal(), sigma * rng.normal(), sigma * rng.normal()};
    const Rgb d = center - albedo(x + eps);
    sum += std::abs(d.r) + std::abs(d.g) + std::abs(d.b);
  }
  return sum / samples;
}

double albedo_smoothness_residual(const VolumeScene& scene, const Vec3& x, int samples,
                                  std::uint64_t seed, double sigma) {
  return albedo_smoothness_residual([&](const Vec3& p) { return scene.material(p).albedo; }, x,
                                    samples, seed, sigma);
}

}  // namespace prtvol
