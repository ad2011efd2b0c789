// Copyright 2026 The prtvol Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <string>
#include <string_view>

#include "prtvol/envlight.h"
#include "prtvol/field.h"
#include "prtvol/image.h"
#include "prtvol/shading.h"
#include "prtvol/transport.h"

namespace prtvol {

struct Ray {
  Vec3 origin;
  Direction dir;
};

/// Pinhole camera. fov_y is the full vertical field of view in radians.
struct Camera {
  Vec3 eye{0.0, 0.0, 4.0};
  Vec3 target{0.0, 0.0, 0.0};
  Vec3 up{0.0, 1.0, 0.0};
  double fov_y = 0.7;
  int width = 64;
  int height = 64;

  /// Throws InvalidArgument unless fov_y is in (0, pi), the size is
  /// positive, eye != target and up is not parallel to the view axis.
  void validate() const;

  /// Ray through the center of pixel (px, py); py = 0 is the top row.
  Ray generate_ray(double px, double py) const;
};

enum class RenderMode { lit, diffuse, specular, albedo, normal, irradiance, visibility };

inline constexpr std::array<RenderMode, 7> kAllRenderModes{
    RenderMode::lit,    RenderMode::diffuse,    RenderMode::specular,  RenderMode::albedo,
    RenderMode::normal, RenderMode::irradiance, RenderMode::visibility};

std::string_view to_string(RenderMode mode);
/// Throws InvalidArgument naming the valid modes.
RenderMode parse_render_mode(std::string_view name);

struct RenderOptions {
  /// Transfer is evaluated at this many highest-weight samples per ray.
  int top_m = 4;
  QuadratureSpec bake_quadrature = kDefaultBakeQuadrature;
  /// Optional baked transfer; misses fall back to baking on the fly.
  const TransferCache* cache = nullptr;
  double cache_radius = 0.05;
  int threads = 0;
};

struct TraceResult {
  Rgb color;
  double alpha = 0.0;
};

/// Volume renderer for one scene/light pair. Holds the bake quadrature so
/// repeated traces share its basis table. Thread-safe for concurrent trace().
class Renderer {
 public:
  Renderer(const VolumeScene& scene, const ShLight& light, RenderOptions options = {});

  /// C = sum_k w_k value_k over the primary march, w_k = T_k (1 - exp(-sigma_k dt)).
  /// Shaded modes evaluate value_k at the top-M weights and rescale by
  /// (sum of all weights) / (sum of top-M weights). Values per mode:
  ///   lit, diffuse, specular  shading terms (unclamped)
  ///   irradiance              <t, l_c>, i.e. diffuse with albedo pi
  ///   visibility              ambient visibility integral(V H) / pi
  ///   albedo                  rho(x_k)
  ///   normal                  (n + 1) / 2, black where the normal is undefined
  TraceResult trace(const Ray& ray, RenderMode mode) const;

  LinearImage render(const Camera& camera, RenderMode mode) const;

 private:
  const VolumeScene& scene_;
  const ShLight& light_;
  RenderOptions options_;
  SphericalQuadrature quad_;
};

TraceResult trace_radiance(const VolumeScene& scene, const ShLight& light, const Ray& ray,
                           RenderMode mode, const RenderOptions& options = {});

LinearImage render_image(const VolumeScene& scene, const ShLight& light, const Camera& camera,
                         RenderMode mode, const RenderOptions& options = {});

}  // namespace prtvol
