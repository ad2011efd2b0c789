// Copyright 2026 The prtvol Authors
// SPDX-License-Identifier: Apache-2.0

#include "prtvol/render.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "prtvol/parallel.h"

namespace prtvol {

void Camera::validate() const {
  if (!(fov_y > 0.0 && fov_y < kPi)) throw InvalidArgument("camera: fov must be in (0, pi)");
  if (width <= 0 || height <= 0) throw InvalidArgument("camera: image size must be positive");
  if (!is_finite(eye) || !is_finite(target) || !is_finite(up)) {
    throw InvalidArgument("camera: non-finite vector");
  }
  const Vec3 forward = target - eye;
  if (!(length(forward) > 0.0)) throw InvalidArgument("camera: eye and target coincide");
  if (!(length(cross(forward, up)) > 1e-12 * length(forward) * length(up))) {
    throw InvalidArgument("camera: up is parallel to the view direction");
  }
}

Ray Camera::generate_ray(double px, double py) const {
  const Direction forward(target - eye);
  const Direction right(cross(forward.vec(), up));
  const Vec3 true_up = cross(right.vec(), forward.vec());
  const double tan_half = std::tan(0.5 * fov_y);
  const double aspect = static_cast<double>(width) / height;
  const double sx = (2.0 * (px + 0.5) / width - 1.0) * tan_half * aspect;
  const double sy = (1.0 - 2.0 * (py + 0.5) / height) * tan_half;
  return {eye, Direction(forward.vec() + right.vec() * sx + true_up * sy)};
}

std::string_view to_string(RenderMode mode) {
  switch (mode) {
    case RenderMode::lit: return "lit";
    case RenderMode::diffuse: return "diffuse";
    case RenderMode::specular: return "specular";
    case RenderMode::albedo: return "albedo";
    case RenderMode::normal: return "normal";
    case RenderMode::irradiance: return "irradiance";
    case RenderMode::visibility: return "visibility";
  }
  return "unknown";
}

RenderMode parse_render_mode(std::string_view name) {
  for (RenderMode m : kAllRenderModes) {
    if (to_string(m) == name) return m;
  }
  throw InvalidArgument("unknown render mode '" + std::string(name) +
                        "' (expected lit, diffuse, specular, albedo, normal, irradiance, "
                        "visibility)");
}

Renderer::Renderer(const VolumeScene& scene, const ShLight& light, RenderOptions options)
    : scene_(scene),
      light_(light),
      options_(options),
      quad_(options.bake_quadrature, light.degree()) {
  if (options_.top_m < 1) throw InvalidArgument("render: top_m must be >= 1");
  if (options_.cache != nullptr && options_.cache->degree() != light.degree()) {
    throw InvalidArgument("render: cache degree " + std::to_string(options_.cache->degree()) +
                          " != light degree " + std::to_string(light.degree()));
  }
}

TraceResult Renderer::trace(const Ray& ray, RenderMode mode) const {
  const PrimaryMarch march = march_primary(scene_, ray.origin, ray.dir);
  TraceResult out;
  out.alpha = march.alpha();
  if (march.samples.empty()) return out;

  if (mode == RenderMode::albedo || mode == RenderMode::normal) {
    for (const MarchSample& s : march.samples) {
      Rgb value;
      if (mode == RenderMode::albedo) {
        value = scene_.material(s.position).albedo;
      } else if (auto n = normal_at(scene_, s.position)) {
        value = Rgb(0.5 * (n->x() + 1.0), 0.5 * (n->y() + 1.0), 0.5 * (n->z() + 1.0));
      }
      out.color += value * s.weight;
    }
    return out;
  }

  std::vector<std::size_t> order(march.samples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t m = std::min(order.size(), static_cast<std::size_t>(options_.top_m));
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      const double wa = march.samples[a].weight;
                      const double wb = march.samples[b].weight;
                      return wa != wb ? wa > wb : a < b;
                    });

  double top_weight = 0.0;
  for (std::size_t i = 0; i < m; ++i) top_weight += march.samples[order[i]].weight;
  if (!(top_weight > 0.0)) return out;
  const double rescale = out.alpha / top_weight;

  const Direction view = -ray.dir;
  for (std::size_t i = 0; i < m; ++i) {
    const MarchSample& s = march.samples[order[i]];
    const SurfacePoint p = surface_point_at(scene_, s.position);
    if (!p.valid) continue;  // no normal: contributes black

    TransferSample sample;
    const TransferSample* cached =
        options_.cache ? options_.cache->nearest(p.position, p.normal, options_.cache_radius)
                       : nullptr;
    if (cached != nullptr) {
      sample = {p, cached->transfer};
    } else {
      sample = bake_transfer(scene_, p, quad_);
    }

    Rgb value;
    switch (mode) {
      case RenderMode::lit:
        value = outgoing_radiance(sample, view, light_).combined;
        break;
      case RenderMode::diffuse:
        value = diffuse_radiance(p.material.albedo, sample.transfer, light_);
        break;
      case RenderMode::specular:
        value = specular_radiance(p.material.tint, p.normal, view, sample.transfer, light_);
        break;
      case RenderMode::irradiance:
        value = diffuse_radiance(Rgb(kPi), sample.transfer, light_);
        break;
      case RenderMode::visibility:
        value = Rgb(std::sqrt(4.0 * kPi) * sample.transfer[0] / kPi);
        break;
      default:
        break;
    }
    out.color += value * (s.weight * rescale);
  }
  return out;
}

LinearImage Renderer::render(const Camera& camera, RenderMode mode) const {
  camera.validate();
  LinearImage img(camera.width, camera.height);
  img.alpha.emplace(img.pixels.size(), 0.0);
  parallel_for(static_cast<std::size_t>(camera.height), options_.threads, [&](std::size_t row) {
    const int y = static_cast<int>(row);
    for (int x = 0; x < camera.width; ++x) {
      const TraceResult r = trace(camera.generate_ray(x, y), mode);
      img.at(x, y) = r.color;
      (*img.alpha)[img.index(x, y)] = r.alpha;
    }
  });
  return img;
}

TraceResult trace_radiance(const VolumeScene& scene, const ShLight& light, const Ray& ray,
                           RenderMode mode, const RenderOptions& options) {
  return Renderer(scene, light, options).trace(ray, mode);
}

LinearImage render_image(const VolumeScene& scene, const ShLight& light, const Camera& camera,
                         RenderMode mode, const RenderOptions& options) {
  return Renderer(scene, light, options).render(camera, mode);
}

}  // namespace prtvol
