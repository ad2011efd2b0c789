// Copyright 2026 The prtvol Authors
// SPDX-License-Identifier: Apache-2.0

#include "prtvol/oracle.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "prtvol/parallel.h"
#include "prtvol/rng.h"
#include "prtvol/shading.h"

namespace prtvol {
namespace {

using ojson = nlohmann::ordered_json;

ojson vec_json(const Vec3& v) { return ojson::array({v.x, v.y, v.z}); }
ojson rgb_json(const Rgb& c) { return ojson::array({c.r, c.g, c.b}); }

}  // namespace

McEstimate mc_diffuse_radiance(const VolumeScene& scene, const EnvironmentLight& light,
                               const Vec3& x, const Direction& n, const Rgb& albedo,
                               std::size_t samples, std::uint64_t seed) {
  if (samples < 1) throw InvalidArgument("mc_diffuse_radiance: samples must be >= 1");
  Rng rng(seed);
  Rgb sum;
  Rgb sum_sq;
  const double scale = 4.0 * kPi / kPi;  // (1/pi) / pdf, pdf = 1 / (4 pi)
  for (std::size_t s = 0; s < samples; ++s) {
    const Direction w = rng.uniform_sphere();
    const double h = cosine_term(n, w);
    if (h <= 0.0) continue;
    const double vh = visibility(scene, x, w) * h;
    if (vh == 0.0) continue;
    const Rgb f = albedo * light.radiance(w) * (scale * vh);
    sum += f;
    sum_sq += f * f;
  }
  McEstimate est;
  est.samples = samples;
  const double count = static_cast<double>(samples);
  for (int c = 0; c < 3; ++c) {
    const double mean = sum[c] / count;
    est.mean[c] = mean;
    if (samples > 1) {
      const double var = std::max(0.0, (sum_sq[c] - count * mean * mean) / (count - 1.0));
      est.std_error[c] = std::sqrt(var / count);
    }
  }
  return est;
}

std::vector<ProbePoint> probe_surface_points(const VolumeScene& scene, const Camera& camera,
                                             std::size_t count, std::uint64_t seed) {
  camera.validate();
  Rng rng(seed);
  std::vector<ProbePoint> points;
  points.reserve(count);
  const std::size_t max_attempts = 20 * std::max<std::size_t>(count, 1);
  for (std::size_t attempt = 0; attempt < max_attempts && points.size() < count; ++attempt) {
    const double px = rng.uniform() * camera.width - 0.5;
    const double py = rng.uniform() * camera.height - 0.5;
    const Ray ray = camera.generate_ray(px, py);
    const auto p = extract_surface_point(scene, ray.origin, ray.dir);
    if (!p || !p->valid) continue;
    points.push_back({*p, -ray.dir});
  }
  if (points.empty()) throw Error("no valid surface points found on any probe ray");
  return points;
}

double visibility_l2(const VolumeScene& scene, const TransferSample& sample,
                     const SphericalQuadrature& grid) {
  if (grid.degree() < sample.transfer.degree()) {
    throw InvalidArgument("visibility_l2: grid degree below transfer degree");
  }
  const std::size_t n = sample.transfer.size();
  double sum = 0.0;
  double total_weight = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Direction& w = grid.direction(i);
    const auto y = grid.basis(i);
    double recon = 0.0;
    for (std::size_t j = 0; j < n; ++j) recon += sample.transfer[j] * y[j];
    const double h = cosine_term(sample.point.normal, w);
    const double ref = h > 0.0 ? visibility(scene, sample.point.position, w) * h : 0.0;
    sum += grid.weight(i) * (recon - ref) * (recon - ref);
    total_weight += grid.weight(i);
  }
  return std::sqrt(sum / total_weight);
}

ValidationReport compare_prt_vs_mc(const VolumeScene& scene, const EnvironmentLight& light,
                                   const std::vector<ProbePoint>& points,
                                   const ValidationConfig& config) {
  if (points.empty()) throw Error("no valid surface points found on any probe ray");
  const auto start = std::chrono::steady_clock::now();

  const ShLight light_sh = project_to_sh(light, config.degree, config.light_quadrature);
  const SphericalQuadrature bake_quad(config.bake_quadrature, config.degree);
  const SphericalQuadrature grid(config.visibility_grid, config.degree);

  ValidationReport report;
  report.config = config;
  report.entries.resize(points.size());

  parallel_for(points.size(), config.threads, [&](std::size_t i) {
    const ProbePoint& probe = points[i];
    const TransferSample sample = bake_transfer(scene, probe.point, bake_quad);
    const Material& mat = probe.point.material;

    ValidationEntry& e = report.entries[i];
    e.position = probe.point.position;
    e.normal = probe.point.normal;
    e.view = probe.view;
    e.albedo = mat.albedo;
    e.sh_diffuse = diffuse_radiance(mat.albedo, sample.transfer, light_sh);

    const McEstimate mc = mc_diffuse_radiance(scene, light, probe.point.position,
                                              probe.point.normal, mat.albedo, config.mc_samples,
                                              mix_seed(config.seed, 2 * i));
    e.mc_diffuse = mc.mean;
    e.mc_std_error = mc.std_error;
    for (int c = 0; c < 3; ++c) {
      const double diff = std::abs(e.sh_diffuse[c] - mc.mean[c]);
      const double z = mc.std_error[c] > 0.0 ? diff / mc.std_error[c]
                                             : (diff == 0.0 ? 0.0 : HUGE_VAL);
      e.max_z_score = std::max(e.max_z_score, z);
    }

    const RaySet rays = nrt_rays(probe.point.normal, probe.view, mix_seed(config.seed, 2 * i + 1));
    double residual = 0.0;
    for (const Direction& d : rays.directions) residual += nrt_residual(scene, sample, d);
    e.mean_nrt_residual = residual / static_cast<double>(RaySet::kSize);

    e.visibility_l2 = visibility_l2(scene, sample, grid);

    const Rgb spec = specular_radiance(1.0, probe.point.normal, probe.view, sample.transfer,
                                       light_sh);
    e.negative_specular = spec.r < 0.0 || spec.g < 0.0 || spec.b < 0.0;
  });

  double err_sq = 0.0;
  double ref_sq = 0.0;
  std::size_t within = 0;
  std::size_t negative = 0;
  for (const ValidationEntry& e : report.entries) {
    report.mean_nrt_residual += e.mean_nrt_residual;
    report.mean_visibility_l2 += e.visibility_l2;
    report.max_z_score = std::max(report.max_z_score, e.max_z_score);
    if (e.max_z_score <= 3.0) ++within;
    if (e.negative_specular) ++negative;
    for (int c = 0; c < 3; ++c) {
      const double d = e.sh_diffuse[c] - e.mc_diffuse[c];
      err_sq += d * d;
      ref_sq += e.mc_diffuse[c] * e.mc_diffuse[c];
    }
  }
  const double n = static_cast<double>(report.entries.size());
  report.mean_nrt_residual /= n;
  report.mean_visibility_l2 /= n;
  report.diffuse_relative_rms = ref_sq > 0.0 ? std::sqrt(err_sq / ref_sq) : 0.0;
  report.fraction_within_3_sigma = static_cast<double>(within) / n;
  report.negative_specular_rate = static_cast<double>(negative) / n;
  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::string report_to_json(const ValidationReport& report, bool include_runtime) {
  const ValidationConfig& c = report.config;
  ojson doc;
  doc["config"] = {{"degree", c.degree},
                   {"bake_quadrature", to_string(c.bake_quadrature)},
                   {"light_quadrature", to_string(c.light_quadrature)},
                   {"visibility_grid", to_string(c.visibility_grid)},
                   {"mc_samples", c.mc_samples},
                   {"seed", c.seed},
                   {"nrt_rays_per_point", RaySet::kSize}};
  doc["aggregate"] = {{"points", report.entries.size()},
                      {"mean_nrt_residual", report.mean_nrt_residual},
                      {"mean_visibility_l2", report.mean_visibility_l2},
                      {"diffuse_relative_rms", report.diffuse_relative_rms},
                      {"max_z_score", report.max_z_score},
                      {"fraction_within_3_sigma", report.fraction_within_3_sigma},
                      {"negative_specular_rate", report.negative_specular_rate}};
  if (include_runtime) doc["runtime_seconds"] = report.runtime_seconds;
  auto entries = ojson::array();
  for (const ValidationEntry& e : report.entries) {
    entries.push_back({{"position", vec_json(e.position)},
                       {"normal", vec_json(e.normal.vec())},
                       {"view", vec_json(e.view.vec())},
                       {"albedo", rgb_json(e.albedo)},
                       {"sh_diffuse", rgb_json(e.sh_diffuse)},
                       {"mc_diffuse", rgb_json(e.mc_diffuse)},
                       {"mc_std_error", rgb_json(e.mc_std_error)},
                       {"max_z_score", e.max_z_score},
                       {"mean_nrt_residual", e.mean_nrt_residual},
                       {"visibility_l2", e.visibility_l2},
                       {"negative_specular", e.negative_specular}});
  }
  doc["entries"] = std::move(entries);
  return doc.dump(2) + "\n";
}

std::string report_table(const ValidationReport& report) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%5s  %26s  %10s  %10s  %8s  %10s  %10s\n", "point",
                "position", "sh_diff.g", "mc_diff.g", "max_z", "nrt_resid", "vis_l2");
  out << line;
  for (std::size_t i = 0; i < report.entries.size(); ++i) {
    const ValidationEntry& e = report.entries[i];
    std::snprintf(line, sizeof line,
                  "%5zu  (%7.3f, %7.3f, %7.3f)  %10.5f  %10.5f  %8.3f  %10.6f  %10.6f\n", i,
                  e.position.x, e.position.y, e.position.z, e.sh_diffuse.g, e.mc_diffuse.g,
                  e.max_z_score, e.mean_nrt_residual, e.visibility_l2);
    out << line;
  }
  std::snprintf(line, sizeof line,
                "points %zu | mean nrt residual %.6f | mean visibility L2 %.6f | diffuse rel. "
                "RMS %.5f | within 3 sigma %.3f | negative specular %.3f\n",
                report.entries.size(), report.mean_nrt_residual, report.mean_visibility_l2,
                report.diffuse_relative_rms, report.fraction_within_3_sigma,
                report.negative_specular_rate);
  out << line;
  return out.str();
}

}  // namespace prtvol
