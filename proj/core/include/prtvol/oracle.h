// Copyright 2026 The prtvol Authors
// SPDX-License-Identifier: Apache-2.0

// Monte Carlo ground truth for the diffuse rendering integral and the
// PRT-vs-reference validation report built on it.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "prtvol/envlight.h"
#include "prtvol/field.h"
#include "prtvol/render.h"
#include "prtvol/transport.h"

namespace prtvol {

struct McEstimate {
  Rgb mean;
  Rgb std_error;
  std::size_t samples = 0;
};

/// (rho/pi) (4 pi / S) sum_s L(w_s) V(x, w_s) H(n, w_s) over uniform sphere
/// samples w_s, with per-channel standard error from the sample variance.
/// Visibility rays are cast only where H > 0.
McEstimate mc_diffuse_radiance(const VolumeScene& scene, const EnvironmentLight& light,
                               const Vec3& x, const Direction& n, const Rgb& albedo,
                               std::size_t samples, std::uint64_t seed);

/// A surface point together with the direction toward the viewer.
struct ProbePoint {
  SurfacePoint point;
  Direction view;
};

/// Random pixels of `camera` marched to their maximum-weight sample; points
/// without a valid normal are skipped. Throws Error if none are found within
/// 20 * count attempts.
std::vector<ProbePoint> probe_surface_points(const VolumeScene& scene, const Camera& camera,
                                             std::size_t count, std::uint64_t seed);

/// RMS over the sphere of reconstruct(t, w) - V(x, w) H(n, w) on the given
/// direction grid.
double visibility_l2(const VolumeScene& scene, const TransferSample& sample,
                     const SphericalQuadrature& grid);

struct ValidationConfig {
  int degree = kDefaultShDegree;
  QuadratureSpec bake_quadrature = kDefaultBakeQuadrature;
  QuadratureSpec light_quadrature{128, 256};
  /// Direction grid for the visibility-map comparison.
  QuadratureSpec visibility_grid{32, 64};
  std::size_t mc_samples = 100000;
  std::uint64_t seed = 7;
  int threads = 0;
};

struct ValidationEntry {
  Vec3 position;
  Direction normal;
  Direction view;
  Rgb albedo;
  Rgb sh_diffuse;
  Rgb mc_diffuse;
  Rgb mc_std_error;
  /// max_c |sh - mc| / stderr_c (0 where stderr is 0 and they agree)
  double max_z_score = 0.0;
  double mean_nrt_residual = 0.0;
  double visibility_l2 = 0.0;
  /// 1 if the specular term at the mirror direction is negative.
  bool negative_specular = false;
};

struct ValidationReport {
  ValidationConfig config;
  std::vector<ValidationEntry> entries;
  double mean_nrt_residual = 0.0;
  double mean_visibility_l2 = 0.0;
  /// sqrt(sum |sh - mc|^2 / sum |mc|^2) over points and channels.
  double diffuse_relative_rms = 0.0;
  double max_z_score = 0.0;
  double fraction_within_3_sigma = 0.0;
  double negative_specular_rate = 0.0;
  /// Wall-clock seconds; excluded from JSON unless requested.
  double runtime_seconds = 0.0;
};

/// Bakes transfer at each point, compares SH diffuse against the Monte Carlo
/// estimate, and measures the NRT residual over nrt_rays() and the
/// visibility-map error. Per-point seeds are mix_seed(config.seed, index), so
/// results do not depend on config.threads. Throws Error on an empty point set.
ValidationReport compare_prt_vs_mc(const VolumeScene& scene, const EnvironmentLight& light,
                                   const std::vector<ProbePoint>& points,
                                   const ValidationConfig& config);

std::string report_to_json(const ValidationReport& report, bool include_runtime = false);
std::string report_table(const ValidationReport& report);

}  // namespace prtvol
