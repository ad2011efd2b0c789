// Copyright 2026 The prtvol Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "prtvol/field.h"
#include "prtvol/sh.h"

namespace prtvol {

/// Default direction grid for transfer baking (2048 secondary rays).
inline constexpr QuadratureSpec kDefaultBakeQuadrature{32, 64};

/// Midpoint-rule integral of sigma along origin + s dir over [s_begin, s_end]
/// with `steps` samples. Returns +inf (fully opaque) as soon as the partial
/// depth exceeds 40, so adding density never lowers the result.
double optical_depth(const VolumeScene& scene, const Vec3& origin, const Direction& dir,
                     double s_begin, double s_end, int steps);

/// Transmittance from x toward dir: exp(-optical depth) from the
/// self-occlusion offset to the exit of the bounding sphere, using the
/// scene's secondary step count.
double visibility(const VolumeScene& scene, const Vec3& x, const Direction& dir);

/// max(0, n . dir)
double cosine_term(const Direction& n, const Direction& dir);

struct TransferSample {
  SurfacePoint point;
  ShVector transfer;
};

/// Projects omega -> visibility(x, omega) * cosine_term(n, omega) onto the SH
/// basis. Throws InvalidArgument for an invalid surface point.
TransferSample bake_transfer(const VolumeScene& scene, const SurfacePoint& p,
                             const SphericalQuadrature& quad);
TransferSample bake_transfer(const VolumeScene& scene, const SurfacePoint& p,
                             QuadratureSpec quad = kDefaultBakeQuadrature,
                             int degree = kDefaultShDegree);

enum class RayTag { primary_forward, primary_backward, auxiliary };

/// Directions used to supervise transfer at a point: the view direction, its
/// opposite, and eight uniform samples of the hemisphere n . d < 0.
struct RaySet {
  static constexpr std::size_t kSize = 10;
  static constexpr std::size_t kAuxiliary = 8;

  std::array<Direction, kSize> directions;
  std::array<RayTag, kSize> tags;
  std::uint64_t seed = 0;
};

RaySet nrt_rays(const Direction& n, const Direction& view, std::uint64_t seed);

/// (reconstruct(transfer, dir) - reference)^2
double nrt_residual(const ShVector& transfer, const Direction& dir, double reference);

/// Residual against the ray-traced reference V(x, dir) H(x, dir). The
/// visibility ray is skipped when H = 0.
double nrt_residual(const VolumeScene& scene, const TransferSample& sample, const Direction& dir);

/// One midpoint sample of a primary ray march with non-zero density.
struct MarchSample {
  double t = 0.0;
  Vec3 position;
  double sigma = 0.0;
  double transmittance = 1.0;  // before this step
  double weight = 0.0;         // T_k (1 - exp(-sigma_k dt))
};

struct PrimaryMarch {
  std::vector<MarchSample> samples;
  double transmittance = 1.0;  // after the last step
  double step = 0.0;

  double alpha() const { return 1.0 - transmittance; }
};

/// Marches [t_near, t_far] clipped to the bounding sphere with the scene's
/// primary step count. Weights telescope: sum of weights = 1 - transmittance.
PrimaryMarch march_primary(const VolumeScene& scene, const Vec3& origin, const Direction& dir);

/// Surface point at the sample of maximum volume-rendering weight.
/// nullopt when the ray accumulates no weight; the returned point may still
/// be invalid (no normal) if the gradient vanishes there.
std::optional<SurfacePoint> extract_surface_point(const VolumeScene& scene, const Vec3& origin,
                                                  const Direction& dir);

/// Baked transfer records with a spatial hash for nearest-point lookup.
///
/// Binary layout: records back to back, each position (3 x float64),
/// normal (3 x float64), then (degree+1)^2 float64 coefficients, all
/// little-endian. The sidecar `<path>.json` holds {degree, count, scene_hash}.
class TransferCache {
 public:
  TransferCache(int degree, std::string scene_hash);

  int degree() const { return degree_; }
  const std::string& scene_hash() const { return scene_hash_; }
  std::size_t size() const { return records_.size(); }
  const std::vector<TransferSample>& records() const { return records_; }

  void add(TransferSample sample);

  /// Buckets records on a grid of the given cell size. Lookups whose
  /// max_distance equals the cell size use the grid; others scan linearly.
  void build_index(double cell);

  /// Nearest record within max_distance whose normal is within ~25 degrees
  /// of `normal`; nullptr if none.
  const TransferSample* nearest(const Vec3& position, const Direction& normal,
                                double max_distance) const;

  void write(const std::string& path) const;
  /// Materials are re-evaluated from `scene`; throws FormatError on a
  /// malformed file or sidecar mismatch.
  static TransferCache read(const std::string& path, const VolumeScene& scene);

 private:
  struct CellKey {
    long x, y, z;
    bool operator==(const CellKey&) const = default;
  };
  struct CellHash {
    std::size_t operator()(const CellKey& k) const;
  };

  int degree_;
  std::string scene_hash_;
  std::vector<TransferSample> records_;
  double cell_size_ = 0.0;
  std::unordered_map<CellKey, std::vector<std::size_t>, CellHash> index_;
};

}  // namespace prtvol
