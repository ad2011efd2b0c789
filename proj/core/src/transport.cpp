// Copyright 2026 The prtvol Authors
// SPDX-License-Identifier: Apache-2.0

#include "prtvol/transport.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "prtvol/rng.h"

namespace prtvol {
namespace {

constexpr double kOpaqueDepth = 40.0;

std::uint64_t swap_bytes(std::uint64_t v) {
  std::uint64_t out = 0;
  for (int i = 0; i < 8; ++i) out = (out << 8) | ((v >> (8 * i)) & 0xFFu);
  return out;
}

void put_f64(std::vector<char>& buf, double v) {
  std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  if constexpr (std::endian::native == std::endian::big) bits = swap_bytes(bits);
  char raw[8];
  std::memcpy(raw, &bits, 8);
  buf.insert(buf.end(), raw, raw + 8);
}

double get_f64(const char* p) {
  std::uint64_t bits;
  std::memcpy(&bits, p, 8);
  if constexpr (std::endian::native == std::endian::big) bits = swap_bytes(bits);
  return std::bit_cast<double>(bits);
}


}  // namespace

double optical_depth(const VolumeScene& scene, const Vec3& origin, const Direction& dir,
                     double s_begin, double s_end, int steps) {
  if (steps < 1) throw InvalidArgument("optical_depth: steps must be >= 1");
  if (!(s_end > s_begin)) return 0.0;
  const double ds = (s_end - s_begin) / steps;
  const auto hull = scene.support_hull(origin, dir.vec());
  if (!hull) return 0.0;
  // Samples outside the hull contribute exactly zero.
  const double k_lo = std::ceil((hull->first - s_begin) / ds - 0.5);
  const double k_hi = std::floor((hull->second - s_begin) / ds - 0.5);
  const int first = k_lo > 0.0 ? static_cast<int>(std::min<double>(k_lo, steps)) : 0;
  const int last = k_hi < steps - 1 ? static_cast<int>(std::max<double>(k_hi, -1.0)) : steps - 1;
  double depth = 0.0;
  for (int k = first; k <= last; ++k) {
    const double s = s_begin + (k + 0.5) * ds;
    depth += scene.density(origin + dir.vec() * s) * ds;
    if (depth > kOpaqueDepth) return std::numeric_limits<double>::infinity();
  }
  return depth;
}

double visibility(const VolumeScene& scene, const Vec3& x, const Direction& dir) {
  const auto hit = scene.bounds().intersect(x, dir);
  if (!hit) return 1.0;
  const double begin = std::max(scene.self_occlusion_offset(), hit->first);
  const double end = hit->second;
  if (!(end > begin)) return 1.0;
  return std::exp(-optical_depth(scene, x, dir, begin, end, scene.march().secondary_steps));
}

double cosine_term(const Direction& n, const Direction& dir) {
  return std::max(0.0, dot(n.vec(), dir.vec()));
}

TransferSample bake_transfer(const VolumeScene& scene, const SurfacePoint& p,
                             const SphericalQuadrature& quad) {
  if (!p.valid) throw InvalidArgument("bake_transfer: surface point has no valid normal");
  std::vector<double> values(quad.size(), 0.0);
  for (std::size_t i = 0; i < quad.size(); ++i) {
    const Direction& w = quad.direction(i);
    const double h = cosine_term(p.normal, w);
    if (h > 0.0) values[i] = visibility(scene, p.position, w) * h;
  }
  return {p, quad.project(values)};
}

TransferSample bake_transfer(const VolumeScene& scene, const SurfacePoint& p,
                             QuadratureSpec quad, int degree) {
  return bake_transfer(scene, p, SphericalQuadrature(quad, degree));
}

RaySet nrt_rays(const Direction& n, const Direction& view, std::uint64_t seed) {
  RaySet set;
  set.seed = seed;
  set.directions[0] = view;
  set.tags[0] = RayTag::primary_forward;
  set.directions[1] = -view;
  set.tags[1] = RayTag::primary_backward;
  Rng rng(seed);
  for (std::size_t k = 2; k < RaySet::kSize; ++k) {
    Direction d = rng.uniform_sphere();
    double c = dot(d.vec(), n.vec());
    while (c == 0.0) {
      d = rng.uniform_sphere();
      c = dot(d.vec(), n.vec());
    }
    set.directions[k] = c > 0.0 ? -d : d;
    set.tags[k] = RayTag::auxiliary;
  }
  return set;
}

double nrt_residual(const ShVector& transfer, const Direction& dir, double reference) {
  const double diff = reconstruct(transfer, dir) - reference;
  return diff * diff;
}

double nrt_residual(const VolumeScene& scene, const TransferSample& sample, const Direction& dir) {
  const double h = cosine_term(sample.point.normal, dir);
  const double reference = h > 0.0 ? visibility(scene, sample.point.position, dir) * h : 0.0;
  return nrt_residual(sample.transfer, dir, reference);
}

PrimaryMarch march_primary(const VolumeScene& scene, const Vec3& origin, const Direction& dir) {
  PrimaryMarch out;
  const MarchSettings& m = scene.march();
  const auto hit = scene.bounds().intersect(origin, dir);
  if (!hit) return out;
  const double begin = std::max(m.t_near, hit->first);
  const double end = std::min(m.t_far, hit->second);
  if (!(end > begin)) return out;

  const double dt = (end - begin) / m.primary_steps;
  out.step = dt;
  double depth = 0.0;
  double transmittance = 1.0;
  for (int k = 0; k < m.primary_steps; ++k) {
    const double t = begin + (k + 0.5) * dt;
    const Vec3 x = origin + dir.vec() * t;
    const double sigma = scene.density(x);
    if (sigma <= 0.0) continue;
    depth += sigma * dt;
    const double next = std::exp(-depth);
    out.samples.push_back({t, x, sigma, transmittance, transmittance - next});
    transmittance = next;
  }
  out.transmittance = transmittance;
  return out;
}

std::optional<SurfacePoint> extract_surface_point(const VolumeScene& scene, const Vec3& origin,
                                                  const Direction& dir) {
  const PrimaryMarch march = march_primary(scene, origin, dir);
  const MarchSample* best = nullptr;
  for (const MarchSample& s : march.samples) {
    if (best == nullptr || s.weight > best->weight) best = &s;
  }
  if (best == nullptr || !(best->weight > 0.0)) return std::nullopt;
  return surface_point_at(scene, best->position);
}

std::size_t TransferCache::CellHash::operator()(const CellKey& k) const {
  std::uint64_t h = static_cast<std::uint64_t>(k.x) * 0x9e3779b97f4a7c15ULL;
  h ^= static_cast<std::uint64_t>(k.y) * 0xc2b2ae3d27d4eb4fULL;
  h ^= static_cast<std::uint64_t>(k.z) * 0x165667b19e3779f9ULL;
  return static_cast<std::size_t>(h ^ (h >> 29));
}

TransferCache::TransferCache(int degree, std::string scene_hash)
    : degree_(degree), scene_hash_(std::move(scene_hash)) {
  if (degree < 0 || degree > kMaxShDegree) throw InvalidArgument("TransferCache: bad degree");
}

void TransferCache::add(TransferSample sample) {
  if (sample.transfer.degree() != degree_) {
    throw InvalidArgument("TransferCache::add: degree mismatch");
  }
  records_.push_back(std::move(sample));
  cell_size_ = 0.0;
  index_.clear();
}

void TransferCache::build_index(double cell) {
  if (!(cell > 0.0)) throw InvalidArgument("TransferCache::build_index: cell must be > 0");
  index_.clear();
  cell_size_ = cell;
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const Vec3& p = records_[i].point.position;
    index_[{static_cast<long>(std::floor(p.x / cell)), static_cast<long>(std::floor(p.y / cell)),
            static_cast<long>(std::floor(p.z / cell))}]
        .push_back(i);
  }
}

const TransferSample* TransferCache::nearest(const Vec3& position, const Direction& normal,
                                             double max_distance) const {
  if (records_.empty() || !(max_distance > 0.0)) return nullptr;
  if (cell_size_ != max_distance) {
    const TransferSample* best = nullptr;
    double best_d2 = max_distance * max_distance;
    for (const TransferSample& r : records_) {
      if (dot(r.point.normal.vec(), normal.vec()) < 0.9) continue;
      const Vec3 d = r.point.position - position;
      const double d2 = dot(d, d);
      if (d2 < best_d2) {
        best_d2 = d2;
        best = &r;
      }
    }
    return best;
  }
  const long cx = static_cast<long>(std::floor(position.x / cell_size_));
  const long cy = static_cast<long>(std::floor(position.y / cell_size_));
  const long cz = static_cast<long>(std::floor(position.z / cell_size_));
  const TransferSample* best = nullptr;
  double best_d2 = max_distance * max_distance;
  for (long dx = -1; dx <= 1; ++dx) {
    for (long dy = -1; dy <= 1; ++dy) {
      for (long dz = -1; dz <= 1; ++dz) {
        const auto it = index_.find({cx + dx, cy + dy, cz + dz});
        if (it == index_.end()) continue;
        for (std::size_t i : it->second) {
          const TransferSample& r = records_[i];
          if (dot(r.point.normal.vec(), normal.vec()) < 0.9) continue;
          const Vec3 d = r.point.position - position;
          const double d2 = dot(d, d);
          // Ties resolve to the lowest index so lookups are order-independent.
          if (d2 < best_d2 || (d2 == best_d2 && best != nullptr && &r < best)) {
            best_d2 = d2;
            best = &r;
          }
        }
      }
    }
  }
  return best;
}

void TransferCache::write(const std::string& path) const {
  std::vector<char> buf;
  const std::size_t per_record = 6 + static_cast<std::size_t>(sh_count(degree_));
  buf.reserve(records_.size() * per_record * 8);
  for (const TransferSample& r : records_) {
    for (int a = 0; a < 3; ++a) put_f64(buf, r.point.position[a]);
    for (int a = 0; a < 3; ++a) put_f64(buf, r.point.normal.vec()[a]);
    for (double c : r.transfer.coeffs()) put_f64(buf, c);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw Error("write failed for '" + path + "'");

  nlohmann::ordered_json side;
  side["degree"] = degree_;
  side["count"] = records_.size();
  side["scene_hash"] = scene_hash_;
  side["record_layout"] = "position[3] f64, normal[3] f64, coeffs[(degree+1)^2] f64, little-endian";
  std::ofstream js(path + ".json", std::ios::binary);
  if (!js) throw Error("cannot write '" + path + ".json'");
  js << side.dump(2) << "\n";
}

TransferCache TransferCache::read(const std::string& path, const VolumeScene& scene) {
  std::ifstream js(path + ".json", std::ios::binary);
  if (!js) throw Error("cannot open cache sidecar '" + path + ".json'");
  int degree = 0;
  std::size_t count = 0;
  std::string hash;
  try {
    const auto side = nlohmann::json::parse(js);
    degree = side.at("degree").get<int>();
    count = side.at("count").get<std::size_t>();
    hash = side.at("scene_hash").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("cache sidecar '" + path + ".json': " + e.what());
  }
  if (degree < 0 || degree > kMaxShDegree) {
    throw FormatError("cache sidecar '" + path + ".json': bad degree");
  }

  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open cache '" + path + "'");
  std::ostringstream raw;
  raw << in.rdbuf();
  const std::string bytes = raw.str();
  const std::size_t n_coeffs = static_cast<std::size_t>(sh_count(degree));
  const std::size_t per_record = (6 + n_coeffs) * 8;
  if (bytes.size() != count * per_record) {
    throw FormatError("cache '" + path + "': size " + std::to_string(bytes.size()) +
                      " does not match " + std::to_string(count) + " records");
  }

  TransferCache cache(degree, hash);
  cache.records_.reserve(count);
  for (std::size_t r = 0; r < count; ++r) {
    const char* p = bytes.data() + r * per_record;
    const Vec3 pos{get_f64(p), get_f64(p + 8), get_f64(p + 16)};
    const Vec3 nrm{get_f64(p + 24), get_f64(p + 32), get_f64(p + 40)};
    std::vector<double> coeffs(n_coeffs);
    for (std::size_t j = 0; j < n_coeffs; ++j) coeffs[j] = get_f64(p + 48 + 8 * j);
    SurfacePoint sp;
    sp.position = pos;
    try {
      sp.normal = Direction(nrm);
    } catch (const InvalidArgument&) {
      throw FormatError("cache '" + path + "': record " + std::to_string(r) + " has a bad normal");
    }
    sp.material = scene.material(pos);
    sp.valid = true;
    cache.records_.push_back({sp, ShVector(std::move(coeffs), degree)});
  }
  return cache;
}

}  // namespace prtvol
