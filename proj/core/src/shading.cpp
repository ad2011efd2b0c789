// Copyright 2026 The prtvol Authors
// SPDX-License-Identifier: Apache-2.0

#include "prtvol/shading.h"

namespace prtvol {

Direction reflect_direction(const Direction& view, const Direction& n) {
  return Direction(2.0 * dot(view.vec(), n.vec()) * n.vec() - view.vec());
}

Rgb diffuse_radiance(const Rgb& albedo, const ShVector& transfer, const ShLight& light) {
  if (transfer.degree() != light.degree()) {
    throw InvalidArgument("diffuse_radiance: transfer degree " + std::to_string(transfer.degree()) +
                          " != light degree " + std::to_string(light.degree()));
  }
  Rgb out;
  for (int c = 0; c < 3; ++c) out[c] = albedo[c] / kPi * inner_product(transfer, light.channels[c]);
  return out;
}

Rgb specular_radiance(double tint, const Direction& n, const Direction& view,
                      const ShVector& transfer, const ShLight& light) {
  if (tint == 0.0) return {};
  const Direction wr = reflect_direction(view, n);
  return reconstruct(light, wr) * (tint * reconstruct(transfer, wr));
}

RadianceSample outgoing_radiance(const TransferSample& sample, const Direction& view,
                                 const ShLight& light) {
  const SurfacePoint& p = sample.point;
  RadianceSample out;
  out.diffuse = diffuse_radiance(p.material.albedo, sample.transfer, light);
  out.specular = specular_radiance(p.material.tint, p.normal, view, sample.transfer, light);
  out.combined = out.diffuse + out.specular;
  return out;
}

}  // namespace prtvol
