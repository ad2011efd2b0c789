// Copyright 2026 The prtvol Authors
// SPDX-License-Identifier: Apache-2.0

// Outgoing radiance from SH light and SH transfer.
//
// Diffuse: rho/pi * <t, l_c> per channel.
// Specular: the glossy lobe is collapsed onto the mirror direction w_r, so
// the specular BRDF is K(x) times a delta at w_r and the integral becomes
// K * L(w_r) * (V H)(w_r), both factors read back from their SH expansions.
// No clamping happens here; negative ringing survives until image export.

#pragma once

#include "prtvol/envlight.h"
#include "prtvol/math.h"
#include "prtvol/sh.h"
#include "prtvol/transport.h"

namespace prtvol {

struct RadianceSample {
  Rgb diffuse;
  Rgb specular;
  Rgb combined;
};

/// 2 (view . n) n - view
Direction reflect_direction(const Direction& view, const Direction& n);

Rgb diffuse_radiance(const Rgb& albedo, const ShVector& transfer, const ShLight& light);

Rgb specular_radiance(double tint, const Direction& n, const Direction& view,
                      const ShVector& transfer, const ShLight& light);

RadianceSample outgoing_radiance(const TransferSample& sample, const Direction& view,
                                 const ShLight& light);

}  // namespace prtvol
