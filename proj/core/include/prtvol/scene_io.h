// Copyright 2026 The prtvol Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>

#include "prtvol/field.h"
#include "prtvol/render.h"

namespace prtvol {

struct SceneFile {
  VolumeScene scene;
  std::optional<Camera> camera;
};

/// Parses the scene JSON documented in docs/scene_format.md. Unknown keys
/// are rejected. Throws FormatError with the offending JSON path.
SceneFile parse_scene(const std::string& json_text);
SceneFile load_scene(const std::string& path);

/// Canonical JSON for a scene (and camera, if any). parse_scene(to_json(s))
/// reproduces s (slab normals up to renormalization rounding).
std::string scene_to_json(const VolumeScene& scene, const std::optional<Camera>& camera = {});

/// FNV-1a 64 of the canonical scene JSON, as 16 hex digits.
std::string scene_hash(const VolumeScene& scene);

}  // namespace prtvol
