// Copyright 2026 The prtvol Authors
// SPDX-License-Identifier: Apache-2.0

#include "prtvol/scene_io.h"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace prtvol {
namespace {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw FormatError("scene " + where + ": " + what);
}

void check_keys(const json& obj, const std::string& where, std::set<std::string> allowed) {
  if (!obj.is_object()) fail(where, "expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) fail(where, "unknown key '" + key + "'");
  }
}

const json& require(const json& obj, const std::string& where, const char* key) {
  if (!obj.contains(key)) fail(where, std::string("missing '") + key + "'");
  return obj.at(key);
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where, "expected a number");
  return v.get<double>();
}

int integer(const json& v, const std::string& where) {
  if (!v.is_number_integer()) fail(where, "expected an integer");
  return v.get<int>();
}

Vec3 vec3(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 3) fail(where, "expected [x, y, z]");
  return {number(v[0], where), number(v[1], where), number(v[2], where)};
}

Material material(const json& obj, const std::string& where, const Material& fallback) {
  Material m = fallback;
  if (obj.contains("albedo")) {
    const Vec3 a = vec3(obj.at("albedo"), where + ".albedo");
    m.albedo = Rgb(a.x, a.y, a.z);
  }
  if (obj.contains("tint")) m.tint = number(obj.at("tint"), where + ".tint");
  return m;
}

Primitive primitive(const json& obj, const std::string& where) {
  const std::string type = [&] {
    const json& t = require(obj, where, "type");
    if (!t.is_string()) fail(where + ".type", "expected a string");
    return t.get<std::string>();
  }();
  Primitive p;
  if (type == "sphere") {
    check_keys(obj, where,
               {"type", "center", "radius", "density_scale", "softness", "albedo", "tint"});
    p.shape = SoftSphere{vec3(require(obj, where, "center"), where + ".center"),
                         number(require(obj, where, "radius"), where + ".radius")};
  } else if (type == "box") {
    check_keys(obj, where,
               {"type", "center", "half_extent", "density_scale", "softness", "albedo", "tint"});
    p.shape = SoftBox{vec3(require(obj, where, "center"), where + ".center"),
                      vec3(require(obj, where, "half_extent"), where + ".half_extent")};
  } else if (type == "slab") {
    check_keys(obj, where,
               {"type", "normal", "lo", "hi", "density_scale", "softness", "albedo", "tint"});
    Slab s;
    try {
      s.normal = Direction(vec3(require(obj, where, "normal"), where + ".normal"));
    } catch (const InvalidArgument&) {
      fail(where + ".normal", "must be a non-zero vector");
    }
    s.lo = number(require(obj, where, "lo"), where + ".lo");
    if (obj.contains("hi")) s.hi = number(obj.at("hi"), where + ".hi");
    p.shape = s;
  } else {
    fail(where + ".type", "unknown primitive type '" + type + "' (sphere, box, slab)");
  }
  p.density_scale = number(require(obj, where, "density_scale"), where + ".density_scale");
  p.softness = number(require(obj, where, "softness"), where + ".softness");
  p.material = material(obj, where, Material{});
  return p;
}

Camera camera(const json& obj) {
  const std::string where = "camera";
  check_keys(obj, where, {"eye", "target", "up", "fov_deg", "width", "height"});
  Camera c;
  if (obj.contains("eye")) c.eye = vec3(obj.at("eye"), where + ".eye");
  if (obj.contains("target")) c.target = vec3(obj.at("target"), where + ".target");
  if (obj.contains("up")) c.up = vec3(obj.at("up"), where + ".up");
  if (obj.contains("fov_deg")) c.fov_y = number(obj.at("fov_deg"), where + ".fov_deg") * kPi / 180.0;
  if (obj.contains("width")) c.width = integer(obj.at("width"), where + ".width");
  if (obj.contains("height")) c.height = integer(obj.at("height"), where + ".height");
  try {
    c.validate();
  } catch (const InvalidArgument& e) {
    fail(where, e.what());
  }
  return c;
}

ojson vec_json(const Vec3& v) { return ojson::array({v.x, v.y, v.z}); }
ojson rgb_json(const Rgb& c) { return ojson::array({c.r, c.g, c.b}); }

}  // namespace

SceneFile parse_scene(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("scene: invalid JSON: ") + e.what());
  }
  check_keys(doc, "root", {"bounds", "default_material", "march", "camera", "primitives"});

  const json& b = require(doc, "root", "bounds");
  check_keys(b, "bounds", {"center", "radius"});
  BoundingSphere bounds{vec3(require(b, "bounds", "center"), "bounds.center"),
                        number(require(b, "bounds", "radius"), "bounds.radius")};

  Material def;
  if (doc.contains("default_material")) {
    check_keys(doc.at("default_material"), "default_material", {"albedo", "tint"});
    def = material(doc.at("default_material"), "default_material", def);
  }

  MarchSettings march;
  if (doc.contains("march")) {
    const json& m = doc.at("march");
    check_keys(m, "march", {"primary_steps", "secondary_steps", "t_near", "t_far"});
    if (m.contains("primary_steps")) march.primary_steps = integer(m.at("primary_steps"), "march.primary_steps");
    if (m.contains("secondary_steps")) march.secondary_steps = integer(m.at("secondary_steps"), "march.secondary_steps");
    if (m.contains("t_near")) march.t_near = number(m.at("t_near"), "march.t_near");
    if (m.contains("t_far")) march.t_far = number(m.at("t_far"), "march.t_far");
  }

  std::vector<Primitive> prims;
  if (doc.contains("primitives")) {
    const json& list = doc.at("primitives");
    if (!list.is_array()) fail("primitives", "expected an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      prims.push_back(primitive(list[i], "primitives[" + std::to_string(i) + "]"));
    }
  }

  std::optional<Camera> cam;
  if (doc.contains("camera")) cam = camera(doc.at("camera"));

  try {
    return {VolumeScene(bounds, def, march, std::move(prims)), cam};
  } catch (const InvalidArgument& e) {
    throw FormatError(e.what());
  }
}

SceneFile load_scene(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open scene '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scene(buf.str());
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

std::string scene_to_json(const VolumeScene& scene, const std::optional<Camera>& camera) {
  ojson doc;
  doc["bounds"] = {{"center", vec_json(scene.bounds().center)}, {"radius", scene.bounds().radius}};
  doc["default_material"] = {{"albedo", rgb_json(scene.default_material().albedo)},
                             {"tint", scene.default_material().tint}};
  const MarchSettings& m = scene.march();
  doc["march"] = {{"primary_steps", m.primary_steps},
                  {"secondary_steps", m.secondary_steps},
                  {"t_near", m.t_near},
                  {"t_far", m.t_far}};
  if (camera) {
    doc["camera"] = {{"eye", vec_json(camera->eye)},       {"target", vec_json(camera->target)},
                     {"up", vec_json(camera->up)},         {"fov_deg", camera->fov_y * 180.0 / kPi},
                     {"width", camera->width},             {"height", camera->height}};
  }
  auto prims = ojson::array();
  for (const Primitive& p : scene.primitives()) {
    ojson o;
    std::visit(Overloaded{[&](const SoftSphere& s) {
                            o["type"] = "sphere";
                            o["center"] = vec_json(s.center);
                            o["radius"] = s.radius;
                          },
                          [&](const SoftBox& b) {
                            o["type"] = "box";
                            o["center"] = vec_json(b.center);
                            o["half_extent"] = vec_json(b.half_extent);
                          },
                          [&](const Slab& s) {
                            o["type"] = "slab";
                            o["normal"] = vec_json(s.normal.vec());
                            o["lo"] = s.lo;
                            if (std::isfinite(s.hi)) o["hi"] = s.hi;
                          }},
               p.shape);
    o["density_scale"] = p.density_scale;
    o["softness"] = p.softness;
    o["albedo"] = rgb_json(p.material.albedo);
    o["tint"] = p.material.tint;
    prims.push_back(std::move(o));
  }
  doc["primitives"] = std::move(prims);
  return doc.dump(2) + "\n";
}

std::string scene_hash(const VolumeScene& scene) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : scene_to_json(scene)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
  return hex;
}

}  // namespace prtvol
