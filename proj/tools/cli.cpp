// Copyright 2026 The prtvol Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli.h"

#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "prtvol/envlight.h"
#include "prtvol/metrics.h"
#include "prtvol/oracle.h"
#include "prtvol/parallel.h"
#include "prtvol/render.h"
#include "prtvol/scene_io.h"
#include "prtvol/transport.h"

namespace prtvol::cli {
namespace {

struct CameraFlags {
  int width = 0;
  int height = 0;
  double fov_deg = 0.0;
  std::vector<double> eye, target, up;

  void add(CLI::App& app) {
    app.add_option("--width", width, "Image width in pixels (0: scene camera)");
    app.add_option("--height", height, "Image height in pixels (0: scene camera)");
    app.add_option("--fov-deg", fov_deg, "Vertical field of view in degrees (0: scene camera)");
    app.add_option("--eye", eye, "Camera position x,y,z (default: scene camera)")
        ->expected(3)->delimiter(',');
    app.add_option("--target", target, "Camera look-at point x,y,z (default: scene camera)")
        ->expected(3)->delimiter(',');
    app.add_option("--up", up, "Camera up vector x,y,z (default: scene camera)")
        ->expected(3)->delimiter(',');
  }

  Camera resolve(const std::optional<Camera>& from_scene) const {
    Camera c = from_scene.value_or(Camera{});
    if (width > 0) c.width = width;
    if (height > 0) c.height = height;
    if (fov_deg > 0.0) c.fov_y = fov_deg * kPi / 180.0;
    if (!eye.empty()) c.eye = {eye[0], eye[1], eye[2]};
    if (!target.empty()) c.target = {target[0], target[1], target[2]};
    if (!up.empty()) c.up = {up[0], up[1], up[2]};
    c.validate();
    return c;
  }
};

struct MarchFlags {
  int primary_steps = 0;
  int secondary_steps = 0;

  void add(CLI::App& app) {
    app.add_option("--primary-steps", primary_steps, "Primary march steps (0: scene value)");
    app.add_option("--secondary-steps", secondary_steps,
                   "Visibility march steps (0: scene value)");
  }

  VolumeScene apply(const VolumeScene& scene) const {
    MarchSettings m = scene.march();
    if (primary_steps > 0) m.primary_steps = primary_steps;
    if (secondary_steps > 0) m.secondary_steps = secondary_steps;
    return scene.with_march(m);
  }
};

struct LightFlags {
  std::string env;
  std::string light;

  void add(CLI::App& app) {
    auto* e = app.add_option("--env", env,
                             "Environment: SH light JSON (*.json) or equirectangular PFM")
                  ->check(CLI::ExistingFile);
    auto* l = app.add_option("--light", light,
                             "Analytic light: constant:r,g,b or lobe:ax,ay,az,sharpness,r,g,b");
    e->excludes(l);
  }

  EnvironmentLight load() const {
    if (!light.empty()) return parse_analytic_light(light);
    if (env.empty()) throw CLI::ValidationError("--env or --light is required");
    if (env.size() >= 5 && env.substr(env.size() - 5) == ".json") {
      return EnvironmentLight::band_limited(read_sh_light(env));
    }
    return load_envmap(env);
  }
};

std::vector<double> parse_box(const std::string& text) {
  std::vector<double> v;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) v.push_back(std::stod(item));
  return v;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
  if (!out) throw Error("write failed for '" + path + "'");
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"prtvol: spherical-harmonics radiance transfer for volumetric density fields"};
  app.name(args.empty() ? "prtvol" : args[0]);
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every command");

  int threads = 0;
  app.add_option("--threads", threads, "Worker threads (0: hardware concurrency)")
      ->check(CLI::NonNegativeNumber);

  // project-env
  auto* project_cmd = app.add_subcommand("project-env", "Project an environment light onto SH");
  std::string project_in;
  std::string project_light;
  std::string project_out;
  int project_degree = kDefaultShDegree;
  double project_exposure = 1.0;
  std::string project_quad = "128x256";
  auto* project_in_opt = project_cmd->add_option("input", project_in, "Equirectangular PFM")
                             ->check(CLI::ExistingFile);
  project_cmd->add_option("--light", project_light, "Analytic light instead of a PFM")
      ->excludes(project_in_opt);
  project_cmd->add_option("--degree", project_degree, "SH degree in [0, 8]")
      ->check(CLI::Range(0, 8));
  project_cmd->add_option("--exposure", project_exposure, "Radiance multiplier");
  project_cmd->add_option("--quadrature", project_quad, "Lat-long quadrature THETAxPHI");
  project_cmd->add_option("-o,--output", project_out, "Output SH light JSON")->required();

  // bake
  auto* bake_cmd = app.add_subcommand("bake", "Bake transfer coefficients into a cache");
  std::string bake_scene;
  std::string bake_out;
  int bake_degree = kDefaultShDegree;
  std::string bake_quad = to_string(kDefaultBakeQuadrature);
  std::size_t bake_points = 0;
  std::uint64_t bake_seed = 7;
  CameraFlags bake_camera;
  MarchFlags bake_march;
  bake_cmd->add_option("scene", bake_scene, "Scene JSON")->required()->check(CLI::ExistingFile);
  bake_cmd->add_option("-o,--output", bake_out, "Cache file (sidecar <file>.json)")->required();
  bake_cmd->add_option("--degree", bake_degree, "SH degree")->check(CLI::Range(0, 8));
  bake_cmd->add_option("--quadrature", bake_quad, "Bake direction grid THETAxPHI");
  bake_cmd->add_option("--points", bake_points,
                       "Random probe points (0: one per camera pixel)");
  bake_cmd->add_option("--seed", bake_seed, "Seed for random probe points");
  bake_camera.add(*bake_cmd);
  bake_march.add(*bake_cmd);

  // render
  auto* render_cmd = app.add_subcommand("render", "Volume-render a scene");
  std::string render_scene;
  std::string render_mode = "lit";
  std::string render_pfm;
  std::string render_srgb;
  std::string render_alpha;
  std::string render_cache;
  double render_exposure = 1.0;
  int render_degree = kDefaultShDegree;
  std::string render_light_quad = "128x256";
  std::string render_bake_quad = to_string(kDefaultBakeQuadrature);
  int render_top_m = 4;
  double render_cache_radius = 0.05;
  LightFlags render_light;
  CameraFlags render_camera;
  MarchFlags render_march;
  render_cmd->add_option("scene", render_scene, "Scene JSON")->required()->check(CLI::ExistingFile);
  render_light.add(*render_cmd);
  render_cmd->add_option("--mode", render_mode,
                         "lit|diffuse|specular|albedo|normal|irradiance|visibility");
  render_cmd->add_option("-o,--output", render_pfm, "Linear HDR output (PFM)");
  render_cmd->add_option("--srgb", render_srgb, "8-bit sRGB output (PPM)");
  render_cmd->add_option("--alpha", render_alpha, "Accumulated-weight mask (8-bit PGM)");
  render_cmd->add_option("--exposure", render_exposure, "Linear multiplier before sRGB encoding");
  render_cmd->add_option("--degree", render_degree, "SH degree for PFM or analytic lights")
      ->check(CLI::Range(0, 8));
  render_cmd->add_option("--light-quadrature", render_light_quad, "Light projection grid");
  render_cmd->add_option("--bake-quadrature", render_bake_quad, "On-the-fly bake grid");
  render_cmd->add_option("--top-m", render_top_m, "Shaded samples per ray")
      ->check(CLI::PositiveNumber);
  render_cmd->add_option("--cache", render_cache, "Baked transfer cache")
      ->check(CLI::ExistingFile);
  render_cmd->add_option("--cache-radius", render_cache_radius, "Cache lookup radius");
  render_camera.add(*render_cmd);
  render_march.add(*render_cmd);

  // validate
  auto* validate_cmd = app.add_subcommand("validate", "Compare SH shading against Monte Carlo");
  std::string validate_scene;
  std::string validate_out;
  std::size_t validate_points = 500;
  std::uint64_t validate_seed = 7;
  std::size_t validate_mc = 100000;
  int validate_degree = kDefaultShDegree;
  std::string validate_bake_quad = to_string(kDefaultBakeQuadrature);
  std::string validate_grid = "32x64";
  bool validate_timing = false;
  LightFlags validate_light;
  CameraFlags validate_camera;
  MarchFlags validate_march;
  validate_cmd->add_option("scene", validate_scene, "Scene JSON")
      ->required()
      ->check(CLI::ExistingFile);
  validate_light.add(*validate_cmd);
  validate_cmd->add_option("--points", validate_points, "Probe points")
      ->check(CLI::PositiveNumber);
  validate_cmd->add_option("--seed", validate_seed, "Base seed");
  validate_cmd->add_option("--mc-samples", validate_mc, "Monte Carlo samples per point")
      ->check(CLI::PositiveNumber);
  validate_cmd->add_option("--degree", validate_degree, "SH degree")->check(CLI::Range(0, 8));
  validate_cmd->add_option("--bake-quadrature", validate_bake_quad, "Bake direction grid");
  validate_cmd->add_option("--visibility-grid", validate_grid, "Visibility-map grid");
  validate_cmd->add_option("-o,--output", validate_out,
                           "Report JSON path (table then goes to stdout; without -o the JSON "
                           "goes to stdout and the table to stderr)");
  validate_cmd->add_flag("--timing", validate_timing, "Include runtime in the JSON report");
  validate_camera.add(*validate_cmd);
  validate_march.add(*validate_cmd);

  // metrics
  auto* metrics_cmd = app.add_subcommand("metrics", "Normal-map cosine similarity and Laplacian L1");
  std::string metrics_a;
  std::string metrics_b;
  std::string metrics_mask;
  double metrics_sigma = 1.0;
  bool metrics_mask_normalized = false;
  std::string metrics_box;
  int metrics_size = 256;
  metrics_cmd->add_option("normals", metrics_a, "Normal map PFM")->required()->check(CLI::ExistingFile);
  metrics_cmd->add_option("reference", metrics_b, "Reference normal map PFM")
      ->required()
      ->check(CLI::ExistingFile);
  metrics_cmd->add_option("--mask", metrics_mask, "Grayscale PFM mask")->check(CLI::ExistingFile);
  metrics_cmd->add_option("--blur-sigma", metrics_sigma, "Gaussian sigma of the Laplacian (px)")
      ->check(CLI::PositiveNumber);
  metrics_cmd->add_flag("--mask-normalized", metrics_mask_normalized,
                        "Divide by mask sum instead of pixel count");
  metrics_cmd->add_option("--box", metrics_box,
                          "Crop box x,y,w,h; the crop is padded square and resized");
  metrics_cmd->add_option("--size", metrics_size, "Side length after --box resizing")
      ->check(CLI::PositiveNumber);

  std::vector<std::string> argv(args.begin() + (args.empty() ? 0 : 1), args.end());
  for (std::size_t i = 0; i < argv.size(); ++i) {
    const std::string& a = argv[i];
    if (a.empty() || a[0] == '-' || (i > 0 && argv[i - 1] == "--threads")) continue;
    const auto subs = app.get_subcommands([&](const CLI::App* s) { return s->check_name(a); });
    if (subs.empty()) {
      err << app.get_name() << ": unknown command '" << a
          << "' (expected project-env, bake, render, validate, metrics)\n";
      return kExitUsage;
    }
    break;
  }
  std::reverse(argv.begin(), argv.end());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return kExitOk;
    err << app.get_name() << ": " << e.what() << " (see --help)\n";
    return kExitUsage;
  }

  try {
    if (project_cmd->parsed()) {
      if (project_in.empty() == project_light.empty()) {
        throw CLI::ValidationError("project-env needs exactly one of <input> or --light");
      }
      const EnvironmentLight env =
          project_light.empty() ? load_envmap(project_in) : parse_analytic_light(project_light);
      write_sh_light(project_out, project_to_sh(env, project_degree,
                                                parse_quadrature(project_quad), project_exposure));
      return kExitOk;
    }

    if (bake_cmd->parsed()) {
      const SceneFile file = load_scene(bake_scene);
      const VolumeScene scene = bake_march.apply(file.scene);
      const Camera camera = bake_camera.resolve(file.camera);
      std::vector<SurfacePoint> points;
      if (bake_points > 0) {
        for (const ProbePoint& p : probe_surface_points(scene, camera, bake_points, bake_seed)) {
          points.push_back(p.point);
        }
      } else {
        const std::size_t n = static_cast<std::size_t>(camera.width) * camera.height;
        std::vector<std::optional<SurfacePoint>> found(n);
        parallel_for(n, threads, [&](std::size_t i) {
          const Ray ray = camera.generate_ray(static_cast<double>(i % camera.width),
                                              static_cast<double>(i / camera.width));
          auto p = extract_surface_point(scene, ray.origin, ray.dir);
          if (p && p->valid) found[i] = *p;
        });
        for (auto& p : found) {
          if (p) points.push_back(*p);
        }
      }
      const SphericalQuadrature quad(parse_quadrature(bake_quad), bake_degree);
      std::vector<std::optional<TransferSample>> baked(points.size());
      parallel_for(points.size(), threads,
                   [&](std::size_t i) { baked[i] = bake_transfer(scene, points[i], quad); });
      TransferCache cache(bake_degree, scene_hash(scene));
      for (auto& s : baked) cache.add(std::move(*s));
      cache.write(bake_out);
      out << "baked " << cache.size() << " points -> " << bake_out << "\n";
      return kExitOk;
    }

    if (render_cmd->parsed()) {
      if (render_pfm.empty() && render_srgb.empty() && render_alpha.empty()) {
        throw CLI::ValidationError("render needs at least one of -o, --srgb, --alpha");
      }
      const RenderMode mode = parse_render_mode(render_mode);
      const SceneFile file = load_scene(render_scene);
      const VolumeScene scene = render_march.apply(file.scene);
      const Camera camera = render_camera.resolve(file.camera);
      const EnvironmentLight env = render_light.load();
      const int degree = env.sh_coefficients() ? env.sh_coefficients()->degree() : render_degree;
      const ShLight light = project_to_sh(env, degree, parse_quadrature(render_light_quad));

      std::optional<TransferCache> cache;
      RenderOptions options;
      options.top_m = render_top_m;
      options.bake_quadrature = parse_quadrature(render_bake_quad);
      options.cache_radius = render_cache_radius;
      options.threads = threads;
      if (!render_cache.empty()) {
        cache = TransferCache::read(render_cache, scene);
        if (cache->scene_hash() != scene_hash(scene)) {
          throw Error("cache '" + render_cache + "' was baked for a different scene");
        }
        cache->build_index(render_cache_radius);
        options.cache = &*cache;
      }
      const LinearImage img = render_image(scene, light, camera, mode, options);
      if (!render_pfm.empty()) write_pfm(render_pfm, img);
      if (!render_srgb.empty()) write_srgb_ppm(render_srgb, img, render_exposure);
      if (!render_alpha.empty()) write_alpha_pgm(render_alpha, img);
      return kExitOk;
    }

    if (validate_cmd->parsed()) {
      const SceneFile file = load_scene(validate_scene);
      const VolumeScene scene = validate_march.apply(file.scene);
      const Camera camera = validate_camera.resolve(file.camera);
      const EnvironmentLight env = validate_light.load();
      ValidationConfig config;
      config.degree = validate_degree;
      config.bake_quadrature = parse_quadrature(validate_bake_quad);
      config.visibility_grid = parse_quadrature(validate_grid);
      config.mc_samples = validate_mc;
      config.seed = validate_seed;
      config.threads = threads;
      const auto points = probe_surface_points(scene, camera, validate_points, validate_seed);
      const ValidationReport report = compare_prt_vs_mc(scene, env, points, config);
      const std::string json = report_to_json(report, validate_timing);
      if (validate_out.empty()) {
        out << json;
        err << report_table(report);
      } else {
        write_text(validate_out, json);
        out << report_table(report);
      }
      return kExitOk;
    }

    if (metrics_cmd->parsed()) {
      NormalMap a = load_normal_map(metrics_a, metrics_mask);
      NormalMap b = load_normal_map(metrics_b);
      if (!metrics_box.empty()) {
        const std::vector<double> v = parse_box(metrics_box);
        if (v.size() != 4) throw CLI::ValidationError("--box must be x,y,w,h");
        const PixelBox box{static_cast<int>(v[0]), static_cast<int>(v[1]), static_cast<int>(v[2]),
                           static_cast<int>(v[3])};
        a = crop_pad_resize(a, box, metrics_size);
        b = crop_pad_resize(b, box, metrics_size);
      }
      MetricOptions options;
      options.blur_sigma = metrics_sigma;
      options.normalization = metrics_mask_normalized ? MetricNormalization::mask_sum
                                                      : MetricNormalization::pixel_count;
      nlohmann::ordered_json doc;
      doc["cosine_similarity"] = normal_cosine_similarity(a, b, options);
      doc["laplacian_l1"] = laplacian_l1(a, b, options);
      doc["blur_sigma"] = metrics_sigma;
      doc["normalization"] = metrics_mask_normalized ? "mask_sum" : "pixel_count";
      doc["width"] = a.width;
      doc["height"] = a.height;
      out << doc.dump(2) << "\n";
      return kExitOk;
    }
  } catch (const CLI::ValidationError& e) {
    err << app.get_name() << ": " << e.what() << " (see --help)\n";
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    err << app.get_name() << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << app.get_name() << ": " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace prtvol::cli
