// Copyright 2026 The prtvol Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "prtvol/envlight.h"
#include "prtvol/render.h"
#include "prtvol/rng.h"
#include "prtvol/scene_io.h"
#include "prtvol/sh.h"
#include "prtvol/transport.h"

namespace {

using namespace prtvol;

const std::string kScenes = PRTVOL_SCENE_DIR;

void BM_EvalBasis(benchmark::State& state) {
  const int degree = static_cast<int>(state.range(0));
  std::vector<double> out(static_cast<std::size_t>(sh_count(degree)));
  Rng rng(1);
  const Direction dir = rng.uniform_sphere();
  for (auto _ : state) {
    eval_basis(dir, degree, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_EvalBasis)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void BM_ProjectEnvironment(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const EnvironmentLight light = EnvironmentLight::lobe(Direction(0.3, 0.5, 1.0), 8.0, Rgb(1.0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(project_to_sh(light, 4, {n, 2 * n}));
  }
}
BENCHMARK(BM_ProjectEnvironment)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_BakeTransfer(benchmark::State& state) {
  const SceneFile file = load_scene(kScenes + "/sphere_blocker.json");
  const auto p = extract_surface_point(file.scene, {0.0, 0.0, 5.0}, Direction(-0.05, 0.0, -1.0));
  const SphericalQuadrature quad(kDefaultBakeQuadrature, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bake_transfer(file.scene, p.value(), quad));
  }
}
BENCHMARK(BM_BakeTransfer)->Unit(benchmark::kMillisecond);

void BM_RenderLit(benchmark::State& state) {
  const SceneFile file = load_scene(kScenes + "/sphere.json");
  Camera camera = file.camera.value();
  camera.width = camera.height = static_cast<int>(state.range(0));
  const ShLight light = project_to_sh(EnvironmentLight::constant(Rgb(1.0)));
  RenderOptions options;
  options.threads = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(render_image(file.scene, light, camera, RenderMode::lit, options));
  }
}
BENCHMARK(BM_RenderLit)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace
