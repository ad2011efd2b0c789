// Copyright 2026 The prtvol Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "cli.h"
#include "json.hpp"
#include "prtvol/envlight.h"
#include "prtvol/image.h"
#include "prtvol/scene_io.h"
#include "prtvol/transport.h"
#include "test_util.h"

namespace prtvol {
namespace {

using testing::read_file;
using testing::TempDir;
using testing::write_file;

const std::string kScenes = PRTVOL_SCENE_DIR;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "prtvol");
  std::ostringstream out, err;
  const int code = cli::dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

TEST(Cli, HelpAndUsageErrors) {
  const Result help = run({"--help"});
  EXPECT_EQ(help.code, cli::kExitOk);
  EXPECT_NE(help.out.find("project-env"), std::string::npos);
  const Result render_help = run({"render", "--help"});
  EXPECT_EQ(render_help.code, cli::kExitOk);
  EXPECT_NE(render_help.out.find("--top-m"), std::string::npos);
  EXPECT_NE(render_help.out.find("lit"), std::string::npos);

  EXPECT_EQ(run({}).code, cli::kExitUsage);
  const Result unknown = run({"frobnicate"});
  EXPECT_EQ(unknown.code, cli::kExitUsage);
  EXPECT_NE(unknown.err.find("frobnicate"), std::string::npos);
  EXPECT_EQ(run({"render", kScenes + "/missing.json", "-o", "x.pfm"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"render", kScenes + "/sphere.json", "--light", "constant:1,1,1", "--bogus"}).code,
            cli::kExitUsage);
  EXPECT_EQ(run({"render", kScenes + "/sphere.json", "--light", "constant:1,1,1"}).code,
            cli::kExitUsage);
  EXPECT_EQ(run({"render", kScenes + "/sphere.json", "--light", "constant:1,1,1", "--mode", "nope",
                 "-o", "x.pfm"})
                .code,
            cli::kExitUsage);
}

TEST(Cli, RuntimeFailureExitCode) {
  TempDir dir;
  write_file(dir.file("bad.json"), "{\"primitives\": [{\"type\": \"torus\"}]}");
  const Result r = run({"render", dir.file("bad.json"), "--light", "constant:1,1,1", "-o",
                        dir.file("x.pfm")});
  EXPECT_EQ(r.code, cli::kExitRuntime);
  EXPECT_NE(r.err.find("bad.json"), std::string::npos);
}

TEST(Cli, ProjectEnvFromAnalyticLightAndPfm) {
  TempDir dir;
  ASSERT_EQ(run({"project-env", "--light", "constant:1,2,3", "--degree", "2", "-o",
                 dir.file("c.json")})
                .code,
            0);
  const ShLight c = read_sh_light(dir.file("c.json"));
  EXPECT_EQ(c.degree(), 2);
  EXPECT_NEAR(c.channels[1][0], 2.0 * std::sqrt(4.0 * kPi), 1e-3);

  LinearImage env(16, 8);
  for (auto& p : env.pixels) p = Rgb(0.5);
  write_pfm(dir.file("env.pfm"), env);
  ASSERT_EQ(run({"project-env", dir.file("env.pfm"), "--exposure", "2", "-o", dir.file("e.json")}).code, 0);
  EXPECT_NEAR(read_sh_light(dir.file("e.json")).channels[0][0], std::sqrt(4.0 * kPi), 1e-3);

  EXPECT_EQ(run({"project-env", "-o", dir.file("n.json")}).code, cli::kExitUsage);
}

TEST(Cli, BakeRenderWithCache) {
  TempDir dir;
  const std::string scene = kScenes + "/sphere.json";
  const Result bake = run({"bake", scene, "--width", "8", "--height", "8", "-o", dir.file("t.bin")});
  ASSERT_EQ(bake.code, 0) << bake.err;
  EXPECT_TRUE(std::filesystem::exists(dir.file("t.bin.json")));
  const TransferCache cache = TransferCache::read(dir.file("t.bin"), load_scene(scene).scene);
  EXPECT_GT(cache.size(), 0u);

  const Result r = run({"render", scene, "--light", "lobe:0,1,1,3,1,1,1", "--width", "8", "--height",
                        "8", "--cache", dir.file("t.bin"), "-o", dir.file("r.pfm"), "--srgb",
                        dir.file("r.ppm"), "--alpha", dir.file("r.pgm")});
  ASSERT_EQ(r.code, 0) << r.err;
  const PfmImage pfm = read_pfm(dir.file("r.pfm"));
  EXPECT_EQ(pfm.width, 8);
  EXPECT_EQ(pfm.channels, 3);
  EXPECT_EQ(read_file(dir.file("r.ppm")).rfind("P6\n8 8\n255\n", 0), 0u);
  EXPECT_EQ(read_file(dir.file("r.pgm")).rfind("P5\n8 8\n255\n", 0), 0u);

  const Result wrong = run({"render", kScenes + "/wall.json", "--light", "constant:1,1,1",
                            "--cache", dir.file("t.bin"), "-o", dir.file("w.pfm")});
  EXPECT_EQ(wrong.code, cli::kExitRuntime);
}

TEST(Cli, ValidateJson) {
  TempDir dir;
  const Result r = run({"validate", kScenes + "/sphere.json", "--light", "constant:1,1,1", "--points",
                        "3", "--mc-samples", "500", "-o", dir.file("v.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(read_file(dir.file("v.json")));
  EXPECT_FALSE(doc.contains("runtime_seconds"));
  EXPECT_FALSE(r.out.empty());
  const Result timed = run({"validate", kScenes + "/sphere.json", "--light", "constant:1,1,1",
                            "--points", "2", "--mc-samples", "200", "--timing"});
  ASSERT_EQ(timed.code, 0);
  EXPECT_NE(timed.out.find("runtime"), std::string::npos);
}

TEST(Cli, MetricsOnNormalMaps) {
  TempDir dir;
  LinearImage n(12, 10);
  for (auto& p : n.pixels) p = Rgb(0.0, 0.0, 1.0);
  write_pfm(dir.file("a.pfm"), n);
  const Result r = run({"metrics", dir.file("a.pfm"), dir.file("a.pfm")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_NEAR(doc["cosine_similarity"].get<double>(), 1.0, 1e-12);
  EXPECT_EQ(doc["laplacian_l1"].get<double>(), 0.0);

  const Result boxed = run({"metrics", dir.file("a.pfm"), dir.file("a.pfm"), "--box", "0,0,12,10",
                            "--size", "16", "--mask-normalized"});
  ASSERT_EQ(boxed.code, 0) << boxed.err;
  const auto bdoc = nlohmann::json::parse(boxed.out);
  EXPECT_EQ(bdoc["width"].get<int>(), 16);
  EXPECT_NEAR(bdoc["cosine_similarity"].get<double>(), 1.0, 1e-9);
  EXPECT_EQ(run({"metrics", dir.file("a.pfm"), dir.file("a.pfm"), "--box", "1,2"}).code,
            cli::kExitUsage);
}

}  // namespace
}  // namespace prtvol
