// Copyright 2026 The Voxline Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <random>

#include "support/oracles.hpp"
#include "voxline/error.hpp"
#include "voxline/raytracer.hpp"

namespace voxline {
namespace {

// Scene in a unit grid, built stage by stage.
struct UnitScene {
  GridDesc grid;
  SegmentTable segments;
  OccupancyPyramid pyramid;
  ABuffer abuffer;
  simd::CapsuleBatch capsules;
  BitPyramid occupied;
  ShadingVolume shading;

  Scene scene() const {
    Scene s;
    s.grid = &grid;
    s.segments = &segments;
    s.abuffer = &abuffer;
    s.fragment_capsules = &capsules;
    s.occupied = &occupied;
    s.shading = &shading;
    return s;
  }
};

UnitScene build_unit_scene(const LineSet& lines, int res, bool lit = true) {
  UnitScene u;
  u.grid = unit_grid(res);
  u.segments = build_segments(lines, compute_clip_normals(lines), u.grid);
  u.pyramid = voxelize(u.segments, u.grid, {});
  u.abuffer = build_vsv(u.segments, u.grid, u.pyramid, {});
  u.abuffer.canonicalize();
  u.capsules = gather_fragment_capsules(u.abuffer, u.segments);
  u.occupied = nonempty_voxels(u.abuffer, res);
  if (lit) {
    u.shading = compute_shading(u.pyramid, u.occupied, u.grid, {-0.3, -1, -0.5});
  } else {
    u.shading = {Volume<float>(res, 1.0f), Volume<float>(res, 1.0f), {0, 0, -1}};
  }
  return u;
}

LineSet polyline(std::initializer_list<Vec3f> pts, float radius) {
  LineSet ls;
  ls.radius = radius;
  ls.add_polyline(std::vector<Vec3f>(pts));
  return ls;
}

RenderSettings flat_settings() {
  RenderSettings s;
  s.ambient = 1.0;
  s.diffuse = 0.0;
  return s;
}

TEST(RayCapsule, SphereCapAndClipDisk) {
  CapsuleD c{{0, 0, 0}, {2, 0, 0}, 0.5, {1, 0, 0}, {1, 0, 0}, false, false};
  auto h = ray_capsule({-1, 0, 0}, {1, 0, 0}, c);
  ASSERT_TRUE(h);
  EXPECT_DOUBLE_EQ(h->t, 0.5);
  EXPECT_EQ(h->part, HitPart::tube);
  c.clip0 = true;
  h = ray_capsule({-1, 0, 0}, {1, 0, 0}, c);
  ASSERT_TRUE(h);
  EXPECT_DOUBLE_EQ(h->t, 1.0);
  EXPECT_EQ(h->part, HitPart::plane0);
}

TEST(RayCapsule, PerpendicularBisectorHitsCylinder) {
  const CapsuleD c{{0, 0, 0}, {4, 0, 0}, 0.75, {1, 0, 0}, {1, 0, 0}, true, true};
  const auto h = ray_capsule({2, 5, 0}, {0, -1, 0}, c);
  ASSERT_TRUE(h);
  EXPECT_NEAR(h->t, 5.0 - 0.75, 1e-12);
  EXPECT_FALSE(ray_capsule({2, 5, 0}, {0, 1, 0}, c));
}

TEST(RayCapsule, HitsLieOnTheSurface) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-3.0, 3.0), r(0.1, 1.5);
  std::normal_distribution<double> n(0.0, 1.0);
  int hits = 0;
  for (int trial = 0; trial < 20000; ++trial) {
    CapsuleD c{{u(rng), u(rng), u(rng)}, {u(rng), u(rng), u(rng)}, r(rng), {}, {}, trial % 2 == 0, trial % 3 == 0};
    const Vec3d d = normalize(c.v1 - c.v0);
    c.n0 = normalize(d + Vec3d(n(rng), n(rng), n(rng)) * 0.3);
    c.n1 = normalize(d + Vec3d(n(rng), n(rng), n(rng)) * 0.3);
    const Vec3d o = Vec3d(u(rng), u(rng), u(rng)) * 3.0;
    const Vec3d aim = c.v0 + (c.v1 - c.v0) * (0.5 + u(rng) / 6.0) + Vec3d(n(rng), n(rng), n(rng)) * c.r;
    const Vec3d dir = normalize(aim - o);
    const auto h = ray_capsule(o, dir, c);
    if (!h) continue;
    ++hits;
    ASSERT_LE(std::abs(clipped_capsule_sdf(o + dir * h->t, c)), 1e-4) << "trial " << trial;
    ASSERT_GE(h->t, 0.0);
  }
  EXPECT_GT(hits, 1000);
}

TEST(FirstVoxel, SingleAndEmpty) {
  Volume<uint8_t> base(16, 0);
  const BitPyramid empty = build_bit_pyramid(base);
  const Ray ray{{5.5, 6.5, -3.0}, {0, 0, 1}};
  EXPECT_FALSE(first_voxel(empty, ray, 0.0));
  base.at(5, 6, 11) = 1;
  const auto v = first_voxel(build_bit_pyramid(base), ray, 0.0);
  ASSERT_TRUE(v);
  EXPECT_EQ(v->voxel, Vec3i(5, 6, 11));
  EXPECT_DOUBLE_EQ(v->t_enter, 14.0);
  EXPECT_DOUBLE_EQ(v->t_exit, 15.0);
  EXPECT_FALSE(first_voxel(build_bit_pyramid(base), ray, 15.0));
}

TEST(FirstVoxel, MatchesNaiveScan) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int scene = 0; scene < 4; ++scene) {
    Volume<uint8_t> base(64, 0);
    const double density = scene == 0 ? 1e-4 : 1e-3 * scene;
    for (auto& b : base.values()) b = u(rng) < density;
    const BitPyramid bits = build_bit_pyramid(base);
    for (int i = 0; i < 250; ++i) {
      const Vec3d dir = normalize(Vec3d(n(rng), n(rng), n(rng)));
      const Vec3d target(u(rng) * 64, u(rng) * 64, u(rng) * 64);
      const Ray ray{target - dir * 100.0, dir};
      const double t_min = i % 3 == 0 ? 100.0 : 0.0;
      const auto got = first_voxel(bits, ray, t_min);
      const auto want = testing::naive_first_voxel(bits, ray, t_min);
      ASSERT_EQ(got.has_value(), want.has_value()) << "ray " << i;
      if (!got) continue;
      ASSERT_EQ(got->t_enter, want->t_enter);
      ASSERT_TRUE(base.at(got->voxel.x, got->voxel.y, got->voxel.z));
      if (got->voxel != want->voxel) {
        // Only a tie on entry may pick a different voxel.
        ASSERT_EQ(got->t_enter, want->t_enter);
      }
    }
  }
}

TEST(TraceOpaque, CylinderHitAtAnalyticDepth) {
  const UnitScene u = build_unit_scene(polyline({{4, 8.25f, 8.25f}, {12, 8.25f, 8.25f}}, 1.5f), 16);
  const Ray ray{{8.1, 8.25, -10.0}, {0, 0, 1}};
  const auto hit = trace_opaque(u.scene(), ray, {});
  ASSERT_TRUE(hit);
  EXPECT_EQ(hit->segment, 0u);
  EXPECT_NEAR(hit->t, 18.25 - 1.5, 1e-9);
  EXPECT_FALSE(trace_opaque(u.scene(), {{8.1, 8.25, 30.0}, {0, 0, 1}}, {}));
  EXPECT_FALSE(trace_opaque(u.scene(), {{8.1, 8.25, -10.0}, {0, 0, -1}}, {}));
}

TEST(TraceOpaque, FrameMatchesBruteForce) {
  for (uint64_t seed : {1u, 2u, 3u}) {
    PipelineConfig cfg;
    cfg.resolution = 32;
    cfg.width = cfg.height = 48;
    cfg.radius = 0.8;
    const auto r = testing::render_lines(testing::random_lines(seed, 10, 15, 1.0f, 10.0f, 0.3f), cfg);
    const auto brute = testing::brute_hit_ids(r.geometry.segments, r.geometry.grid, r.camera);
    EXPECT_EQ(r.frame.image.hit_id, brute) << "seed " << seed;
    const Scene scene = r.state.scene(r.geometry);
    for (int y = 0; y < cfg.height; y += 5) {
      for (int x = 0; x < cfg.width; x += 5) {
        const Ray ray = voxel_ray(r.geometry.grid, r.camera.pixel_ray(x, y));
        const auto hit = trace_opaque(scene, ray, cfg.render_settings());
        const auto b = testing::brute_nearest(r.geometry.segments, ray);
        ASSERT_EQ(hit.has_value(), b.has_value());
        if (hit) {
          EXPECT_LE(std::abs(hit->t - b->second), 1e-4);
        }
      }
    }
  }
}

TEST(TraceTransparent, OpaqueAlphaMatchesOpaqueColour) {
  PipelineConfig cfg;
  cfg.resolution = 32;
  cfg.width = cfg.height = 40;
  const auto r = testing::render_lines(testing::random_lines(4, 10, 15, 1.0f, 10.0f, 0.3f), cfg);
  const Scene scene = r.state.scene(r.geometry);
  RenderSettings opaque = cfg.render_settings();
  RenderSettings trans = opaque;
  trans.mode = RenderMode::transparent;
  trans.k = 8;
  const Image a = render(scene, r.camera, opaque);
  const Image b = render(scene, r.camera, trans);
  EXPECT_EQ(a.rgb, b.rgb);
}

TEST(TraceTransparent, TwoLayersOver) {
  // Two parallel tubes along x, one behind the other along the ray.
  LineSet ls = polyline({{3, 8.5f, 5.5f}, {13, 8.5f, 5.5f}}, 1.0f);
  const std::vector<Vec3f> back{{4, 6, 10.5f}, {9, 11, 10.5f}};
  ls.add_polyline(back);
  const UnitScene u = build_unit_scene(ls, 16, false);
  RenderSettings s = flat_settings();
  s.mode = RenderMode::transparent;
  s.alpha = 0.5;
  const Ray ray{{6.5, 8.5, -20.0}, {0, 0, 1}};
  const Vec3d c1 = tangent_color({1, 0, 0});
  const Vec3d c2 = tangent_color({5, 5, 0});
  const Vec3d want = c1 * 0.5 + c2 * 0.25 + s.background * 0.25;
  const Vec3d got = trace_transparent(u.scene(), ray, s);
  EXPECT_NEAR(got.x, want.x, 1e-12);
  EXPECT_NEAR(got.y, want.y, 1e-12);
  EXPECT_NEAR(got.z, want.z, 1e-12);
}

TEST(TraceTransparent, IndependentOfSlotCountAndMatchesExactSort) {
  PipelineConfig cfg;
  cfg.resolution = 32;
  cfg.width = cfg.height = 40;
  cfg.radius = 1.0;
  const auto r = testing::render_lines(testing::random_lines(5, 12, 15, 1.0f, 8.0f, 0.3f), cfg);
  const Scene scene = r.state.scene(r.geometry);
  RenderSettings s = cfg.render_settings();
  s.mode = RenderMode::transparent;
  s.alpha = 0.2;
  s.early_termination = false;
  uint64_t prev_tests = 0;
  for (int k : {32, 8, 1}) {
    s.k = k;
    TraceStats st;
    for (int y = 0; y < cfg.height; y += 3) {
      for (int x = 0; x < cfg.width; x += 3) {
        const Ray ray = voxel_ray(r.geometry.grid, r.camera.pixel_ray(x, y));
        const Vec3d got = trace_transparent(scene, ray, s, &st);
        const Vec3d want = testing::brute_composite(scene, ray, s);
        ASSERT_NEAR(got.x, want.x, 2.0 / 255);
        ASSERT_NEAR(got.y, want.y, 2.0 / 255);
        ASSERT_NEAR(got.z, want.z, 2.0 / 255);
      }
    }
    EXPECT_GE(st.ray_capsule_tests, prev_tests);
    prev_tests = st.ray_capsule_tests;
  }
}

TEST(TraceTransparent, EarlyTerminationSavesWorkWithinTolerance) {
  PipelineConfig cfg;
  cfg.resolution = 32;
  cfg.width = cfg.height = 40;
  cfg.radius = 1.5;
  const auto r = testing::render_lines(testing::random_lines(6, 40, 15, 1.0f, 8.0f, 0.3f), cfg);
  const Scene scene = r.state.scene(r.geometry);
  RenderSettings s = cfg.render_settings();
  s.mode = RenderMode::transparent;
  s.alpha = 0.8;
  TraceStats on, off;
  const Image a = render(scene, r.camera, s, &on);
  s.early_termination = false;
  const Image b = render(scene, r.camera, s, &off);
  EXPECT_LT(on.ray_capsule_tests, off.ray_capsule_tests);
  for (size_t i = 0; i < a.rgb.size(); ++i) {
    for (int c = 0; c < 3; ++c) ASSERT_NEAR(a.rgb[i][c], b.rgb[i][c], 1e-3);
  }
}

TEST(PackedHit, DepthOrdersBeforeSlot) {
  const PackedHit near = PackedHit::encode(1.1, 1.0, 2.0, 9);
  const PackedHit far = PackedHit::encode(1.9, 1.0, 2.0, 0);
  EXPECT_LT(near, far);
  EXPECT_EQ(near.slot(), 9u);
  EXPECT_EQ(PackedHit::encode(1.0, 1.0, 2.0, 3).depth(), 0u);
  EXPECT_EQ(PackedHit::encode(2.0, 1.0, 2.0, 3).depth(), 65535u);
  EXPECT_LT(PackedHit::encode(1.5, 1.0, 2.0, 1), PackedHit::encode(1.5, 1.0, 2.0, 2));
}

TEST(TangentColor, Examples) {
  EXPECT_EQ(tangent_color({1, 0, 0}), Vec3d(1, 0, 0));
  EXPECT_EQ(tangent_color({0, 0, -2}), Vec3d(0, 0, 1));
  const Vec3d c = tangent_color({1, 1, 1});
  for (int a = 0; a < 3; ++a) EXPECT_NEAR(c[a], 0.5774, 1e-4);
}

TEST(Render, EmptySceneIsBackground) {
  const UnitScene u = build_unit_scene(LineSet{}, 8);
  Camera cam = orbit_camera({4, 4, 4}, 20, 0.3, 0.2, 0.8, 16, 12);
  for (auto mode : {RenderMode::opaque, RenderMode::transparent}) {
    RenderSettings s;
    s.mode = mode;
    s.alpha = 0.5;
    const Image img = render(u.scene(), cam, s);
    for (const auto& p : img.rgb) EXPECT_EQ(p, Vec3f(s.background));
    for (int32_t id : img.hit_id) EXPECT_EQ(id, -1);
  }
}

TEST(Render, RejectsBadSettings) {
  const UnitScene u = build_unit_scene(LineSet{}, 8);
  RenderSettings s;
  s.k = 0;
  EXPECT_THROW(render(u.scene(), Camera{}, s), ParameterError);
  s.k = 8;
  s.alpha = 0.0;
  EXPECT_THROW(render(u.scene(), Camera{}, s), ParameterError);
}

TEST(Image, PpmLayout) {
  Image img(3, 2);
  img.rgb[0] = {1, 0, 0};
  const auto ppm = img.to_ppm();
  const std::string head(reinterpret_cast<const char*>(ppm.data()), 11);
  EXPECT_EQ(head, "P6\n3 2\n255\n");
  EXPECT_EQ(ppm.size(), 11u + 18u);
  EXPECT_EQ(static_cast<uint8_t>(ppm[11]), 255);
  EXPECT_EQ(linear_to_srgb8(0.5f), 188);
}

}  // namespace
}  // namespace voxline
