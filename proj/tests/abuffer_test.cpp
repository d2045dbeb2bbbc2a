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
#include "voxline/abuffer.hpp"
#include "voxline/error.hpp"

namespace voxline {
namespace {

struct Built {
  LineSet lines;
  GridDesc grid;
  SegmentTable segments;
  OccupancyPyramid pyramid;
  VoxelizeStats stats;
};

Built build(LineSet lines, int res, VoxelizeOptions options = {}) {
  Built b;
  b.lines = std::move(lines);
  b.grid = fit_grid(b.lines, res);
  b.segments = build_segments(b.lines, compute_clip_normals(b.lines), b.grid);
  b.pyramid = voxelize(b.segments, b.grid, options, &b.stats);
  return b;
}

Built build_unit(LineSet lines, int res) {
  Built b;
  b.lines = std::move(lines);
  b.grid = unit_grid(res);
  b.segments = build_segments(b.lines, compute_clip_normals(b.lines), b.grid);
  b.pyramid = voxelize(b.segments, b.grid, {}, &b.stats);
  return b;
}

TEST(Morton, Convention) {
  EXPECT_EQ(morton_encode({0, 0, 0}), 0u);
  EXPECT_EQ(morton_encode({1, 0, 0}), 1u);
  EXPECT_EQ(morton_encode({0, 1, 0}), 2u);
  EXPECT_EQ(morton_encode({0, 0, 1}), 4u);
  EXPECT_EQ(morton_encode({1023, 1023, 1023}), (1u << 30) - 1);
  EXPECT_THROW(morton_encode({1024, 0, 0}), ParameterError);
}

TEST(Morton, RoundTripOver16Cubed) {
  for (int z = 0; z < 16; ++z)
    for (int y = 0; y < 16; ++y)
      for (int x = 0; x < 16; ++x) ASSERT_EQ(morton_decode(morton_encode({x, y, z})), Vec3i(x, y, z));
}

TEST(ScanOffsets, Examples) {
  const std::vector<uint32_t> counts{3, 0, 2, 5};
  const OffsetTable t = scan_offsets(counts);
  EXPECT_EQ(t.offsets, (std::vector<uint32_t>{0, 3, 3, 5}));
  EXPECT_EQ(t.total, 10u);
  EXPECT_THROW(scan_offsets(counts, 9), ParameterError);
}

TEST(ScanOffsets, AllCulledGivesZero) {
  const Built b = build(generate(GeneratorParams{}, 1), 16);
  CullingPyramid none = build_bit_pyramid(Volume<uint8_t>(16, 0));
  const OffsetTable t = scan_offsets(b.pyramid, &none);
  EXPECT_EQ(t.total, 0u);
  for (uint32_t o : t.offsets) EXPECT_EQ(o, 0u);
}

TEST(ScanOffsets, RandomCountsMatchSequentialSum) {
  std::mt19937_64 rng(1);
  std::vector<uint32_t> counts(5000);
  for (auto& c : counts) c = rng() % 9;
  const OffsetTable t = scan_offsets(counts);
  uint64_t run = 0;
  for (size_t i = 0; i < counts.size(); ++i) {
    ASSERT_EQ(t.offsets[i], run);
    run += counts[i];
  }
  EXPECT_EQ(t.total, run);
}

TEST(BuildVsv, OneSegmentFourVoxels) {
  LineSet ls;
  ls.radius = 0.2f;
  const std::vector<Vec3f> pts{{0.5f, 2.5f, 2.5f}, {3.5f, 2.5f, 2.5f}};
  ls.add_polyline(pts);
  const Built b = build_unit(ls, 8);
  VoxelizeOptions o;
  o.r_min = 0.2f;
  const OccupancyPyramid p = voxelize(b.segments, b.grid, o);
  ABufferStats st;
  const ABuffer a = build_vsv(b.segments, b.grid, p, o, &st);
  EXPECT_EQ(a.total(), 4u);
  for (int x = 0; x < 4; ++x) {
    const auto list = a.voxel(p.base.index(x, 2, 2));
    ASSERT_EQ(list.size(), 1u);
    EXPECT_EQ(list[0], 0u);
  }
  EXPECT_EQ(st.touches(), 8u);
}

TEST(BuildVsv, EqualsVssOnRandomScenes) {
  for (uint64_t seed = 1; seed <= 6; ++seed) {
    const Built b = build(testing::random_lines(seed, 20, 12, 1.0f, 10.0f, 0.3f), 32);
    ABufferStats vsv_stats, vss_stats;
    const ABuffer vsv = build_vsv(b.segments, b.grid, b.pyramid, {}, &vsv_stats);
    const ABuffer vss = build_vss(b.segments, b.grid, {}, &vss_stats);
    size_t sum = 0;
    for (size_t i = 0; i < b.pyramid.base.size(); ++i) sum += b.pyramid.count(i);
    EXPECT_EQ(vsv.total(), sum);
    EXPECT_EQ(vsv_stats.dropped, 0u);
    EXPECT_EQ(testing::voxel_lists(vsv), testing::voxel_lists(vss));
    EXPECT_EQ(vsv_stats.touches(), 2 * b.stats.incidences);
    EXPECT_GE(vss_stats.fragment_reads + vss_stats.fragment_writes, 3 * b.stats.incidences);
  }
}

TEST(BuildVsv, IndependentOfWorkersAfterCanonicalize) {
  const Built b = build(testing::random_lines(9, 40, 12, 1.0f, 10.0f, 0.4f), 32);
  VoxelizeOptions o;
  o.workers = 1;
  ABuffer ref = build_vsv(b.segments, b.grid, b.pyramid, o);
  ref.canonicalize();
  for (unsigned w : {3u, 8u}) {
    o.workers = w;
    ABuffer a = build_vsv(b.segments, b.grid, b.pyramid, o);
    a.canonicalize(w);
    EXPECT_EQ(dump_abuffer(a), dump_abuffer(ref));
    ABuffer s = build_vss(b.segments, b.grid, o);
    EXPECT_EQ(dump_abuffer(s), dump_abuffer(ref));
  }
}

TEST(BuildVcsv, FullyVisibleEqualsVsv) {
  const Built b = build(generate(GeneratorParams{}, 1), 32);
  const CullingPyramid all = occupied_bits(b.pyramid);
  ABufferStats st;
  const ABuffer vcsv = build_vcsv(b.segments, b.grid, b.pyramid, all, {}, &st);
  const ABuffer vsv = build_vsv(b.segments, b.grid, b.pyramid, {});
  EXPECT_EQ(testing::voxel_lists(vcsv), testing::voxel_lists(vsv));
  EXPECT_EQ(st.segments_culled, 0u);
}

TEST(BuildVcsv, SegmentBehindWallContributesNothing) {
  // 8^3 unit grid. A wall of thick lines fills z = 2..4, a short segment
  // sits at z = 6.5 and the camera looks from z < 0.
  LineSet ls;
  ls.radius = 1.2f;
  for (float y = 0.5f; y < 8.0f; y += 1.0f) {
    const std::vector<Vec3f> row{{-2.0f, y, 3.5f}, {10.0f, y, 3.5f}};
    ls.add_polyline(row);
  }
  const std::vector<Vec3f> hidden{{3.5f, 3.5f, 6.5f}, {4.5f, 4.2f, 6.5f}};
  ls.add_polyline(hidden);
  const Built b = build_unit(ls, 8);
  Camera cam;
  cam.position = {4.0, 4.0, -20.0};
  cam.forward = {0, 0, 1};
  cam.orthonormalize();
  const CullingPyramid vis = compute_visibility(erode(b.pyramid.mips[0]), b.pyramid, b.grid, cam);
  ABufferStats st;
  const ABuffer a = build_vcsv(b.segments, b.grid, b.pyramid, vis, {}, &st);
  const uint32_t hidden_id = ls.polyline_offsets[8];
  for (uint32_t f : a.fragments) EXPECT_NE(f, hidden_id);
  EXPECT_GE(st.segments_culled, 1u);
  EXPECT_LT(a.total(), build_vsv(b.segments, b.grid, b.pyramid, {}).total());
}

TEST(BuildVcsv, NeverExceedsVsv) {
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    const Built b = build(testing::random_lines(seed, 60, 12, 1.0f, 10.0f, 0.8f), 32);
    const Camera cam = testing::random_pose(b.grid, seed, 32, 32);
    const CullingPyramid vis = compute_visibility(erode(b.pyramid.mips[0]), b.pyramid, b.grid, cam);
    const ABuffer c = build_vcsv(b.segments, b.grid, b.pyramid, vis, {});
    const ABuffer v = build_vsv(b.segments, b.grid, b.pyramid, {});
    EXPECT_LE(c.total(), v.total());
    // Every visible voxel keeps its full list.
    for (size_t i = 0; i < v.voxel_count(); ++i) {
      if (vis.levels[0][i]) {
        EXPECT_EQ(c.count[i], v.count[i]);
      }
    }
  }
}

TEST(BuildVss, EmptyAndSingleVoxel) {
  const ABuffer empty = build_vss(SegmentTable{}, unit_grid(8), {});
  EXPECT_EQ(empty.total(), 0u);
  EXPECT_EQ(empty.voxel_count(), 512u);

  LineSet ls;
  ls.radius = 0.1f;
  for (int i = 0; i < 3; ++i) {
    const float o = 0.1f * i;
    const std::vector<Vec3f> pts{{3.3f + o, 3.4f, 3.5f}, {3.6f, 3.5f + o, 3.5f}};
    ls.add_polyline(pts);
  }
  const GridDesc g = unit_grid(8);
  const SegmentTable t = build_segments(ls, compute_clip_normals(ls), g);
  VoxelizeOptions o;
  o.r_min = 0.1f;
  const ABuffer a = build_vss(t, g, o);
  EXPECT_EQ(a.total(), 3u);
  const auto list = a.voxel(Volume<uint8_t>(8).index(3, 3, 3));
  EXPECT_EQ(std::vector<uint32_t>(list.begin(), list.end()), (std::vector<uint32_t>{0, 2, 4}));
}

}  // namespace
}  // namespace voxline
