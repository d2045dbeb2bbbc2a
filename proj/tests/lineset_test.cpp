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

#include <cmath>
#include <filesystem>
#include <numbers>

#include "voxline/error.hpp"
#include "voxline/lineset.hpp"

namespace voxline {
namespace {

TEST(LoadLineset, TwoPolylinesFromText) {
  const LineSet ls = parse_lns_text(
      "lns 1 radius=0.5\n"
      "v 0 0 0\nv 1 0 0\nv 2 0 0\n"
      "\n"
      "v 0 1 0\nv 0 2 0\n");
  EXPECT_EQ(ls.vertex_count(), 5u);
  EXPECT_EQ(ls.polyline_offsets, (std::vector<uint32_t>{0, 3, 5}));
  EXPECT_EQ(ls.segment_count(), 3u);
  EXPECT_EQ(ls.segment_ids(), (std::vector<uint32_t>{0, 1, 3}));
  EXPECT_FLOAT_EQ(ls.radius, 0.5f);
}

TEST(LoadLineset, EmptyInputHasNoPolylines) {
  try {
    parse_lns_text("");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("no polylines"), std::string::npos);
  }
}

TEST(LoadLineset, RejectsMalformedLines) {
  EXPECT_THROW(parse_lns_text("lns 1 radius=-1\nv 0 0 0\nv 1 0 0\n"), ParseError);
  EXPECT_THROW(parse_lns_text("lns 1 radius=1\nv 0 0\nv 1 0 0\n"), ParseError);
  EXPECT_THROW(parse_lns_text("lns 1 radius=1\nv 0 0 0\n"), ParseError);
  EXPECT_THROW(parse_lns_text("lns 1 radius=1\nv 0 nan 0\nv 1 0 0\n"), ParseError);
}

TEST(LoadLineset, HelixRoundTripsThroughBothFormats) {
  GeneratorParams p;
  p.turns = 3.3f;
  p.vertices = 257;
  const LineSet helix = generate(p, 1);
  const auto dir = std::filesystem::temp_directory_path();
  for (auto format : {LineSetFormat::text, LineSetFormat::binary}) {
    const auto path = dir / (format == LineSetFormat::text ? "voxline_helix.lns" : "voxline_helix.lnsb");
    save_lineset(path, helix, format);
    EXPECT_EQ(detect_format(path), format);
    const LineSet back = load_lineset(path);
    EXPECT_EQ(back, helix);
    std::filesystem::remove(path);
  }
}

TEST(LoadLineset, TruncatedBinaryFails) {
  auto bytes = to_lns_binary(generate(GeneratorParams{}, 1));
  bytes.resize(bytes.size() - 5);
  EXPECT_THROW(parse_lns_binary(bytes), ParseError);
}

TEST(ClipNormals, StraightLineAlongX) {
  LineSet ls;
  const std::vector<Vec3f> pts{{0, 0, 0}, {1, 0, 0}, {2.5f, 0, 0}, {4, 0, 0}};
  ls.add_polyline(pts);
  for (const auto& n : compute_clip_normals(ls).normals) EXPECT_EQ(n, Vec3f(1, 0, 0));
}

TEST(ClipNormals, RightAngleInteriorBisects) {
  LineSet ls;
  const std::vector<Vec3f> pts{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}};
  ls.add_polyline(pts);
  const auto n = compute_clip_normals(ls).normals;
  EXPECT_NEAR(n[1].x, 0.70710678f, 1e-6f);
  EXPECT_NEAR(n[1].y, 0.70710678f, 1e-6f);
  EXPECT_EQ(n[1].z, 0.0f);
}

TEST(ClipNormals, CircleNormalsConvergeToTangent) {
  double prev_err = 0.0;
  for (int verts : {32, 64, 128}) {
    LineSet ls;
    std::vector<Vec3f> pts;
    // Smoothly uneven spacing so the central difference carries a real error.
    const auto angle = [&](int i) {
      const double t = static_cast<double>(i) / verts;
      return 2.0 * std::numbers::pi * (t + 0.1 * std::sin(2.0 * std::numbers::pi * t));
    };
    for (int i = 0; i < verts; ++i) {
      const double a = angle(i);
      pts.emplace_back(static_cast<float>(std::cos(a)), static_cast<float>(std::sin(a)), 0.0f);
    }
    ls.add_polyline(pts);
    const auto n = compute_clip_normals(ls).normals;
    double err = 0.0;
    for (int i = 1; i + 1 < verts; ++i) {
      const double a = angle(i);
      const Vec3d t(-std::sin(a), std::cos(a), 0.0);
      err = std::max(err, length(Vec3d(n[i]) - t));
    }
    const double h = 2.0 * std::numbers::pi / verts;
    EXPECT_LT(err, h * h);
    EXPECT_GT(err, 1e-5);
    if (prev_err > 0.0) {
      EXPECT_LT(err, prev_err / 3.0);
    }
    prev_err = err;
  }
}

TEST(ClipNormals, RepeatedVerticesUseNeighbouringDirection) {
  LineSet ls;
  const std::vector<Vec3f> pts{{0, 0, 0}, {0, 0, 0}, {0, 2, 0}};
  ls.add_polyline(pts);
  const auto n = compute_clip_normals(ls).normals;
  for (const auto& v : n) EXPECT_EQ(v, Vec3f(0, 1, 0));
  LineSet point;
  const std::vector<Vec3f> same{{1, 1, 1}, {1, 1, 1}};
  point.add_polyline(same);
  EXPECT_THROW(compute_clip_normals(point), ParameterError);
}

TEST(Generate, HelixCounts) {
  GeneratorParams p;
  p.turns = 2;
  p.vertices = 100;
  const LineSet ls = generate(p, 3);
  EXPECT_EQ(ls.polyline_count(), 1u);
  EXPECT_EQ(ls.vertex_count(), 100u);
}

TEST(Generate, StreamlinesDeterministicInSeed) {
  GeneratorParams p;
  p.kind = GeneratorKind::random_streamlines;
  EXPECT_EQ(to_lns_binary(generate(p, 7)), to_lns_binary(generate(p, 7)));
  EXPECT_NE(to_lns_binary(generate(p, 7)), to_lns_binary(generate(p, 8)));
}

TEST(Generate, GridDiagonalsRunAlongBodyDiagonal) {
  GeneratorParams p;
  p.kind = GeneratorKind::grid_diagonals;
  p.diagonal_extent = 64;
  const LineSet ls = generate(p, 1);
  ASSERT_GT(ls.segment_count(), 0u);
  for (uint32_t id : ls.segment_ids()) {
    const Vec3d d = Vec3d(ls.vertices[id + 1]) - Vec3d(ls.vertices[id]);
    EXPECT_NEAR(d.x, 64.0, 1e-4);
    EXPECT_NEAR(d.y, 64.0, 1e-4);
    EXPECT_NEAR(d.z, 64.0, 1e-4);
  }
}

TEST(Generate, RejectsBadParameters) {
  GeneratorParams p;
  p.vertices = 1;
  EXPECT_THROW(generate(p, 1), ParameterError);
  p = GeneratorParams{};
  p.radius = 0;
  EXPECT_THROW(generate(p, 1), ParameterError);
}

TEST(Decimate, FactorOneIsIdentity) {
  const LineSet helix = generate(GeneratorParams{}, 1);
  EXPECT_EQ(decimate(helix, 1), helix);
}

TEST(Decimate, KeepsEveryNthAndLast) {
  LineSet ls;
  std::vector<Vec3f> pts;
  for (int i = 0; i < 10; ++i) pts.emplace_back(static_cast<float>(i), 0.0f, 0.0f);
  ls.add_polyline(pts);
  const LineSet d = decimate(ls, 3);
  ASSERT_EQ(d.vertex_count(), 4u);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(d.vertices[i].x, 3.0f * i);
}

TEST(Decimate, PreservesHelixArcLength) {
  GeneratorParams p;
  p.turns = 3;
  p.vertices = 400;
  const LineSet helix = generate(p, 1);
  const double full = total_arc_length(helix);
  EXPECT_NEAR(total_arc_length(decimate(helix, 4)) / full, 1.0, 0.05);
  EXPECT_THROW(decimate(helix, 0), ParameterError);
}

}  // namespace
}  // namespace voxline
