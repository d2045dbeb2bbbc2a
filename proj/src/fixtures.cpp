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

#include "voxline/fixtures.hpp"

#include <vector>

namespace voxline {

namespace {

constexpr float kRadius = 3.0f;

void append(LineSet& dst, const LineSet& src, const Vec3f& offset) {
  for (size_t p = 0; p < src.polyline_count(); ++p) {
    std::vector<Vec3f> pts;
    for (uint32_t i = src.polyline_offsets[p]; i < src.polyline_offsets[p + 1]; ++i) {
      pts.push_back(src.vertices[i] + offset);
    }
    dst.add_polyline(pts);
  }
}

LineSet streamlines(int count, float box, uint64_t seed) {
  GeneratorParams p;
  p.kind = GeneratorKind::random_streamlines;
  p.radius = kRadius;
  p.polylines = count;
  p.steps = 16;
  p.segment_length = 2.5f;
  p.box = box;
  return generate(p, seed);
}

// Lines along `along`, stacked every 2 units along `across`, in the plane
// where axis `normal` equals `level`.
void add_wall(LineSet& out, int along, int across, int normal, float level, float half) {
  for (float s = -half; s <= half + 1e-3f; s += 2.0f) {
    std::vector<Vec3f> pts;
    for (int i = 0; i <= 3; ++i) {
      Vec3f v;
      v[along] = -half + 2.0f * half * static_cast<float>(i) / 3.0f;
      v[across] = s;
      v[normal] = level;
      pts.push_back(v);
    }
    out.add_polyline(pts);
  }
}

}  // namespace

LineSet make_fixture(Fixture fixture, uint64_t seed) {
  LineSet out;
  out.radius = kRadius;
  switch (fixture) {
    case Fixture::wall:
      add_wall(out, 0, 1, 2, -20.0f, 30.0f);
      append(out, streamlines(60, 40.0f, seed), Vec3f(0, 0, 6));
      append(out, streamlines(8, 10.0f, seed + 1), Vec3f(0, 0, -28));
      break;
    case Fixture::shell:
      for (int n = 0; n < 3; ++n) {
        for (float level : {-20.0f, 20.0f}) add_wall(out, (n + 1) % 3, (n + 2) % 3, n, level, 20.0f);
      }
      append(out, streamlines(40, 24.0f, seed), Vec3f(0, 0, 0));
      break;
    case Fixture::bundle:
      append(out, streamlines(80, 36.0f, seed), Vec3f(0, 0, 0));
      break;
  }
  return out;
}

std::optional<Fixture> parse_fixture(std::string_view name) {
  if (name == "wall") return Fixture::wall;
  if (name == "shell") return Fixture::shell;
  if (name == "bundle") return Fixture::bundle;
  return std::nullopt;
}

std::string_view fixture_name(Fixture fixture) {
  switch (fixture) {
    case Fixture::wall:
      return "wall";
    case Fixture::shell:
      return "shell";
    case Fixture::bundle:
      return "bundle";
  }
  return "";
}

}  // namespace voxline
