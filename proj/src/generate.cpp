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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "voxline/error.hpp"
#include "voxline/lineset.hpp"

namespace voxline {

namespace {

LineSet make_helix(const GeneratorParams& p) {
  if (p.vertices < 2) throw ParameterError("helix needs at least 2 vertices");
  if (!(p.turns > 0.0f) || !(p.helix_radius > 0.0f)) throw ParameterError("helix turns and radius must be positive");
  std::vector<Vec3f> pts(static_cast<size_t>(p.vertices));
  const double total_angle = 2.0 * std::numbers::pi * p.turns;
  for (int i = 0; i < p.vertices; ++i) {
    const double u = static_cast<double>(i) / (p.vertices - 1);
    const double a = u * total_angle;
    pts[i] = Vec3f(Vec3d(p.helix_radius * std::cos(a), p.helix_radius * std::sin(a),
                         p.pitch * p.turns * (u - 0.5)));
  }
  LineSet out;
  out.radius = p.radius;
  out.add_polyline(pts);
  return out;
}

// Smoothly turning random walks that reflect off the walls of a cube.
LineSet make_random_streamlines(const GeneratorParams& p, uint64_t seed) {
  if (p.polylines < 1 || p.steps < 1) throw ParameterError("streamline counts must be positive");
  if (!(p.segment_length > 0.0f) || !(p.box > 0.0f)) throw ParameterError("segment length and box must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::uniform_real_distribution<double> len_jitter(0.5, 1.5);
  const double half = 0.5 * p.box;

  auto random_unit = [&] {
    for (;;) {
      const Vec3d v(uni(rng), uni(rng), uni(rng));
      const double l2 = dot(v, v);
      if (l2 > 1e-6 && l2 <= 1.0) return v / std::sqrt(l2);
    }
  };

  LineSet out;
  out.radius = p.radius;
  std::vector<Vec3f> pts;
  for (int line = 0; line < p.polylines; ++line) {
    Vec3d pos(uni(rng) * half, uni(rng) * half, uni(rng) * half);
    Vec3d dir = random_unit();
    pts.assign(1, Vec3f(pos));
    for (int s = 0; s < p.steps; ++s) {
      dir = normalize(dir + random_unit() * static_cast<double>(p.curvature));
      Vec3d next = pos + dir * (p.segment_length * len_jitter(rng));
      for (int a = 0; a < 3; ++a) {
        if (next[a] > half) {
          next[a] = 2 * half - next[a];
          dir[a] = -dir[a];
        } else if (next[a] < -half) {
          next[a] = -2 * half - next[a];
          dir[a] = -dir[a];
        }
      }
      pos = next;
      pts.push_back(Vec3f(pos));
    }
    out.add_polyline(pts);
  }
  return out;
}

// Parallel single-segment polylines along (1, 1, 1), each spanning
// `diagonal_extent` on every axis, laid out on a lattice in the plane
// perpendicular to the diagonal.
LineSet make_grid_diagonals(const GeneratorParams& p) {
  if (p.diagonal_count < 1 || !(p.diagonal_extent > 0.0f)) {
    throw ParameterError("diagonal count and extent must be positive");
  }
  const Vec3d u = normalize(Vec3d(1, -1, 0));
  const Vec3d w = normalize(Vec3d(1, 1, -2));
  const int side = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(p.diagonal_count))));
  LineSet out;
  out.radius = p.radius;
  for (int i = 0; i < p.diagonal_count; ++i) {
    const double a = (i % side - 0.5 * (side - 1)) * p.diagonal_spacing;
    const double b = (i / side - 0.5 * (side - 1)) * p.diagonal_spacing;
    const Vec3d base = u * a + w * b;
    const double h = 0.5 * p.diagonal_extent;
    const std::array<Vec3f, 2> pts{Vec3f(base - Vec3d(h, h, h)), Vec3f(base + Vec3d(h, h, h))};
    out.add_polyline(pts);
  }
  return out;
}

}  // namespace

LineSet generate(const GeneratorParams& params, uint64_t seed) {
  if (!(params.radius > 0.0f)) throw ParameterError("radius must be positive");
  switch (params.kind) {
    case GeneratorKind::helix:
      return make_helix(params);
    case GeneratorKind::random_streamlines:
      return make_random_streamlines(params, seed);
    case GeneratorKind::grid_diagonals:
      return make_grid_diagonals(params);
  }
  throw ParameterError("unknown generator kind");
}

GeneratorParams parse_generator_spec(std::string_view spec) {
  GeneratorParams p;
  const size_t colon = spec.find(':');
  const std::string_view kind = spec.substr(0, colon);
  if (kind == "helix") {
    p.kind = GeneratorKind::helix;
  } else if (kind == "random_streamlines") {
    p.kind = GeneratorKind::random_streamlines;
  } else if (kind == "grid_diagonals") {
    p.kind = GeneratorKind::grid_diagonals;
  } else {
    throw ParameterError("unknown generator `" + std::string(kind) + "`");
  }
  if (colon == std::string_view::npos) return p;

  std::string_view rest = spec.substr(colon + 1);
  while (!rest.empty()) {
    const size_t comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    const size_t eq = item.find('=');
    if (eq == std::string_view::npos) throw ParameterError("expected key=value in `" + std::string(item) + "`");
    const std::string_view key = item.substr(0, eq);
    const std::string_view val = item.substr(eq + 1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), v);
    if (ec != std::errc{} || ptr != val.data() + val.size()) {
      throw ParameterError("invalid number for `" + std::string(key) + "`");
    }
    const auto f = static_cast<float>(v);
    const auto i = static_cast<int>(v);
    if (key == "radius") p.radius = f;
    else if (key == "turns") p.turns = f;
    else if (key == "vertices" || key == "verts") p.vertices = i;
    else if (key == "helix_radius") p.helix_radius = f;
    else if (key == "pitch") p.pitch = f;
    else if (key == "polylines") p.polylines = i;
    else if (key == "steps") p.steps = i;
    else if (key == "segment_length") p.segment_length = f;
    else if (key == "box") p.box = f;
    else if (key == "curvature") p.curvature = f;
    else if (key == "extent" || key == "L") p.diagonal_extent = f;
    else if (key == "count") p.diagonal_count = i;
    else if (key == "spacing") p.diagonal_spacing = f;
    else throw ParameterError("unknown generator parameter `" + std::string(key) + "`");
  }
  return p;
}

}  // namespace voxline
