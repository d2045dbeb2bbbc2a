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

#include "voxline/grid.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "voxline/error.hpp"

namespace voxline {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

GridDesc unit_grid(int resolution) { return {resolution, Vec3d(0, 0, 0), 1.0}; }

namespace {

void check_resolution(int resolution) {
  if (!is_power_of_two(resolution) || resolution < 4) {
    throw ParameterError("resolution must be a power of two >= 4, got " + std::to_string(resolution));
  }
}

struct Bounds {
  Vec3d lo, hi;
};

Bounds vertex_bounds(const LineSet& lines) {
  if (lines.vertices.empty()) return {Vec3d(0, 0, 0), Vec3d(0, 0, 0)};
  Vec3d lo(std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
           std::numeric_limits<double>::max());
  Vec3d hi = -lo;
  for (const auto& v : lines.vertices) {
    lo = vmin(lo, Vec3d(v));
    hi = vmax(hi, Vec3d(v));
  }
  return {lo, hi};
}

GridDesc centred(const Bounds& b, int resolution, double voxel_size) {
  const Vec3d centre = (b.lo + b.hi) * 0.5;
  const double half = 0.5 * resolution * voxel_size;
  return {resolution, centre - Vec3d(half, half, half), voxel_size};
}

double max_extent(const Bounds& b) {
  const Vec3d e = b.hi - b.lo;
  return std::max({e.x, e.y, e.z});
}

}  // namespace

GridDesc fit_grid(const LineSet& lines, int resolution) {
  check_resolution(resolution);
  const Bounds b = vertex_bounds(lines);
  // resolution * vs = extent + 2 * (radius + vs)
  double vs = (max_extent(b) + 2.0 * lines.radius) / (resolution - 2);
  if (!(vs > 0.0)) vs = 1.0;
  return centred(b, resolution, vs);
}

GridDesc fit_grid_voxel_radius(const LineSet& lines, int resolution, double radius_voxels,
                               float* world_radius) {
  check_resolution(resolution);
  if (!(radius_voxels > 0.0) || 2.0 * radius_voxels >= resolution - 2) {
    throw ParameterError("radius does not fit the grid");
  }
  const Bounds b = vertex_bounds(lines);
  double vs = max_extent(b) / (resolution - 2 - 2.0 * radius_voxels);
  if (!(vs > 0.0)) vs = 1.0;
  if (world_radius) *world_radius = static_cast<float>(radius_voxels * vs);
  return centred(b, resolution, vs);
}

SegmentTable build_segments(const LineSet& lines, const ClipNormals& normals, const GridDesc& grid,
                            bool clipping) {
  SegmentTable t;
  t.ids = lines.segment_ids();
  t.capsules.resize(lines.vertex_count());
  t.capsules_d.resize(lines.vertex_count());
  for (uint32_t id : t.ids) {
    Capsule c = segment_capsule(lines, normals, id, clipping);
    c.v0 = Vec3f(grid.to_voxel(Vec3d(c.v0)));
    c.v1 = Vec3f(grid.to_voxel(Vec3d(c.v1)));
    c.r = static_cast<float>(c.r / grid.voxel_size);
    t.capsules[id] = c;
    t.capsules_d[id] = static_cast<CapsuleD>(c);
  }
  return t;
}

}  // namespace voxline
