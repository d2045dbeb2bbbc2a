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

#pragma once

#include <cstdint>
#include <vector>

#include "voxline/lineset.hpp"
#include "voxline/vec3.hpp"

namespace voxline {

/// Cubic voxel grid. Voxel (i, j, k) spans [i, i + 1) in voxel units;
/// voxel units map to world units through `world_min` and `voxel_size`.
struct GridDesc {
  int resolution = 0;
  Vec3d world_min;
  double voxel_size = 1.0;

  Vec3d world_max() const { return world_min + Vec3d(1, 1, 1) * (resolution * voxel_size); }
  Vec3d to_voxel(const Vec3d& world) const { return (world - world_min) / voxel_size; }
  Vec3d to_world(const Vec3d& voxel) const { return world_min + voxel * voxel_size; }
  size_t voxel_count() const { return static_cast<size_t>(resolution) * resolution * resolution; }

  bool operator==(const GridDesc&) const = default;
};

bool is_power_of_two(int n);

/// Unit grid [0, resolution)^3, for scenes already in voxel units.
GridDesc unit_grid(int resolution);

/// Cube centred on the vertex bounding box with a margin of `radius` plus
/// one voxel on every side. Throws ParameterError unless `resolution` is a
/// power of two >= 4.
GridDesc fit_grid(const LineSet& lines, int resolution);

/// Like fit_grid, but the radius is given in voxel units, so the voxel size
/// and the world radius are solved together. Returns the world radius.
GridDesc fit_grid_voxel_radius(const LineSet& lines, int resolution, double radius_voxels,
                               float* world_radius);

/// Per-segment capsules in voxel units, indexed by segment id. Entries for
/// ids that are not segments (last vertex of a polyline) are unused.
struct SegmentTable {
  std::vector<uint32_t> ids;
  std::vector<Capsule> capsules;
  std::vector<CapsuleD> capsules_d;

  size_t size() const { return ids.size(); }
};

SegmentTable build_segments(const LineSet& lines, const ClipNormals& normals, const GridDesc& grid,
                            bool clipping = true);

}  // namespace voxline
