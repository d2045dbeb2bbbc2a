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

#include <array>
#include <cstdint>

#include "voxline/culling.hpp"
#include "voxline/grid.hpp"
#include "voxline/vec3.hpp"
#include "voxline/volume.hpp"
#include "voxline/voxelizer.hpp"

namespace voxline {

/// Twelve cone directions along the icosahedron vertices, equal weights.
struct ConeSet {
  std::array<Vec3d, 12> directions;
  double weight = 1.0 / 12.0;
  double half_angle = 0.0;

  /// Half-angle of a cone covering 1/12 of the sphere: cos = 1 - 2/12.
  static ConeSet icosahedral();
};

inline constexpr double kShadowHalfAngle = 5.0 * 3.14159265358979323846 / 180.0;
inline constexpr float kConeSaturation = 0.99f;

/// Front-to-back occlusion accumulated along a cone from `origin` (voxel
/// units), starting one voxel out. Steps by the cone diameter (at least one
/// voxel) and samples the mip whose voxel size matches it. Saturates to 1
/// once occlusion reaches kConeSaturation. Origins outside the grid give 0.
float cone_trace(const OccupancyPyramid& pyramid, const Vec3d& origin, const Vec3d& dir, double half_angle);

/// Trilinear sample of mip `level` at a voxel-unit (base level) position,
/// clamped to the edge.
float sample_level(const Volume<float>& level, int base_resolution, const Vec3d& p);

struct ShadingVolume {
  Volume<float> ao;
  Volume<float> shadow;
  /// Direction the light travels in.
  Vec3d light_dir;
};

/// AO and shadow terms at the centre of every voxel set in `mask`; other
/// voxels hold 1. The shadow cone points against `light_dir`.
ShadingVolume compute_shading(const OccupancyPyramid& pyramid, const BitPyramid& mask, const GridDesc& grid,
                              const Vec3d& light_dir, unsigned workers = 0,
                              const ConeSet& cones = ConeSet::icosahedral());

}  // namespace voxline
