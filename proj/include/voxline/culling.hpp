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
#include <span>
#include <vector>

#include "voxline/camera.hpp"
#include "voxline/grid.hpp"
#include "voxline/volume.hpp"
#include "voxline/voxelizer.hpp"

namespace voxline {

/// Binary mip hierarchy: levels[0] is the base, each parent is the OR of
/// its 8 children, and the last level is 1^3.
struct BitPyramid {
  std::vector<Volume<uint8_t>> levels;

  int resolution() const { return levels.empty() ? 0 : levels[0].resolution(); }
  bool bit(int level, int x, int y, int z) const { return levels[level].at(x, y, z) != 0; }
  size_t set_count() const;
};

using CullingPyramid = BitPyramid;

BitPyramid build_bit_pyramid(Volume<uint8_t> base);

/// Bits set where the packed count is nonzero.
BitPyramid occupied_bits(const OccupancyPyramid& pyramid);

/// Minimum of each voxel and its six neighbours, out-of-grid neighbours
/// counting as empty.
Volume<float> erode(const Volume<float>& occupancy);

inline constexpr float kBlockThreshold = 0.999f;

/// Marks a voxel visible when it holds at least one primitive and the
/// straight path from its centre, or from one of its corners, to the camera
/// crosses no voxel whose eroded occupancy reaches kBlockThreshold. The voxel itself and the
/// voxel containing the camera never block.
CullingPyramid compute_visibility(const Volume<float>& eroded, const OccupancyPyramid& pyramid,
                                  const GridDesc& grid, const Camera& camera, unsigned workers = 0);

/// True when any set node of the pyramid overlaps the voxel box
/// [lo, hi] (inclusive base-level coordinates). Descends from the root.
bool any_set_in_box(const BitPyramid& pyramid, const int lo[3], const int hi[3]);

std::vector<std::byte> dump_culling(const CullingPyramid& pyramid);

}  // namespace voxline
