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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "voxline/culling.hpp"
#include "voxline/grid.hpp"
#include "voxline/voxelizer.hpp"

namespace voxline {

/// 30-bit interleave, x in bit 0, y in bit 1, z in bit 2. Components must
/// be below 1024 (ParameterError otherwise).
uint32_t morton_encode(const Vec3i& c);
Vec3i morton_decode(uint32_t code);

/// Exclusive prefix sum of per-voxel counts in x-fastest order.
struct OffsetTable {
  std::vector<uint32_t> offsets;
  uint64_t total = 0;
};

/// Counts from the packed base level; voxels whose culling bit is clear
/// contribute 0 when `culling` is given. Throws ParameterError when the
/// total exceeds `capacity`.
OffsetTable scan_offsets(const OccupancyPyramid& pyramid, const CullingPyramid* culling = nullptr,
                         uint64_t capacity = UINT32_MAX);
OffsetTable scan_offsets(std::span<const uint32_t> counts, uint64_t capacity = UINT32_MAX);

/// Fragment memory traffic of one construction, in 32-bit element accesses.
struct ABufferStats {
  /// Per-incidence count updates of the first voxelization pass, recovered
  /// from the pyramid's (unsaturated) counts.
  uint64_t count_updates = 0;
  uint64_t fragment_writes = 0;
  uint64_t fragment_reads = 0;
  uint64_t sort_passes = 0;
  /// Writes rejected because a voxel's slice was full.
  uint64_t dropped = 0;
  uint64_t segments_culled = 0;

  uint64_t touches() const { return count_updates + fragment_writes + fragment_reads; }
};

/// Per-voxel fragment lists of segment ids. Voxel v owns
/// fragments[start[v], start[v] + count[v]).
struct ABuffer {
  std::vector<uint32_t> fragments;
  std::vector<uint32_t> start;
  std::vector<uint32_t> count;

  size_t voxel_count() const { return count.size(); }
  size_t total() const { return fragments.size(); }
  std::span<const uint32_t> voxel(size_t v) const { return {fragments.data() + start[v], count[v]}; }

  /// Sorts every voxel's list by segment id so later stages see a fixed order.
  void canonicalize(unsigned workers = 0);
};

/// Second voxelization pass into slices sized by the pyramid's counts. The
/// traversal options must match those used to build the pyramid.
ABuffer build_vsv(const SegmentTable& segments, const GridDesc& grid, const OccupancyPyramid& pyramid,
                  const VoxelizeOptions& options, ABufferStats* stats = nullptr);

/// As build_vsv, restricted to voxels visible in `culling`. Segments whose
/// bounding box overlaps no visible node are skipped entirely.
ABuffer build_vcsv(const SegmentTable& segments, const GridDesc& grid, const OccupancyPyramid& pyramid,
                   const CullingPyramid& culling, const VoxelizeOptions& options, ABufferStats* stats = nullptr);

/// Emits (Morton code, segment id) pairs for every incidence, radix sorts
/// them by code and derives the lists from the sorted runs.
ABuffer build_vss(const SegmentTable& segments, const GridDesc& grid, const VoxelizeOptions& options,
                  ABufferStats* stats = nullptr);

/// `ABUF`, u32 voxel count, u32 offsets[voxel count + 1], u32 fragments;
/// lists are laid out in x-fastest voxel order.
std::vector<std::byte> dump_abuffer(const ABuffer& buffer);

}  // namespace voxline
