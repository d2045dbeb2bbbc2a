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

#include "voxline/culling.hpp"

#include <algorithm>

#include "binary_io.hpp"
#include "voxline/dda.hpp"
#include "voxline/geometry.hpp"
#include "voxline/parallel.hpp"
#include "voxline/simd/kernels.hpp"

namespace voxline {

size_t BitPyramid::set_count() const {
  if (levels.empty()) return 0;
  return static_cast<size_t>(std::count_if(levels[0].values().begin(), levels[0].values().end(),
                                           [](uint8_t b) { return b != 0; }));
}

BitPyramid build_bit_pyramid(Volume<uint8_t> base) {
  BitPyramid p;
  p.levels.push_back(std::move(base));
  while (p.levels.back().resolution() > 1) {
    const Volume<uint8_t>& src = p.levels.back();
    const int n = src.resolution() / 2;
    Volume<uint8_t> dst(n, 0);
    for (int z = 0; z < n; ++z) {
      for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
          uint8_t any = 0;
          for (int c = 0; c < 8; ++c) any |= src.at(2 * x + (c & 1), 2 * y + ((c >> 1) & 1), 2 * z + (c >> 2));
          dst.at(x, y, z) = any ? 1 : 0;
        }
      }
    }
    p.levels.push_back(std::move(dst));
  }
  return p;
}

BitPyramid occupied_bits(const OccupancyPyramid& pyramid) {
  Volume<uint8_t> base(pyramid.resolution(), 0);
  for (size_t i = 0; i < base.size(); ++i) base[i] = pyramid.count(i) > 0 ? 1 : 0;
  return build_bit_pyramid(std::move(base));
}

Volume<float> erode(const Volume<float>& occupancy) {
  Volume<float> clamped(occupancy.resolution());
  for (size_t i = 0; i < occupancy.size(); ++i) clamped[i] = clamp01(occupancy[i]);
  Volume<float> out(occupancy.resolution());
  simd::kernels().erode6(clamped.data(), occupancy.resolution(), out.data());
  return out;
}

constexpr double kCornerInset = 0.49;

CullingPyramid compute_visibility(const Volume<float>& eroded, const OccupancyPyramid& pyramid,
                                  const GridDesc& grid, const Camera& camera, unsigned workers) {
  const int res = grid.resolution;
  Volume<uint8_t> base(res, 0);
  const Vec3d eye = grid.to_voxel(camera.position);
  parallel_for(base.size(), workers, [&](size_t i) {
    if (pyramid.count(i) == 0) return;
    const Vec3i c = base.coord(i);
    // The centre first, then the corners pulled slightly inward. Any clear
    // path keeps the voxel.
    bool visible = false;
    for (int corner = -1; corner < 8 && !visible; ++corner) {
      Vec3d from(c.x + 0.5, c.y + 0.5, c.z + 0.5);
      if (corner >= 0) {
        for (int ax = 0; ax < 3; ++ax) from[ax] += (corner >> ax) & 1 ? kCornerInset : -kCornerInset;
      }
      bool blocked = false;
      march_voxels(from, eye - from, 0.0, 1.0, res, [&](int x, int y, int z, double, double t_exit) {
        if (x == c.x && y == c.y && z == c.z) return true;
        if (t_exit >= 1.0) return false;
        if (eroded.at(x, y, z) >= kBlockThreshold) {
          blocked = true;
          return false;
        }
        return true;
      });
      visible = !blocked;
    }
    base[i] = visible ? 1 : 0;
  });
  return build_bit_pyramid(std::move(base));
}

namespace {

bool any_set(const BitPyramid& p, int level, int x, int y, int z, const int lo[3], const int hi[3]) {
  if (!p.bit(level, x, y, z)) return false;
  const int size = 1 << level;
  const int node[3] = {x, y, z};
  for (int a = 0; a < 3; ++a) {
    if (node[a] * size > hi[a] || (node[a] + 1) * size - 1 < lo[a]) return false;
  }
  if (level == 0) return true;
  for (int c = 0; c < 8; ++c) {
    if (any_set(p, level - 1, 2 * x + (c & 1), 2 * y + ((c >> 1) & 1), 2 * z + (c >> 2), lo, hi)) return true;
  }
  return false;
}

}  // namespace

bool any_set_in_box(const BitPyramid& pyramid, const int lo[3], const int hi[3]) {
  if (pyramid.levels.empty()) return false;
  return any_set(pyramid, static_cast<int>(pyramid.levels.size()) - 1, 0, 0, 0, lo, hi);
}

std::vector<std::byte> dump_culling(const CullingPyramid& p) {
  ByteWriter w;
  w.magic({'C', 'U', 'L', 'P'});
  w.u32(static_cast<uint32_t>(p.resolution()));
  for (const auto& level : p.levels) {
    for (uint8_t b : level.values()) w.u8(b);
  }
  return w.take();
}

}  // namespace voxline
