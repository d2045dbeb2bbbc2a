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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <utility>
#include <vector>

#include "voxline/grid.hpp"
#include "voxline/lineset.hpp"
#include "voxline/vec3.hpp"
#include "voxline/volume.hpp"

namespace voxline {

enum class Method { dda, capsule, aabb };

/// Axes of a segment direction ordered by decreasing magnitude.
struct AxisRank {
  int a0 = 0, a1 = 1, a2 = 2;
  /// The segment runs towards -a0 and its endpoints must be exchanged.
  bool swapped = false;

  bool operator==(const AxisRank&) const = default;
};

/// Ties go to x, then y, then z. Empty for a zero vector.
std::optional<AxisRank> rank_axes(const Vec3d& d);

/// Per-minor-axis radii r / sqrt(1 - (d_ai / |d|)^2).
std::pair<double, double> projected_radii(const Vec3d& d, double r, const AxisRank& rank);

/// Half-extent along each minor axis of the cylinder cross-section in a
/// plane normal to a0: r * sqrt(1 - u_ak^2) / |u_a0| with u = d / |d| and
/// k the other minor axis.
std::pair<double, double> slice_radii(const Vec3d& d, double r, const AxisRank& rank);

/// Minor-axis box size used by traverse_capsule. `slice` covers the
/// capsule for every orientation; `chord` uses projected_radii, which is
/// exact only when the segment lies in a coordinate plane.
enum class MinorExtent { slice, chord };

/// Slack added to radii so boundary-touching voxels are not lost to rounding.
inline constexpr double kTraversalEps = 1e-4;

namespace detail {

inline int floor_clamped(double v, int res) {
  const double f = std::floor(v);
  if (f < 0.0) return 0;
  if (f > res - 1) return res - 1;
  return static_cast<int>(f);
}

struct VoxelBox {
  int lo[3];
  int hi[3];
  bool empty() const { return lo[0] > hi[0] || lo[1] > hi[1] || lo[2] > hi[2]; }
};

inline VoxelBox capsule_box(const Vec3d& v0, const Vec3d& v1, double r, int res) {
  VoxelBox b{};
  for (int a = 0; a < 3; ++a) {
    const double mn = std::min(v0[a], v1[a]) - r - kTraversalEps;
    const double mx = std::max(v0[a], v1[a]) + r + kTraversalEps;
    if (mx < 0.0 || mn >= res) {
      b.lo[a] = 1;
      b.hi[a] = 0;
      continue;
    }
    b.lo[a] = floor_clamped(mn, res);
    b.hi[a] = floor_clamped(mx, res);
  }
  return b;
}

template <typename Visit>
void visit_box(const VoxelBox& b, Visit&& visit) {
  if (b.empty()) return;
  for (int z = b.lo[2]; z <= b.hi[2]; ++z) {
    for (int y = b.lo[1]; y <= b.hi[1]; ++y) {
      for (int x = b.lo[0]; x <= b.hi[0]; ++x) visit(x, y, z);
    }
  }
}

}  // namespace detail

/// Every voxel overlapping the capsule's bounding box. `r` overrides the
/// capsule radius when positive.
template <typename Visit>
void traverse_aabb(const Capsule& c, const GridDesc& g, Visit&& visit, double r = -1.0) {
  const double rr = r > 0.0 ? r : c.r;
  detail::visit_box(detail::capsule_box(Vec3d(c.v0), Vec3d(c.v1), rr, g.resolution), visit);
}

/// Walks the major axis of the segment one voxel layer at a time and, per
/// layer, visits the minor-axis box around the axis covered by that layer,
/// limited to the capsule's bounding box. Each voxel is visited once.
template <typename Visit>
void traverse_capsule(const Capsule& c, const GridDesc& g, Visit&& visit, double r = -1.0,
                      MinorExtent extent = MinorExtent::slice) {
  const int res = g.resolution;
  const double rr = r > 0.0 ? r : c.r;
  Vec3d v0(c.v0), v1(c.v1);
  const detail::VoxelBox box = detail::capsule_box(v0, v1, rr, res);
  if (box.empty()) return;
  Vec3d d = v1 - v0;
  const auto rank = rank_axes(d);
  if (!rank) {
    detail::visit_box(box, visit);
    return;
  }
  if (rank->swapped) {
    std::swap(v0, v1);
    d = -d;
  }
  const int a0 = rank->a0, a1 = rank->a1, a2 = rank->a2;
  const auto [r1, r2] =
      extent == MinorExtent::slice ? slice_radii(d, rr, *rank) : projected_radii(d, rr, *rank);
  const double e1 = r1 + kTraversalEps;
  const double e2 = r2 + kTraversalEps;
  const Vec3d s = d / d[a0];
  const double ext = rr + kTraversalEps;
  const Vec3d ev0 = v0 - s * ext;
  const double t_min = ev0[a0];
  const double t_max = v1[a0] + ext;

  double t0 = t_min;
  Vec3d p0 = ev0;
  while (t0 < t_max) {
    const double t1 = std::min(t_max, std::floor(t0 + 1.0));
    const Vec3d p1 = ev0 + s * (t1 - t_min);
    const double layer = std::floor(t0);
    if (layer >= 0.0 && layer < res) {
      const auto lo1 = std::max(box.lo[a1], detail::floor_clamped(std::min(p0[a1], p1[a1]) - e1, res));
      const auto hi1 = std::min(box.hi[a1], detail::floor_clamped(std::max(p0[a1], p1[a1]) + e1, res));
      const auto lo2 = std::max(box.lo[a2], detail::floor_clamped(std::min(p0[a2], p1[a2]) - e2, res));
      const auto hi2 = std::min(box.hi[a2], detail::floor_clamped(std::max(p0[a2], p1[a2]) + e2, res));
      int C[3];
      C[a0] = static_cast<int>(layer);
      for (int k = lo2; k <= hi2; ++k) {
        C[a2] = k;
        for (int j = lo1; j <= hi1; ++j) {
          C[a1] = j;
          visit(C[0], C[1], C[2]);
        }
      }
    }
    t0 = t1;
    p0 = p1;
  }
}

/// Voxels pierced by the zero-radius segment, in order from v0 to v1.
/// Ties between axes step simultaneously, so a segment through a voxel
/// corner skips the voxels that only share that corner.
template <typename Visit>
void traverse_dda(const Vec3f& a, const Vec3f& b, const GridDesc& g, Visit&& visit) {
  const int res = g.resolution;
  const Vec3d v0(a), v1(b);
  const Vec3d d = v1 - v0;
  int cell[3], step[3];
  double t_next[3], t_delta[3];
  for (int ax = 0; ax < 3; ++ax) {
    cell[ax] = static_cast<int>(std::floor(v0[ax]));
    if (d[ax] > 0.0) {
      step[ax] = 1;
      t_delta[ax] = 1.0 / d[ax];
      t_next[ax] = (cell[ax] + 1 - v0[ax]) / d[ax];
    } else if (d[ax] < 0.0) {
      step[ax] = -1;
      t_delta[ax] = -1.0 / d[ax];
      t_next[ax] = (cell[ax] - v0[ax]) / d[ax];
    } else {
      step[ax] = 0;
      t_delta[ax] = 0.0;
      t_next[ax] = HUGE_VAL;
    }
  }
  for (;;) {
    if (cell[0] >= 0 && cell[1] >= 0 && cell[2] >= 0 && cell[0] < res && cell[1] < res && cell[2] < res) {
      visit(cell[0], cell[1], cell[2]);
    }
    const double t = std::min({t_next[0], t_next[1], t_next[2]});
    if (t > 1.0) break;
    for (int ax = 0; ax < 3; ++ax) {
      if (t_next[ax] == t) {
        cell[ax] += step[ax];
        t_next[ax] += t_delta[ax];
      }
    }
  }
}

template <typename Visit>
void traverse(Method method, const Capsule& c, const GridDesc& g, Visit&& visit, double r = -1.0) {
  switch (method) {
    case Method::dda:
      traverse_dda(c.v0, c.v1, g, visit);
      break;
    case Method::capsule:
      traverse_capsule(c, g, visit, r);
      break;
    case Method::aabb:
      traverse_aabb(c, g, visit, r);
      break;
  }
}

// ---------------------------------------------------------------------------
// Occupancy pyramid

inline constexpr float kOccupancyScale = 4096.0f;
inline constexpr uint32_t kFieldMax = 0xffffu;

struct PackedVoxel {
  uint32_t word = 0;

  static PackedVoxel encode(uint32_t count, float occupancy);
  uint32_t count() const { return word >> 16; }
  uint32_t occupancy_fixed() const { return word & kFieldMax; }
  float occupancy() const { return static_cast<float>(occupancy_fixed()) / kOccupancyScale; }
};

/// Base level of packed count/occupancy words plus averaging mips of the
/// clamped occupancy. mips[0] is the clamped base; the last level is 1^3.
struct OccupancyPyramid {
  Volume<uint32_t> base;
  std::vector<Volume<float>> mips;

  int resolution() const { return base.resolution(); }
  uint32_t count(size_t i) const { return base[i] >> 16; }
  float occupancy(size_t i) const { return mips.empty() ? 0.0f : mips[0][i]; }
};

struct VoxelizeOptions {
  Method method = Method::capsule;
  float r_min = 0.5f;
  unsigned workers = 0;
};

struct VoxelizeStats {
  uint64_t incidences = 0;
  /// Increments whose count field was already at its maximum.
  uint64_t saturated = 0;
};

/// Radius used to enumerate voxels: occupancy is evaluated with radii
/// clamped to r_min, so traversal must cover the clamped capsule.
inline double traversal_radius(const Capsule& c, float r_min) { return std::max<double>(c.r, r_min); }

OccupancyPyramid voxelize(const SegmentTable& segments, const GridDesc& grid, const VoxelizeOptions& options,
                          VoxelizeStats* stats = nullptr);

/// mips from a packed base level.
std::vector<Volume<float>> build_mips(const Volume<uint32_t>& base);
/// mips from a float base level, clamped to [0, 1].
std::vector<Volume<float>> build_mips(const Volume<float>& base);

std::vector<std::byte> dump_pyramid(const OccupancyPyramid& pyramid);
OccupancyPyramid load_pyramid(std::span<const std::byte> bytes);

}  // namespace voxline
