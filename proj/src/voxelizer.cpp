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

#include "voxline/voxelizer.hpp"

#include <atomic>
#include <cmath>
#include <string>

#include "binary_io.hpp"
#include "voxline/error.hpp"
#include "voxline/geometry.hpp"
#include "voxline/parallel.hpp"
#include "voxline/simd/kernels.hpp"

namespace voxline {

std::optional<AxisRank> rank_axes(const Vec3d& d) {
  const Vec3d m = vabs(d);
  if (m.x == 0.0 && m.y == 0.0 && m.z == 0.0) return std::nullopt;
  int order[3] = {0, 1, 2};
  // Stable insertion sort on descending magnitude keeps x, y, z priority on ties.
  for (int i = 1; i < 3; ++i) {
    for (int j = i; j > 0 && m[order[j]] > m[order[j - 1]]; --j) std::swap(order[j], order[j - 1]);
  }
  return AxisRank{order[0], order[1], order[2], d[order[0]] < 0.0};
}

std::pair<double, double> projected_radii(const Vec3d& d, double r, const AxisRank& rank) {
  const double len = length(d);
  const double u1 = d[rank.a1] / len;
  const double u2 = d[rank.a2] / len;
  return {r / std::sqrt(1.0 - u1 * u1), r / std::sqrt(1.0 - u2 * u2)};
}

std::pair<double, double> slice_radii(const Vec3d& d, double r, const AxisRank& rank) {
  const double len = length(d);
  const double u0 = std::abs(d[rank.a0]) / len;
  const double u1 = d[rank.a1] / len;
  const double u2 = d[rank.a2] / len;
  return {r * std::sqrt(1.0 - u2 * u2) / u0, r * std::sqrt(1.0 - u1 * u1) / u0};
}

PackedVoxel PackedVoxel::encode(uint32_t count, float occupancy) {
  const float q = std::nearbyint(occupancy * kOccupancyScale);
  const uint32_t o = q <= 0.0f ? 0u : (q >= static_cast<float>(kFieldMax) ? kFieldMax : static_cast<uint32_t>(q));
  return {(std::min(count, kFieldMax) << 16) | o};
}

namespace {

// Saturating per-field add. Saturating sums of non-negative terms do not
// depend on the order of the terms, so the result is schedule independent.
bool add_packed(uint32_t& word, uint32_t occ) {
  std::atomic_ref<uint32_t> ref(word);
  uint32_t old = ref.load(std::memory_order_relaxed);
  for (;;) {
    const uint32_t c = old >> 16;
    const uint32_t o = (old & kFieldMax) + occ;
    const bool count_full = c == kFieldMax;
    const uint32_t next = ((count_full ? c : c + 1) << 16) | std::min(o, kFieldMax);
    if (ref.compare_exchange_weak(old, next, std::memory_order_relaxed)) return count_full;
  }
}

struct Batch {
  std::vector<uint32_t> index;
  std::vector<float> x, y, z;
  std::vector<uint16_t> occ;

  void clear() {
    index.clear();
    x.clear();
    y.clear();
    z.clear();
  }
};

}  // namespace

OccupancyPyramid voxelize(const SegmentTable& segments, const GridDesc& grid, const VoxelizeOptions& options,
                          VoxelizeStats* stats) {
  if (!(options.r_min > 0.0f)) throw ParameterError("r_min must be positive");
  OccupancyPyramid out;
  out.base = Volume<uint32_t>(grid.resolution, 0u);
  const auto& k = simd::kernels();
  const size_t res = static_cast<size_t>(grid.resolution);
  std::atomic<uint64_t> incidences{0}, saturated{0};

  parallel_for_chunks(segments.size(), options.workers, 64, [&](size_t begin, size_t end) {
    Batch b;
    uint64_t local_inc = 0, local_sat = 0;
    for (size_t s = begin; s < end; ++s) {
      const Capsule& c = segments.capsules[segments.ids[s]];
      b.clear();
      traverse(
          options.method, c, grid,
          [&](int x, int y, int z) {
            b.index.push_back(static_cast<uint32_t>((z * res + y) * res + x));
            b.x.push_back(static_cast<float>(x) + 0.5f);
            b.y.push_back(static_cast<float>(y) + 0.5f);
            b.z.push_back(static_cast<float>(z) + 0.5f);
          },
          traversal_radius(c, options.r_min));
      b.occ.resize(b.index.size());
      k.capsule_occupancy(c, options.r_min, b.x.data(), b.y.data(), b.z.data(), b.index.size(), b.occ.data());
      for (size_t i = 0; i < b.index.size(); ++i) {
        local_sat += add_packed(out.base[b.index[i]], b.occ[i]);
      }
      local_inc += b.index.size();
    }
    incidences.fetch_add(local_inc, std::memory_order_relaxed);
    saturated.fetch_add(local_sat, std::memory_order_relaxed);
  });

  out.mips = build_mips(out.base);
  if (stats) {
    stats->incidences = incidences.load();
    stats->saturated = saturated.load();
  }
  return out;
}

std::vector<Volume<float>> build_mips(const Volume<float>& base) {
  std::vector<Volume<float>> mips;
  Volume<float> level0(base.resolution());
  for (size_t i = 0; i < base.size(); ++i) level0[i] = clamp01(base[i]);
  mips.push_back(std::move(level0));
  const auto& k = simd::kernels();
  while (mips.back().resolution() > 1) {
    const Volume<float>& src = mips.back();
    Volume<float> dst(src.resolution() / 2);
    k.mip_reduce(src.data(), src.resolution(), dst.data());
    mips.push_back(std::move(dst));
  }
  return mips;
}

std::vector<Volume<float>> build_mips(const Volume<uint32_t>& base) {
  Volume<float> occ(base.resolution());
  for (size_t i = 0; i < base.size(); ++i) occ[i] = PackedVoxel{base[i]}.occupancy();
  return build_mips(occ);
}

std::vector<std::byte> dump_pyramid(const OccupancyPyramid& p) {
  ByteWriter w;
  w.magic({'V', 'O', 'X', 'P'});
  w.u32(static_cast<uint32_t>(p.resolution()));
  for (uint32_t v : p.base.values()) w.u32(v);
  for (const auto& m : p.mips) {
    for (float v : m.values()) w.f32(v);
  }
  return w.take();
}

OccupancyPyramid load_pyramid(std::span<const std::byte> bytes) {
  ByteReader r(bytes);
  if (!r.expect_magic({'V', 'O', 'X', 'P'})) throw ParseError("missing VOXP magic at byte 0");
  const uint32_t res = r.u32();
  if (!is_power_of_two(static_cast<int>(res)) || res > 1024) {
    throw ParseError("bad resolution at byte 4");
  }
  OccupancyPyramid p;
  p.base = Volume<uint32_t>(static_cast<int>(res));
  for (auto& v : p.base.values()) v = r.u32();
  for (int l = static_cast<int>(res); l >= 1; l /= 2) {
    Volume<float> m(l);
    for (auto& v : m.values()) v = r.f32();
    p.mips.push_back(std::move(m));
  }
  return p;
}

}  // namespace voxline
