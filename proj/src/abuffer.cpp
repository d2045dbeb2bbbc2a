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

#include "voxline/abuffer.hpp"

#include <algorithm>
#include <atomic>
#include <string>

#include "binary_io.hpp"
#include "voxline/error.hpp"
#include "voxline/parallel.hpp"

namespace voxline {

namespace {

uint32_t spread_bits(uint32_t v) {
  v &= 0x3ffu;
  v = (v | (v << 16)) & 0x030000ffu;
  v = (v | (v << 8)) & 0x0300f00fu;
  v = (v | (v << 4)) & 0x030c30c3u;
  v = (v | (v << 2)) & 0x09249249u;
  return v;
}

uint32_t compact_bits(uint32_t v) {
  v &= 0x09249249u;
  v = (v | (v >> 2)) & 0x030c30c3u;
  v = (v | (v >> 4)) & 0x0300f00fu;
  v = (v | (v >> 8)) & 0x030000ffu;
  v = (v | (v >> 16)) & 0x3ffu;
  return v;
}

}  // namespace

uint32_t morton_encode(const Vec3i& c) {
  for (int a = 0; a < 3; ++a) {
    if (c[a] < 0 || c[a] >= 1024) throw ParameterError("morton coordinate out of range");
  }
  return spread_bits(static_cast<uint32_t>(c.x)) | (spread_bits(static_cast<uint32_t>(c.y)) << 1) |
         (spread_bits(static_cast<uint32_t>(c.z)) << 2);
}

Vec3i morton_decode(uint32_t code) {
  return {static_cast<int32_t>(compact_bits(code)), static_cast<int32_t>(compact_bits(code >> 1)),
          static_cast<int32_t>(compact_bits(code >> 2))};
}

OffsetTable scan_offsets(std::span<const uint32_t> counts, uint64_t capacity) {
  OffsetTable t;
  t.offsets.resize(counts.size());
  uint64_t sum = 0;
  for (size_t i = 0; i < counts.size(); ++i) {
    t.offsets[i] = static_cast<uint32_t>(sum);
    sum += counts[i];
    if (sum > capacity) {
      throw ParameterError("fragment total exceeds capacity " + std::to_string(capacity));
    }
  }
  t.total = sum;
  return t;
}

namespace {

std::vector<uint32_t> slice_counts(const OccupancyPyramid& pyramid, const CullingPyramid* culling) {
  std::vector<uint32_t> counts(pyramid.base.size());
  for (size_t i = 0; i < counts.size(); ++i) {
    const bool keep = !culling || culling->levels[0][i] != 0;
    counts[i] = keep ? pyramid.count(i) : 0;
  }
  return counts;
}

struct Fill {
  ABuffer buffer;
  std::vector<uint32_t> cursor;
};

Fill allocate(std::vector<uint32_t> counts) {
  const OffsetTable t = scan_offsets(counts);
  Fill f;
  f.buffer.fragments.assign(t.total, 0);
  f.buffer.start = t.offsets;
  f.buffer.count = std::move(counts);
  f.cursor = t.offsets;
  return f;
}

// Shared by VSV and VCSV. `culling` restricts both the segments and the
// voxels written.
ABuffer second_pass(const SegmentTable& segments, const GridDesc& grid, const OccupancyPyramid& pyramid,
                    const CullingPyramid* culling, const VoxelizeOptions& options, ABufferStats* stats) {
  if (pyramid.resolution() != grid.resolution) throw ParameterError("pyramid does not match grid");
  Fill f = allocate(slice_counts(pyramid, culling));
  const size_t res = static_cast<size_t>(grid.resolution);
  std::atomic<uint64_t> writes{0}, dropped{0}, culled{0};

  parallel_for_chunks(segments.size(), options.workers, 64, [&](size_t begin, size_t end) {
    uint64_t w = 0, d = 0, c = 0;
    for (size_t s = begin; s < end; ++s) {
      const uint32_t id = segments.ids[s];
      const Capsule& cap = segments.capsules[id];
      const double r = traversal_radius(cap, options.r_min);
      if (culling) {
        const auto box = detail::capsule_box(Vec3d(cap.v0), Vec3d(cap.v1), r, grid.resolution);
        if (box.empty() || !any_set_in_box(*culling, box.lo, box.hi)) {
          ++c;
          continue;
        }
      }
      traverse(
          options.method, cap, grid,
          [&](int x, int y, int z) {
            const size_t v = (z * res + y) * res + x;
            if (culling && culling->levels[0][v] == 0) return;
            const uint32_t slot = std::atomic_ref<uint32_t>(f.cursor[v]).fetch_add(1, std::memory_order_relaxed);
            if (slot >= f.buffer.start[v] + f.buffer.count[v]) {
              ++d;
              return;
            }
            f.buffer.fragments[slot] = id;
            ++w;
          },
          r);
    }
    writes += w;
    dropped += d;
    culled += c;
  });

  if (stats) {
    uint64_t updates = 0;
    for (size_t i = 0; i < pyramid.base.size(); ++i) updates += pyramid.count(i);
    stats->count_updates = updates;
    stats->fragment_writes = writes.load();
    stats->fragment_reads = 0;
    stats->sort_passes = 0;
    stats->dropped = dropped.load();
    stats->segments_culled = culled.load();
  }
  return std::move(f.buffer);
}

}  // namespace

OffsetTable scan_offsets(const OccupancyPyramid& pyramid, const CullingPyramid* culling, uint64_t capacity) {
  return scan_offsets(slice_counts(pyramid, culling), capacity);
}

ABuffer build_vsv(const SegmentTable& segments, const GridDesc& grid, const OccupancyPyramid& pyramid,
                  const VoxelizeOptions& options, ABufferStats* stats) {
  return second_pass(segments, grid, pyramid, nullptr, options, stats);
}

ABuffer build_vcsv(const SegmentTable& segments, const GridDesc& grid, const OccupancyPyramid& pyramid,
                   const CullingPyramid& culling, const VoxelizeOptions& options, ABufferStats* stats) {
  if (culling.resolution() != grid.resolution) throw ParameterError("culling pyramid does not match grid");
  return second_pass(segments, grid, pyramid, &culling, options, stats);
}

namespace {

struct KeyedFragment {
  uint32_t code;
  uint32_t id;
};

// Stable LSD radix sort on the 30-bit code, 8 bits per pass.
int radix_sort(std::vector<KeyedFragment>& items) {
  std::vector<KeyedFragment> tmp(items.size());
  int passes = 0;
  for (int shift = 0; shift < 30; shift += 8) {
    size_t hist[257] = {};
    for (const auto& it : items) ++hist[((it.code >> shift) & 0xffu) + 1];
    for (int b = 0; b < 256; ++b) hist[b + 1] += hist[b];
    for (const auto& it : items) tmp[hist[(it.code >> shift) & 0xffu]++] = it;
    items.swap(tmp);
    ++passes;
  }
  return passes;
}

}  // namespace

ABuffer build_vss(const SegmentTable& segments, const GridDesc& grid, const VoxelizeOptions& options,
                  ABufferStats* stats) {
  const size_t res = static_cast<size_t>(grid.resolution);
  constexpr size_t kChunk = 64;
  const size_t chunks = (segments.size() + kChunk - 1) / kChunk;
  std::vector<std::vector<KeyedFragment>> emitted(chunks);
  parallel_for_chunks(segments.size(), options.workers, kChunk, [&](size_t begin, size_t end) {
    auto& out = emitted[begin / kChunk];
    for (size_t s = begin; s < end; ++s) {
      const uint32_t id = segments.ids[s];
      const Capsule& cap = segments.capsules[id];
      traverse(
          options.method, cap, grid,
          [&](int x, int y, int z) { out.push_back({morton_encode({x, y, z}), id}); },
          traversal_radius(cap, options.r_min));
    }
  });
  std::vector<KeyedFragment> items;
  for (auto& e : emitted) items.insert(items.end(), e.begin(), e.end());
  const uint64_t n = items.size();
  const int passes = radix_sort(items);

  ABuffer buf;
  buf.start.assign(res * res * res, 0);
  buf.count.assign(res * res * res, 0);
  buf.fragments.resize(n);
  for (size_t i = 0; i < n;) {
    size_t j = i;
    while (j < n && items[j].code == items[i].code) ++j;
    const Vec3i c = morton_decode(items[i].code);
    const size_t v = (c.z * res + c.y) * res + c.x;
    buf.start[v] = static_cast<uint32_t>(i);
    buf.count[v] = static_cast<uint32_t>(j - i);
    i = j;
  }
  for (size_t i = 0; i < n; ++i) buf.fragments[i] = items[i].id;

  if (stats) {
    // Emission writes, per-pass read+write, run scan reads, id extraction writes.
    stats->count_updates = 0;
    stats->fragment_writes = n + passes * n + n;
    stats->fragment_reads = passes * n + n;
    stats->sort_passes = static_cast<uint64_t>(passes);
    stats->dropped = 0;
    stats->segments_culled = 0;
  }
  return buf;
}

void ABuffer::canonicalize(unsigned workers) {
  parallel_for(count.size(), workers, [&](size_t v) {
    if (count[v] > 1) {
      auto* b = fragments.data() + start[v];
      std::sort(b, b + count[v]);
    }
  });
}

std::vector<std::byte> dump_abuffer(const ABuffer& buf) {
  ByteWriter w;
  w.magic({'A', 'B', 'U', 'F'});
  w.u32(static_cast<uint32_t>(buf.voxel_count()));
  uint32_t offset = 0;
  for (size_t v = 0; v < buf.voxel_count(); ++v) {
    w.u32(offset);
    offset += buf.count[v];
  }
  w.u32(offset);
  for (size_t v = 0; v < buf.voxel_count(); ++v) {
    for (uint32_t id : buf.voxel(v)) w.u32(id);
  }
  return w.take();
}

}  // namespace voxline
