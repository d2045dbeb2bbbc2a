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

#include "voxline/lineset.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "voxline/error.hpp"

namespace voxline {

void LineSet::add_polyline(std::span<const Vec3f> points) {
  if (points.size() < 2) throw ParameterError("polyline needs at least 2 vertices");
  if (polyline_offsets.empty()) polyline_offsets.push_back(0);
  vertices.insert(vertices.end(), points.begin(), points.end());
  polyline_offsets.push_back(static_cast<uint32_t>(vertices.size()));
}

std::vector<uint32_t> LineSet::segment_ids() const {
  std::vector<uint32_t> ids;
  ids.reserve(segment_count());
  for (size_t p = 0; p + 1 < polyline_offsets.size(); ++p) {
    for (uint32_t i = polyline_offsets[p]; i + 1 < polyline_offsets[p + 1]; ++i) ids.push_back(i);
  }
  return ids;
}

void LineSet::validate() const {
  if (!(radius > 0.0f) || !std::isfinite(radius)) throw ParameterError("radius must be positive");
  if (polyline_offsets.empty() || polyline_offsets.front() != 0) {
    throw ParameterError("polyline offsets must start at 0");
  }
  if (polyline_offsets.back() != vertices.size()) {
    throw ParameterError("polyline offsets must end with the vertex count");
  }
  for (size_t p = 0; p + 1 < polyline_offsets.size(); ++p) {
    if (polyline_offsets[p + 1] < polyline_offsets[p] + 2) {
      throw ParameterError("polyline " + std::to_string(p) + " has fewer than 2 vertices");
    }
  }
  for (const auto& v : vertices) {
    if (!std::isfinite(v.x) || !std::isfinite(v.y) || !std::isfinite(v.z)) {
      throw ParameterError("non-finite vertex coordinate");
    }
  }
}

namespace {

bool is_zero(const Vec3f& v) { return v.x == 0.0f && v.y == 0.0f && v.z == 0.0f; }

Vec3f unit(const Vec3f& v) {
  // Normalize in double so the result is within 1e-6 of unit length.
  const Vec3d d(v);
  return Vec3f(d / length(d));
}

}  // namespace

ClipNormals compute_clip_normals(const LineSet& lines) {
  ClipNormals out;
  out.normals.resize(lines.vertex_count());
  const auto& v = lines.vertices;
  for (size_t p = 0; p < lines.polyline_count(); ++p) {
    const size_t begin = lines.polyline_offsets[p];
    const size_t end = lines.polyline_offsets[p + 1];

    // Direction of segment s, or of the nearest non-degenerate segment
    // after it, then before it.
    auto segment_dir = [&](size_t s) -> Vec3f {
      for (size_t j = s; j + 1 < end; ++j) {
        const Vec3f d = v[j + 1] - v[j];
        if (!is_zero(d)) return d;
      }
      for (size_t j = s; j-- > begin;) {
        const Vec3f d = v[j + 1] - v[j];
        if (!is_zero(d)) return d;
      }
      throw ParameterError("degenerate polyline " + std::to_string(p));
    };

    for (size_t i = begin; i < end; ++i) {
      Vec3f d;
      if (i == begin) {
        d = segment_dir(begin);
      } else if (i + 1 == end) {
        d = segment_dir(end - 2);
      } else {
        d = v[i + 1] - v[i - 1];
        if (is_zero(d)) d = segment_dir(i);
      }
      out.normals[i] = unit(d);
    }
  }
  return out;
}

Capsule segment_capsule(const LineSet& lines, const ClipNormals& normals, uint32_t id,
                        bool clipping) {
  const auto it = std::upper_bound(lines.polyline_offsets.begin(), lines.polyline_offsets.end(), id);
  const uint32_t poly_end = *it;
  const uint32_t poly_begin = *(it - 1);
  Capsule c;
  c.v0 = lines.vertices[id];
  c.v1 = lines.vertices[id + 1];
  c.r = lines.radius;
  c.n0 = normals.normals[id];
  c.n1 = normals.normals[id + 1];
  c.clip0 = clipping && id != poly_begin;
  c.clip1 = clipping && id + 2 != poly_end;
  return c;
}

LineSet decimate(const LineSet& lines, int n) {
  if (n < 1) throw ParameterError("decimation factor must be >= 1");
  if (n == 1) return lines;
  LineSet out;
  out.radius = lines.radius;
  std::vector<Vec3f> kept;
  for (size_t p = 0; p < lines.polyline_count(); ++p) {
    const size_t begin = lines.polyline_offsets[p];
    const size_t end = lines.polyline_offsets[p + 1];
    kept.clear();
    for (size_t i = begin; i < end; i += static_cast<size_t>(n)) kept.push_back(lines.vertices[i]);
    if ((end - 1 - begin) % static_cast<size_t>(n) != 0) kept.push_back(lines.vertices[end - 1]);
    out.add_polyline(kept);
  }
  return out;
}

double total_arc_length(const LineSet& lines) {
  double total = 0.0;
  for (uint32_t i : lines.segment_ids()) {
    total += length(Vec3d(lines.vertices[i + 1]) - Vec3d(lines.vertices[i]));
  }
  return total;
}

double mean_segment_length(const LineSet& lines) {
  const size_t n = lines.segment_count();
  return n == 0 ? 0.0 : total_arc_length(lines) / static_cast<double>(n);
}

}  // namespace voxline
