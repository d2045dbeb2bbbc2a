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
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "voxline/vec3.hpp"

namespace voxline {

/// A set of non-branching polylines rendered as tubes of one shared radius.
///
/// Segment ids are vertex indices: segment `i` joins vertex `i` and `i + 1`
/// and exists only when both vertices belong to the same polyline.
struct LineSet {
  std::vector<Vec3f> vertices;
  /// Start index of each polyline into `vertices`, followed by a sentinel
  /// equal to `vertices.size()`.
  std::vector<uint32_t> polyline_offsets{0};
  float radius = 1.0f;

  size_t vertex_count() const { return vertices.size(); }
  size_t polyline_count() const { return polyline_offsets.empty() ? 0 : polyline_offsets.size() - 1; }
  size_t segment_count() const { return vertex_count() - polyline_count(); }

  /// Appends a polyline; throws ParameterError for fewer than two vertices.
  void add_polyline(std::span<const Vec3f> points);

  /// Segment ids in increasing order.
  std::vector<uint32_t> segment_ids() const;

  /// Throws ParameterError on any violated invariant.
  void validate() const;

  bool operator==(const LineSet&) const = default;
};

/// One unit tangent per vertex, used as clip-plane normals.
struct ClipNormals {
  std::vector<Vec3f> normals;
};

/// Line segment with radius and two optional clip planes through its
/// endpoints. Plane 0 keeps `(p - v0) . n0 >= 0`, plane 1 keeps
/// `(p - v1) . n1 <= 0`.
template <typename T>
struct BasicCapsule {
  Vec3<T> v0, v1;
  T r{};
  Vec3<T> n0, n1;
  bool clip0 = true;
  bool clip1 = true;

  template <typename U>
  explicit operator BasicCapsule<U>() const {
    return {Vec3<U>(v0), Vec3<U>(v1), static_cast<U>(r), Vec3<U>(n0), Vec3<U>(n1), clip0, clip1};
  }
};

using Capsule = BasicCapsule<float>;
using CapsuleD = BasicCapsule<double>;

/// Central differences at interior vertices, one-sided at polyline ends.
/// Zero differences fall back to the nearest non-degenerate segment
/// direction; throws ParameterError("degenerate polyline") if none exists.
ClipNormals compute_clip_normals(const LineSet& lines);

/// Capsule for segment `id`. Clip planes are applied only at interior
/// polyline vertices, so open polyline ends keep their round caps.
Capsule segment_capsule(const LineSet& lines, const ClipNormals& normals, uint32_t id,
                        bool clipping = true);

/// Keeps vertices 0, n, 2n, ... of each polyline plus its last vertex.
LineSet decimate(const LineSet& lines, int n);

double total_arc_length(const LineSet& lines);
double mean_segment_length(const LineSet& lines);

// ---------------------------------------------------------------------------
// File formats

enum class LineSetFormat { text, binary };

LineSet parse_lns_text(std::string_view text);
LineSet parse_lns_binary(std::span<const std::byte> bytes);
std::string to_lns_text(const LineSet& lines);
std::vector<std::byte> to_lns_binary(const LineSet& lines);

/// Binary when the file starts with the `LNS1` magic, text otherwise.
LineSetFormat detect_format(const std::filesystem::path& path);
LineSet load_lineset(const std::filesystem::path& path, LineSetFormat format);
LineSet load_lineset(const std::filesystem::path& path);
void save_lineset(const std::filesystem::path& path, const LineSet& lines, LineSetFormat format);

// ---------------------------------------------------------------------------
// Procedural corpora

enum class GeneratorKind { helix, random_streamlines, grid_diagonals };

struct GeneratorParams {
  GeneratorKind kind = GeneratorKind::helix;
  float radius = 0.05f;
  // helix
  float turns = 2.0f;
  int vertices = 100;
  float helix_radius = 1.0f;
  float pitch = 1.0f;
  // random_streamlines
  int polylines = 200;
  int steps = 40;
  float segment_length = 0.25f;
  float box = 8.0f;
  float curvature = 0.35f;
  // grid_diagonals
  float diagonal_extent = 64.0f;
  int diagonal_count = 16;
  float diagonal_spacing = 3.0f;
};

/// Deterministic for a fixed seed. Throws ParameterError on nonpositive
/// counts or radius.
LineSet generate(const GeneratorParams& params, uint64_t seed);

/// Parses `kind[:key=value,...]`, e.g. `helix:turns=2,vertices=100`.
GeneratorParams parse_generator_spec(std::string_view spec);

}  // namespace voxline
