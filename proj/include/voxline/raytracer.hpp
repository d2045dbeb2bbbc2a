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
#include <filesystem>
#include <optional>
#include <vector>

#include "voxline/abuffer.hpp"
#include "voxline/camera.hpp"
#include "voxline/culling.hpp"
#include "voxline/geometry.hpp"
#include "voxline/grid.hpp"
#include "voxline/shading.hpp"
#include "voxline/simd/kernels.hpp"

namespace voxline {

/// In-voxel hit key: quantized depth in the high 16 bits, the fragment's
/// slot within its voxel list in the low 16 bits.
struct PackedHit {
  uint32_t key = 0;

  static PackedHit encode(double t, double t_enter, double t_exit, uint32_t slot);
  uint32_t depth() const { return key >> 16; }
  uint32_t slot() const { return key & 0xffffu; }
  auto operator<=>(const PackedHit&) const = default;
};

enum class RenderMode { opaque, transparent };

struct RenderSettings {
  RenderMode mode = RenderMode::opaque;
  double alpha = 1.0;
  int k = 8;
  Vec3d background{0.05, 0.05, 0.06};
  double ambient = 0.4;
  double diffuse = 0.6;
  /// Stop a transparent ray once accumulated opacity reaches 0.999.
  bool early_termination = true;
  unsigned workers = 0;

  /// Throws ParameterError for k outside [1, 64] or alpha outside (0, 1].
  void validate() const;
};

/// Linear RGB pixels plus the primary-hit segment id (-1 for a miss).
struct Image {
  int width = 0;
  int height = 0;
  std::vector<Vec3f> rgb;
  std::vector<int32_t> hit_id;

  Image() = default;
  Image(int w, int h) : width(w), height(h), rgb(static_cast<size_t>(w) * h), hit_id(static_cast<size_t>(w) * h, -1) {}

  /// Row-major sRGB bytes, 3 per pixel.
  std::vector<uint8_t> srgb_bytes() const;
  std::vector<std::byte> to_ppm() const;
  std::vector<std::byte> to_hiti() const;
};

uint8_t linear_to_srgb8(float v);

/// Everything the tracer reads. Geometry is in voxel units.
struct Scene {
  const GridDesc* grid = nullptr;
  const SegmentTable* segments = nullptr;
  const ABuffer* abuffer = nullptr;
  /// Capsules in fragment order, parallel to abuffer->fragments.
  const simd::CapsuleBatch* fragment_capsules = nullptr;
  /// Voxels worth entering: nonempty A-buffer lists.
  const BitPyramid* occupied = nullptr;
  const ShadingVolume* shading = nullptr;
};

simd::CapsuleBatch gather_fragment_capsules(const ABuffer& abuffer, const SegmentTable& segments);

/// Set bits where the A-buffer list is nonempty.
BitPyramid nonempty_voxels(const ABuffer& abuffer, int resolution);

struct VoxelSpan {
  Vec3i voxel;
  double t_enter;
  double t_exit;
};

/// First voxel with its bit set whose ray interval ends after `t_min`,
/// found by descending the bit pyramid in ray order. The ray is in voxel
/// units. t_enter is clamped to t_min.
std::optional<VoxelSpan> first_voxel(const BitPyramid& bits, const Ray& ray, double t_min);

struct TraceStats {
  uint64_t ray_capsule_tests = 0;
  uint64_t voxels_visited = 0;
};

struct OpaqueHit {
  uint32_t segment;
  double t;
  HitPart part;
  Vec3d color;
};

/// `ray` in voxel units with a unit direction.
std::optional<OpaqueHit> trace_opaque(const Scene& scene, const Ray& ray, const RenderSettings& settings,
                                      TraceStats* stats = nullptr);

/// Composited colour including the background.
Vec3d trace_transparent(const Scene& scene, const Ray& ray, const RenderSettings& settings,
                        TraceStats* stats = nullptr);

/// Componentwise absolute value of the unit direction; mid-grey for a
/// zero vector.
Vec3d tangent_color(const Vec3d& d);

/// Lit tangent colour of a hit on segment `id`.
Vec3d shade_hit(const Scene& scene, uint32_t id, const Vec3d& point, HitPart part, const RenderSettings& settings);

/// World-space camera ray mapped to voxel units.
Ray voxel_ray(const GridDesc& grid, const Ray& world);

Image render(const Scene& scene, const Camera& camera, const RenderSettings& settings, TraceStats* stats = nullptr);

}  // namespace voxline
