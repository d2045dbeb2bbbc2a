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

// Stage orchestration shared by the CLI, the benchmark runner and the
// frame server.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "voxline/abuffer.hpp"
#include "voxline/camera.hpp"
#include "voxline/culling.hpp"
#include "voxline/grid.hpp"
#include "voxline/lineset.hpp"
#include "voxline/raytracer.hpp"
#include "voxline/shading.hpp"
#include "voxline/voxelizer.hpp"

namespace voxline {

enum class Strategy { vss, vsv, vcsv };

std::string_view method_name(Method m);
std::string_view strategy_name(Strategy s);
std::string_view mode_name(RenderMode m);

struct PipelineConfig {
  /// A line-set file, a generator spec such as `helix:turns=3`, or
  /// `fixture:NAME`.
  std::string input = "helix:turns=3,vertices=200,helix_radius=1,pitch=0.8";
  int resolution = 128;
  Method method = Method::capsule;
  Strategy strategy = Strategy::vsv;
  RenderMode mode = RenderMode::opaque;
  double alpha = 1.0;
  int k = 8;
  std::string out = "render";
  unsigned workers = 0;
  uint64_t seed = 1;
  int port = 8080;
  /// Line radius in voxel units; empty to keep the input's own radius.
  std::optional<double> radius = 0.2;
  float r_min = 0.5f;
  int width = 256;
  int height = 256;
  /// Orbit camera around the grid centre; distance in grid extents.
  double azimuth = 0.6;
  double elevation = 0.35;
  double distance = 1.6;
  double fov = 0.8;
  /// Direction the light travels in.
  Vec3d light{-0.3, -1.0, -0.5};
  Vec3d background{0.05, 0.05, 0.06};
  bool clipping = true;
  bool early_termination = true;
  /// Server only: voxelize again for every frame.
  bool revoxelize = false;

  /// Applies one key=value setting. Throws ConfigError for unknown keys or
  /// malformed values.
  void set(std::string_view key, std::string_view value);
  /// Throws ConfigError when the combination is unusable.
  void validate() const;
  RenderSettings render_settings() const;
  VoxelizeOptions voxelize_options() const;

  static const std::vector<std::string>& keys();
};

/// Reads `key = value` lines; blank lines and `#` comments are ignored.
void apply_config_text(PipelineConfig& config, std::string_view text);
void apply_config_file(PipelineConfig& config, const std::filesystem::path& path);

LineSet load_input(const PipelineConfig& config);

/// View-independent state: voxel-space geometry and the occupancy pyramid.
struct Geometry {
  LineSet lines;
  ClipNormals normals;
  GridDesc grid;
  SegmentTable segments;
  OccupancyPyramid pyramid;
  VoxelizeStats voxelize_stats;
  double voxelize_ms = 0.0;
};

Geometry prepare_geometry(LineSet lines, const PipelineConfig& config);

Camera config_camera(const Geometry& geometry, const PipelineConfig& config);

struct FrameStats {
  uint64_t segments = 0;
  uint64_t incidences = 0;
  uint64_t fragments = 0;
  uint64_t fragment_touches = 0;
  uint64_t occupied_voxels = 0;
  uint64_t visible_voxels = 0;
  uint64_t segments_culled = 0;
  uint64_t ray_capsule_tests = 0;
  uint64_t voxels_visited = 0;
  double culled_fraction = 0.0;
  double voxelize_ms = 0.0;
  double cull_ms = 0.0;
  double abuffer_ms = 0.0;
  double shade_ms = 0.0;
  double render_ms = 0.0;

  /// Counters only, one `key=value` per line; timings are left out so the
  /// text is reproducible.
  std::string counters_text() const;
};

/// A-buffer, shading and tracing state for one camera.
struct FrameState {
  std::optional<CullingPyramid> culling;
  ABuffer abuffer;
  simd::CapsuleBatch fragment_capsules;
  BitPyramid occupied;
  ShadingVolume shading;

  Scene scene(const Geometry& geometry) const;
};

FrameState prepare_frame(const Geometry& geometry, const Camera& camera, const PipelineConfig& config,
                         FrameStats* stats = nullptr);

struct Frame {
  Image image;
  FrameStats stats;
};

Frame render_frame(const Geometry& geometry, const Camera& camera, const PipelineConfig& config);

}  // namespace voxline
