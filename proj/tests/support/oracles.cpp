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


#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "voxline/fixtures.hpp"

namespace voxline::testing {

namespace {

double point_box_distance(const Vec3d& p, const Vec3d& lo, const Vec3d& hi) {
  double s = 0.0;
  for (int a = 0; a < 3; ++a) {
    const double e = std::max({lo[a] - p[a], 0.0, p[a] - hi[a]});
    s += e * e;
  }
  return std::sqrt(s);
}

}  // namespace

double segment_box_distance(const Vec3d& a, const Vec3d& b, const Vec3d& lo, const Vec3d& hi) {
  const auto f = [&](double s) { return point_box_distance(a + (b - a) * s, lo, hi); };
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x0 = 0.0, x3 = 1.0;
  double x1 = x3 - g * (x3 - x0), x2 = x0 + g * (x3 - x0);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < 200 && x3 - x0 > 1e-15; ++i) {
    if (f1 <= f2) {
      x3 = x2;
      x2 = x1;
      f2 = f1;
      x1 = x3 - g * (x3 - x0);
      f1 = f(x1);
    } else {
      x0 = x1;
      x1 = x2;
      f1 = f2;
      x2 = x0 + g * (x3 - x0);
      f2 = f(x2);
    }
  }
  return std::min({f(0.0), f(1.0), f1, f2});
}

VoxelSet exact_capsule_voxels(const Vec3d& a, const Vec3d& b, double r, int res) {
  VoxelSet out;
  int lo[3], hi[3];
  for (int ax = 0; ax < 3; ++ax) {
    lo[ax] = std::max(0, static_cast<int>(std::floor(std::min(a[ax], b[ax]) - r)) - 1);
    hi[ax] = std::min(res - 1, static_cast<int>(std::floor(std::max(a[ax], b[ax]) + r)) + 1);
  }
  for (int z = lo[2]; z <= hi[2]; ++z) {
    for (int y = lo[1]; y <= hi[1]; ++y) {
      for (int x = lo[0]; x <= hi[0]; ++x) {
        const Vec3d vlo(x, y, z);
        if (segment_box_distance(a, b, vlo, vlo + Vec3d(1, 1, 1)) <= r) out.insert({x, y, z});
      }
    }
  }
  return out;
}

VoxelSet sampled_segment_voxels(const Vec3d& a, const Vec3d& b, int res, int samples) {
  VoxelSet out;
  for (int i = 0; i <= samples; ++i) {
    const Vec3d p = a + (b - a) * (static_cast<double>(i) / samples);
    const int x = static_cast<int>(std::floor(p.x)), y = static_cast<int>(std::floor(p.y)),
              z = static_cast<int>(std::floor(p.z));
    if (x >= 0 && y >= 0 && z >= 0 && x < res && y < res && z < res) out.insert({x, y, z});
  }
  return out;
}

std::optional<std::pair<uint32_t, double>> brute_nearest(const SegmentTable& segments, const Ray& ray) {
  std::optional<std::pair<uint32_t, double>> best;
  for (uint32_t id : segments.ids) {
    const auto h = ray_capsule(ray.origin, ray.dir, segments.capsules_d[id]);
    if (!h) continue;
    if (!best || h->t < best->second || (h->t == best->second && id < best->first)) best = {{id, h->t}};
  }
  return best;
}

Vec3d brute_composite(const Scene& scene, const Ray& ray, const RenderSettings& settings) {
  struct Hit {
    double t;
    uint32_t id;
    HitPart part;
  };
  std::vector<Hit> hits;
  for (uint32_t id : scene.segments->ids) {
    const auto h = ray_capsule(ray.origin, ray.dir, scene.segments->capsules_d[id]);
    if (h) hits.push_back({h->t, id, h->part});
  }
  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) { return a.t < b.t || (a.t == b.t && a.id < b.id); });
  Vec3d color(0, 0, 0);
  double acc = 0.0;
  for (const Hit& h : hits) {
    const Vec3d c = shade_hit(scene, h.id, ray.origin + ray.dir * h.t, h.part, settings);
    color += c * ((1.0 - acc) * settings.alpha);
    acc += (1.0 - acc) * settings.alpha;
  }
  return color + settings.background * (1.0 - acc);
}

std::vector<int32_t> brute_hit_ids(const SegmentTable& segments, const GridDesc& grid, const Camera& camera) {
  std::vector<int32_t> ids(static_cast<size_t>(camera.width) * camera.height, -1);
  for (int y = 0; y < camera.height; ++y) {
    for (int x = 0; x < camera.width; ++x) {
      const auto hit = brute_nearest(segments, voxel_ray(grid, camera.pixel_ray(x, y)));
      if (hit) ids[static_cast<size_t>(y) * camera.width + x] = static_cast<int32_t>(hit->first);
    }
  }
  return ids;
}

std::optional<VoxelSpan> naive_first_voxel(const BitPyramid& bits, const Ray& ray, double t_min) {
  std::optional<VoxelSpan> best;
  const auto& base = bits.levels[0];
  for (size_t i = 0; i < base.size(); ++i) {
    if (!base[i]) continue;
    const Vec3i v = base.coord(i);
    const Vec3d lo(v);
    // Slab test written out independently of the library's ray_box.
    double t0 = -std::numeric_limits<double>::infinity(), t1 = std::numeric_limits<double>::infinity();
    bool miss = false;
    for (int a = 0; a < 3 && !miss; ++a) {
      if (ray.dir[a] == 0.0) {
        miss = ray.origin[a] < lo[a] || ray.origin[a] > lo[a] + 1.0;
        continue;
      }
      const double ta = (lo[a] - ray.origin[a]) / ray.dir[a];
      const double tb = (lo[a] + 1.0 - ray.origin[a]) / ray.dir[a];
      t0 = std::max(t0, std::min(ta, tb));
      t1 = std::min(t1, std::max(ta, tb));
    }
    if (miss) continue;
    const double enter = std::max(t0, t_min);
    if (!(t1 > enter)) continue;
    if (!best || enter < best->t_enter) best = VoxelSpan{v, enter, t1};
  }
  return best;
}

std::vector<std::vector<uint32_t>> voxel_lists(const ABuffer& buffer) {
  std::vector<std::vector<uint32_t>> out(buffer.voxel_count());
  for (size_t v = 0; v < buffer.voxel_count(); ++v) {
    const auto s = buffer.voxel(v);
    out[v].assign(s.begin(), s.end());
    std::sort(out[v].begin(), out[v].end());
  }
  return out;
}

LineSet random_lines(uint64_t seed, int polylines, int steps, float step_length, float box, float radius) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  std::normal_distribution<float> n(0.0f, 1.0f);
  LineSet out;
  out.radius = radius;
  for (int p = 0; p < polylines; ++p) {
    std::vector<Vec3f> pts;
    Vec3f x(u(rng) * box, u(rng) * box, u(rng) * box);
    Vec3f d = normalize(Vec3f(n(rng), n(rng), n(rng)));
    pts.push_back(x);
    for (int s = 0; s < steps; ++s) {
      d = normalize(d + Vec3f(n(rng), n(rng), n(rng)) * 0.4f);
      Vec3f next = x + d * step_length;
      for (int a = 0; a < 3; ++a) {
        if (next[a] < 0.0f || next[a] > box) {
          d[a] = -d[a];
          next[a] = x[a] + d[a] * step_length;
        }
      }
      x = next;
      pts.push_back(x);
    }
    out.add_polyline(pts);
  }
  return out;
}

Rendered render_lines(LineSet lines, const PipelineConfig& config) {
  Rendered r{prepare_geometry(std::move(lines), config), {}, {}, {}};
  r.camera = config_camera(r.geometry, config);
  r.state = prepare_frame(r.geometry, r.camera, config, &r.frame.stats);
  TraceStats ts;
  r.frame.image = render(r.state.scene(r.geometry), r.camera, config.render_settings(), &ts);
  r.frame.stats.ray_capsule_tests = ts.ray_capsule_tests;
  r.frame.stats.voxels_visited = ts.voxels_visited;
  return r;
}

Rendered render_lines(LineSet lines, const PipelineConfig& config, const Camera& camera) {
  Rendered r{prepare_geometry(std::move(lines), config), camera, {}, {}};
  r.state = prepare_frame(r.geometry, r.camera, config, &r.frame.stats);
  TraceStats ts;
  r.frame.image = render(r.state.scene(r.geometry), r.camera, config.render_settings(), &ts);
  r.frame.stats.ray_capsule_tests = ts.ray_capsule_tests;
  r.frame.stats.voxels_visited = ts.voxels_visited;
  return r;
}

uint64_t fnv1a(std::span<const std::byte> bytes) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (std::byte b : bytes) {
    h ^= static_cast<uint8_t>(b);
    h *= 0x100000001b3ull;
  }
  return h;
}

uint64_t fnv1a(std::span<const uint8_t> bytes) { return fnv1a(std::as_bytes(bytes)); }

Camera random_pose(const GridDesc& grid, uint64_t seed, int width, int height) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> az(-3.14159, 3.14159), el(-1.2, 1.2), dist(1.2, 2.0);
  const Vec3d centre = (grid.world_min + grid.world_max()) * 0.5;
  const double extent = grid.resolution * grid.voxel_size;
  return orbit_camera(centre, dist(rng) * extent, az(rng), el(rng), 0.8, width, height);
}

}  // namespace voxline::testing
