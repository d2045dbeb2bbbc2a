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

#include "voxline/raytracer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>

#include "binary_io.hpp"
#include "voxline/dda.hpp"
#include "voxline/error.hpp"
#include "voxline/parallel.hpp"

namespace voxline {

PackedHit PackedHit::encode(double t, double t_enter, double t_exit, uint32_t slot) {
  const double span = t_exit - t_enter;
  double q = span > 0.0 ? std::floor(65535.0 * (t - t_enter) / span) : 0.0;
  q = std::clamp(q, 0.0, 65535.0);
  return {(static_cast<uint32_t>(q) << 16) | (slot & 0xffffu)};
}

void RenderSettings::validate() const {
  if (k < 1 || k > 64) throw ParameterError("k must lie in [1, 64]");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ParameterError("alpha must lie in (0, 1]");
}

uint8_t linear_to_srgb8(float v) {
  const double c = std::clamp(static_cast<double>(v), 0.0, 1.0);
  const double s = c <= 0.0031308 ? 12.92 * c : 1.055 * std::pow(c, 1.0 / 2.4) - 0.055;
  return static_cast<uint8_t>(std::lround(s * 255.0));
}

std::vector<uint8_t> Image::srgb_bytes() const {
  std::vector<uint8_t> out;
  out.reserve(rgb.size() * 3);
  for (const auto& p : rgb) {
    out.push_back(linear_to_srgb8(p.x));
    out.push_back(linear_to_srgb8(p.y));
    out.push_back(linear_to_srgb8(p.z));
  }
  return out;
}

std::vector<std::byte> Image::to_ppm() const {
  const std::string header = "P6\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  std::vector<std::byte> out;
  for (char c : header) out.push_back(static_cast<std::byte>(c));
  for (uint8_t b : srgb_bytes()) out.push_back(static_cast<std::byte>(b));
  return out;
}

std::vector<std::byte> Image::to_hiti() const {
  ByteWriter w;
  w.magic({'H', 'I', 'T', 'I'});
  w.u32(static_cast<uint32_t>(width));
  w.u32(static_cast<uint32_t>(height));
  for (int32_t id : hit_id) w.i32(id);
  return w.take();
}

simd::CapsuleBatch gather_fragment_capsules(const ABuffer& abuffer, const SegmentTable& segments) {
  simd::CapsuleBatch b;
  for (uint32_t id : abuffer.fragments) b.push_back(segments.capsules_d[id]);
  return b;
}

BitPyramid nonempty_voxels(const ABuffer& abuffer, int resolution) {
  Volume<uint8_t> base(resolution, 0);
  for (size_t v = 0; v < abuffer.voxel_count(); ++v) base[v] = abuffer.count[v] > 0 ? 1 : 0;
  return build_bit_pyramid(std::move(base));
}

namespace {

bool descend(const BitPyramid& bits, int level, int x, int y, int z, const Ray& ray, double t_min,
             VoxelSpan& out) {
  if (!bits.bit(level, x, y, z)) return false;
  const double size = static_cast<double>(1 << level);
  const Vec3d lo(x * size, y * size, z * size);
  const auto span = ray_box(ray.origin, ray.dir, lo, lo + Vec3d(size, size, size));
  if (!span) return false;
  const double enter = std::max(span->first, t_min);
  if (!(span->second > enter)) return false;
  if (level == 0) {
    out = {{x, y, z}, enter, span->second};
    return true;
  }
  struct Child {
    double enter;
    int c;
  };
  Child order[8];
  int n = 0;
  for (int c = 0; c < 8; ++c) {
    const int cx = 2 * x + (c & 1), cy = 2 * y + ((c >> 1) & 1), cz = 2 * z + (c >> 2);
    if (!bits.bit(level - 1, cx, cy, cz)) continue;
    const double half = size / 2;
    const Vec3d clo(cx * half, cy * half, cz * half);
    const auto cs = ray_box(ray.origin, ray.dir, clo, clo + Vec3d(half, half, half));
    if (!cs) continue;
    const double ce = std::max(cs->first, t_min);
    if (!(cs->second > ce)) continue;
    order[n++] = {ce, c};
  }
  std::sort(order, order + n, [](const Child& a, const Child& b) {
    return a.enter < b.enter || (a.enter == b.enter && a.c < b.c);
  });
  for (int i = 0; i < n; ++i) {
    const int c = order[i].c;
    if (descend(bits, level - 1, 2 * x + (c & 1), 2 * y + ((c >> 1) & 1), 2 * z + (c >> 2), ray, t_min, out)) {
      return true;
    }
  }
  return false;
}

struct Scratch {
  std::vector<double> t;
  std::vector<uint8_t> part;

  void fit(size_t n) {
    if (t.size() < n) {
      t.resize(n);
      part.resize(n);
    }
  }
};

Scratch& scratch() {
  thread_local Scratch s;
  return s;
}

size_t voxel_index(const Scene& scene, const Vec3i& v) {
  const size_t r = static_cast<size_t>(scene.grid->resolution);
  return (v.z * r + v.y) * r + v.x;
}

}  // namespace

std::optional<VoxelSpan> first_voxel(const BitPyramid& bits, const Ray& ray, double t_min) {
  if (bits.levels.empty()) return std::nullopt;
  VoxelSpan out{};
  if (descend(bits, static_cast<int>(bits.levels.size()) - 1, 0, 0, 0, ray, t_min, out)) return out;
  return std::nullopt;
}

Vec3d tangent_color(const Vec3d& d) {
  const double l = length(d);
  if (!(l > 0.0)) return {0.5, 0.5, 0.5};
  return vabs(d) / l;
}

Vec3d shade_hit(const Scene& scene, uint32_t id, const Vec3d& point, HitPart part, const RenderSettings& settings) {
  const CapsuleD& c = scene.segments->capsules_d[id];
  const Vec3d base = tangent_color(c.v1 - c.v0);
  const Vec3d n = capsule_normal(point, c, part);
  const int res = scene.grid->resolution;
  const double ao = sample_level(scene.shading->ao, res, point);
  const double shadow = sample_level(scene.shading->shadow, res, point);
  const double lambert = std::max(0.0, dot(n, -scene.shading->light_dir));
  return base * (settings.ambient * ao + settings.diffuse * shadow * lambert);
}

std::optional<OpaqueHit> trace_opaque(const Scene& scene, const Ray& ray, const RenderSettings& settings,
                                      TraceStats* stats) {
  const auto& k = simd::kernels();
  Scratch& s = scratch();
  double t = 0.0;
  while (const auto v = first_voxel(*scene.occupied, ray, t)) {
    const size_t idx = voxel_index(scene, v->voxel);
    const uint32_t start = scene.abuffer->start[idx];
    const uint32_t n = scene.abuffer->count[idx];
    s.fit(n);
    k.ray_capsules(ray.origin, ray.dir, *scene.fragment_capsules, start, n, s.t.data(), s.part.data());
    if (stats) {
      ++stats->voxels_visited;
      stats->ray_capsule_tests += n;
    }
    int best = -1;
    uint32_t best_id = 0;
    for (uint32_t i = 0; i < n; ++i) {
      const double th = s.t[i];
      if (!(th >= v->t_enter && th <= v->t_exit)) continue;
      const uint32_t id = scene.abuffer->fragments[start + i];
      if (best < 0 || th < s.t[best] || (th == s.t[best] && id < best_id)) {
        best = static_cast<int>(i);
        best_id = id;
      }
    }
    if (best >= 0) {
      const double th = s.t[best];
      const auto part = static_cast<HitPart>(s.part[best]);
      return OpaqueHit{best_id, th, part, shade_hit(scene, best_id, ray.origin + ray.dir * th, part, settings)};
    }
    t = v->t_exit;
  }
  return std::nullopt;
}

Vec3d trace_transparent(const Scene& scene, const Ray& ray, const RenderSettings& settings, TraceStats* stats) {
  const auto& k = simd::kernels();
  Scratch& s = scratch();
  const double alpha = settings.alpha;
  const size_t kk = static_cast<size_t>(settings.k);
  PackedHit slots[64];
  Vec3d color(0, 0, 0);
  double a = 0.0;
  double t = 0.0;
  while (const auto v = first_voxel(*scene.occupied, ray, t)) {
    const size_t idx = voxel_index(scene, v->voxel);
    const uint32_t start = scene.abuffer->start[idx];
    const uint32_t n = scene.abuffer->count[idx];
    s.fit(n);
    if (stats) ++stats->voxels_visited;
    bool has_floor = false;
    PackedHit floor_key;
    for (;;) {
      k.ray_capsules(ray.origin, ray.dir, *scene.fragment_capsules, start, n, s.t.data(), s.part.data());
      if (stats) stats->ray_capsule_tests += n;
      size_t filled = 0;
      size_t candidates = 0;
      for (uint32_t i = 0; i < n; ++i) {
        const double th = s.t[i];
        if (!(th >= v->t_enter && th < v->t_exit)) continue;
        const PackedHit key = PackedHit::encode(th, v->t_enter, v->t_exit, i);
        if (has_floor && key <= floor_key) continue;
        ++candidates;
        if (filled == kk && !(key < slots[kk - 1])) continue;
        size_t j = filled < kk ? filled++ : kk - 1;
        while (j > 0 && key < slots[j - 1]) {
          slots[j] = slots[j - 1];
          --j;
        }
        slots[j] = key;
      }
      for (size_t j = 0; j < filled; ++j) {
        const uint32_t slot = slots[j].slot();
        const uint32_t id = scene.abuffer->fragments[start + slot];
        const double th = s.t[slot];
        const Vec3d c = shade_hit(scene, id, ray.origin + ray.dir * th, static_cast<HitPart>(s.part[slot]), settings);
        color += c * ((1.0 - a) * alpha);
        a += (1.0 - a) * alpha;
        if (settings.early_termination && a >= 0.999) return color + settings.background * (1.0 - a);
      }
      if (candidates <= kk) break;
      floor_key = slots[kk - 1];
      has_floor = true;
    }
    t = v->t_exit;
  }
  return color + settings.background * (1.0 - a);
}

Ray voxel_ray(const GridDesc& grid, const Ray& world) { return {grid.to_voxel(world.origin), world.dir}; }

Image render(const Scene& scene, const Camera& camera, const RenderSettings& settings, TraceStats* stats) {
  settings.validate();
  Image img(camera.width, camera.height);
  std::atomic<uint64_t> tests{0}, voxels{0};
  parallel_for_chunks(static_cast<size_t>(camera.height), settings.workers, 1, [&](size_t y0, size_t y1) {
    TraceStats local;
    for (size_t y = y0; y < y1; ++y) {
      for (int x = 0; x < camera.width; ++x) {
        const size_t p = y * camera.width + x;
        const Ray ray = voxel_ray(*scene.grid, camera.pixel_ray(x, static_cast<int>(y)));
        if (settings.mode == RenderMode::opaque) {
          const auto hit = trace_opaque(scene, ray, settings, &local);
          img.rgb[p] = Vec3f(hit ? hit->color : settings.background);
          img.hit_id[p] = hit ? static_cast<int32_t>(hit->segment) : -1;
        } else {
          img.rgb[p] = Vec3f(trace_transparent(scene, ray, settings, &local));
        }
      }
    }
    tests += local.ray_capsule_tests;
    voxels += local.voxels_visited;
  });
  if (stats) {
    stats->ray_capsule_tests = tests.load();
    stats->voxels_visited = voxels.load();
  }
  return img;
}

}  // namespace voxline
