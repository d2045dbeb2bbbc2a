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

#include "voxline/shading.hpp"

#include <algorithm>
#include <cmath>

#include "voxline/parallel.hpp"

namespace voxline {

ConeSet ConeSet::icosahedral() {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  ConeSet s;
  int i = 0;
  for (double a : {-1.0, 1.0}) {
    for (double b : {-phi, phi}) {
      s.directions[i++] = normalize(Vec3d(0, a, b));
      s.directions[i++] = normalize(Vec3d(a, b, 0));
      s.directions[i++] = normalize(Vec3d(b, 0, a));
    }
  }
  s.half_angle = std::acos(1.0 - 2.0 / 12.0);
  return s;
}

float sample_level(const Volume<float>& level, int base_resolution, const Vec3d& p) {
  const int n = level.resolution();
  const double scale = static_cast<double>(n) / base_resolution;
  int i0[3], i1[3];
  double f[3];
  for (int a = 0; a < 3; ++a) {
    const double q = std::clamp(p[a] * scale - 0.5, 0.0, static_cast<double>(n - 1));
    const double fl = std::floor(q);
    i0[a] = static_cast<int>(fl);
    i1[a] = std::min(i0[a] + 1, n - 1);
    f[a] = q - fl;
  }
  const auto v = [&](int x, int y, int z) { return static_cast<double>(level.at(x, y, z)); };
  const double c00 = v(i0[0], i0[1], i0[2]) * (1 - f[0]) + v(i1[0], i0[1], i0[2]) * f[0];
  const double c10 = v(i0[0], i1[1], i0[2]) * (1 - f[0]) + v(i1[0], i1[1], i0[2]) * f[0];
  const double c01 = v(i0[0], i0[1], i1[2]) * (1 - f[0]) + v(i1[0], i0[1], i1[2]) * f[0];
  const double c11 = v(i0[0], i1[1], i1[2]) * (1 - f[0]) + v(i1[0], i1[1], i1[2]) * f[0];
  const double c0 = c00 * (1 - f[1]) + c10 * f[1];
  const double c1 = c01 * (1 - f[1]) + c11 * f[1];
  return static_cast<float>(c0 * (1 - f[2]) + c1 * f[2]);
}

float cone_trace(const OccupancyPyramid& pyramid, const Vec3d& origin, const Vec3d& dir, double half_angle) {
  const int res = pyramid.resolution();
  const auto inside = [res](const Vec3d& p) {
    return p.x >= 0 && p.y >= 0 && p.z >= 0 && p.x < res && p.y < res && p.z < res;
  };
  if (!inside(origin)) return 0.0f;
  const double spread = 2.0 * std::tan(half_angle);
  const int top = static_cast<int>(pyramid.mips.size()) - 1;
  double occ = 0.0;
  double t = 1.0;
  for (;;) {
    const Vec3d p = origin + dir * t;
    if (!inside(p)) break;
    const double diameter = std::max(1.0, spread * t);
    const double level = std::min(std::log2(diameter), static_cast<double>(top));
    const int l0 = static_cast<int>(std::floor(level));
    const int l1 = std::min(l0 + 1, top);
    const double fl = level - l0;
    double sample = sample_level(pyramid.mips[l0], res, p);
    if (fl > 0.0) sample = sample * (1.0 - fl) + sample_level(pyramid.mips[l1], res, p) * fl;
    occ += (1.0 - occ) * sample;
    if (occ >= kConeSaturation) return 1.0f;
    t += diameter;
  }
  return static_cast<float>(occ);
}

ShadingVolume compute_shading(const OccupancyPyramid& pyramid, const BitPyramid& mask, const GridDesc& grid,
                              const Vec3d& light_dir, unsigned workers, const ConeSet& cones) {
  const int res = grid.resolution;
  ShadingVolume s{Volume<float>(res, 1.0f), Volume<float>(res, 1.0f), normalize(light_dir)};
  const Vec3d to_light = -s.light_dir;
  parallel_for(s.ao.size(), workers, [&](size_t i) {
    if (mask.levels[0][i] == 0) return;
    const Vec3i c = s.ao.coord(i);
    const Vec3d p(c.x + 0.5, c.y + 0.5, c.z + 0.5);
    double occluded = 0.0;
    for (const auto& d : cones.directions) occluded += cones.weight * cone_trace(pyramid, p, d, cones.half_angle);
    s.ao[i] = static_cast<float>(std::clamp(1.0 - occluded, 0.0, 1.0));
    s.shadow[i] = 1.0f - cone_trace(pyramid, p, to_light, kShadowHalfAngle);
  });
  return s;
}

}  // namespace voxline
