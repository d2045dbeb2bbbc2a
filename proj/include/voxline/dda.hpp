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

// Ordered voxel walk along a ray (Amanatides-Woo) with exact per-voxel
// parameter intervals.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>

#include "voxline/vec3.hpp"

namespace voxline {

/// Parameter interval in which the ray lies inside the box [lo, hi].
/// Empty when the ray misses the box.
inline std::optional<std::pair<double, double>> ray_box(const Vec3d& o, const Vec3d& d, const Vec3d& lo,
                                                        const Vec3d& hi) {
  double t0 = -std::numeric_limits<double>::infinity();
  double t1 = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 3; ++a) {
    if (d[a] == 0.0) {
      if (o[a] < lo[a] || o[a] > hi[a]) return std::nullopt;
      continue;
    }
    double ta = (lo[a] - o[a]) / d[a];
    double tb = (hi[a] - o[a]) / d[a];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
  }
  if (t0 > t1) return std::nullopt;
  return std::make_pair(t0, t1);
}

/// Walks the voxels of a `res`^3 unit grid pierced by o + t d for t in
/// [t_begin, t_end], in order. Calls f(x, y, z, t_enter, t_exit) and stops
/// when it returns false. Axes whose boundaries are crossed at the same t
/// step together.
template <typename F>
void march_voxels(const Vec3d& o, const Vec3d& d, double t_begin, double t_end, int res, F&& f) {
  const double n = res;
  const auto span = ray_box(o, d, Vec3d(0, 0, 0), Vec3d(n, n, n));
  if (!span) return;
  double t = std::max(t_begin, span->first);
  const double t_stop = std::min(t_end, span->second);
  if (t > t_stop) return;
  int cell[3], step[3];
  double t_next[3];
  for (int a = 0; a < 3; ++a) {
    const double p = o[a] + d[a] * t;
    cell[a] = std::clamp(static_cast<int>(std::floor(p)), 0, res - 1);
    if (d[a] > 0.0) {
      step[a] = 1;
      t_next[a] = (cell[a] + 1 - o[a]) / d[a];
    } else if (d[a] < 0.0) {
      step[a] = -1;
      t_next[a] = (cell[a] - o[a]) / d[a];
    } else {
      step[a] = 0;
      t_next[a] = std::numeric_limits<double>::infinity();
    }
  }
  for (;;) {
    const double tn = std::min({t_next[0], t_next[1], t_next[2]});
    const double t_exit = std::min(tn, t_stop);
    if (!f(cell[0], cell[1], cell[2], t, t_exit)) return;
    if (tn >= t_stop) return;
    for (int a = 0; a < 3; ++a) {
      if (t_next[a] == tn) {
        cell[a] += step[a];
        if (cell[a] < 0 || cell[a] >= res) return;
        t_next[a] = (cell[a] + (step[a] > 0 ? 1 : 0) - o[a]) / d[a];
      }
    }
    t = tn;
  }
}

}  // namespace voxline
