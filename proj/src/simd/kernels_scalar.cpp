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

#include <algorithm>
#include <cmath>
#include <limits>

#include "voxline/geometry.hpp"
#include "voxline/simd/kernels.hpp"

namespace voxline::simd {

void CapsuleBatch::clear() {
  for (auto* v : {&ax, &ay, &az, &bx, &by, &bz, &r, &n0x, &n0y, &n0z, &n1x, &n1y, &n1z, &clip0, &clip1}) {
    v->clear();
  }
}

void CapsuleBatch::push_back(const CapsuleD& c) {
  ax.push_back(c.v0.x);
  ay.push_back(c.v0.y);
  az.push_back(c.v0.z);
  bx.push_back(c.v1.x);
  by.push_back(c.v1.y);
  bz.push_back(c.v1.z);
  r.push_back(c.r);
  n0x.push_back(c.n0.x);
  n0y.push_back(c.n0.y);
  n0z.push_back(c.n0.z);
  n1x.push_back(c.n1.x);
  n1y.push_back(c.n1.y);
  n1z.push_back(c.n1.z);
  clip0.push_back(c.clip0 ? 1.0 : 0.0);
  clip1.push_back(c.clip1 ? 1.0 : 0.0);
}

namespace {

void occupancy_scalar(const Capsule& c, float r_min, const float* px, const float* py, const float* pz,
                      size_t n, uint16_t* out) {
  for (size_t i = 0; i < n; ++i) {
    const float occ = capsule_occupancy(Vec3f(px[i], py[i], pz[i]), c, r_min);
    out[i] = static_cast<uint16_t>(std::nearbyint(occ * 4096.0f));
  }
}

void mip_reduce_scalar(const float* src, int src_res, float* dst) {
  const int n = src_res / 2;
  const size_t s = static_cast<size_t>(src_res);
  for (int z = 0; z < n; ++z) {
    for (int y = 0; y < n; ++y) {
      const float* r00 = src + ((2 * z) * s + 2 * y) * s;
      const float* r10 = r00 + s;
      const float* r01 = r00 + s * s;
      const float* r11 = r01 + s;
      float* out = dst + (static_cast<size_t>(z) * n + y) * n;
      for (int x = 0; x < n; ++x) {
        const int i = 2 * x;
        const float a = r00[i] + r00[i + 1];
        const float b = r10[i] + r10[i + 1];
        const float c = r01[i] + r01[i + 1];
        const float d = r11[i] + r11[i + 1];
        out[x] = ((a + b) + (c + d)) * 0.125f;
      }
    }
  }
}

void erode6_scalar(const float* src, int res, float* dst) {
  const size_t r = static_cast<size_t>(res);
  for (int z = 0; z < res; ++z) {
    for (int y = 0; y < res; ++y) {
      const size_t row = (z * r + y) * r;
      const bool edge = z == 0 || y == 0 || z == res - 1 || y == res - 1;
      for (int x = 0; x < res; ++x) {
        if (edge || x == 0 || x == res - 1) {
          dst[row + x] = 0.0f;
          continue;
        }
        const size_t i = row + x;
        float m = src[i];
        m = simd_min(m, src[i - 1]);
        m = simd_min(m, src[i + 1]);
        m = simd_min(m, src[i - r]);
        m = simd_min(m, src[i + r]);
        m = simd_min(m, src[i - r * r]);
        m = simd_min(m, src[i + r * r]);
        dst[i] = m;
      }
    }
  }
}

void ray_capsules_scalar(const Vec3d& origin, const Vec3d& dir, const CapsuleBatch& b, size_t begin, size_t n,
                         double* t_out, uint8_t* part_out) {
  for (size_t i = begin; i < begin + n; ++i) {
    const CapsuleD c{{b.ax[i], b.ay[i], b.az[i]},    {b.bx[i], b.by[i], b.bz[i]},    b.r[i],
                     {b.n0x[i], b.n0y[i], b.n0z[i]}, {b.n1x[i], b.n1y[i], b.n1z[i]}, b.clip0[i] != 0.0,
                     b.clip1[i] != 0.0};
    const auto hit = ray_capsule(origin, dir, c);
    t_out[i - begin] = hit ? hit->t : std::numeric_limits<double>::infinity();
    part_out[i - begin] = hit ? static_cast<uint8_t>(hit->part) : 0;
  }
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{Isa::scalar, occupancy_scalar, mip_reduce_scalar, erode6_scalar,
                                 ray_capsules_scalar};
  return table;
}

}  // namespace voxline::simd
