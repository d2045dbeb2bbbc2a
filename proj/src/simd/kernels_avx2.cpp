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

// AVX2 variants. Each mirrors the operation order of its scalar reference
// in kernels_scalar.cpp / geometry.hpp exactly; do not reassociate.
#include <cmath>
#include <cstring>
#include <limits>

#include "voxline/geometry.hpp"
#include "voxline/simd/kernels.hpp"

#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
#define VOXLINE_HAVE_AVX2 1
#include <immintrin.h>
#endif

namespace voxline::simd {

#ifdef VOXLINE_HAVE_AVX2

namespace {

#define VOXLINE_AVX2 __attribute__((target("avx2")))

VOXLINE_AVX2 inline __m256 neg_ps(__m256 v) { return _mm256_xor_ps(v, _mm256_set1_ps(-0.0f)); }
VOXLINE_AVX2 inline __m256d neg_pd(__m256d v) { return _mm256_xor_pd(v, _mm256_set1_pd(-0.0)); }
VOXLINE_AVX2 inline __m256 clamp01_ps(__m256 v) {
  return _mm256_min_ps(_mm256_max_ps(v, _mm256_setzero_ps()), _mm256_set1_ps(1.0f));
}
VOXLINE_AVX2 inline __m256d dot_pd(__m256d ax, __m256d ay, __m256d az, __m256d bx, __m256d by, __m256d bz) {
  return _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(ax, bx), _mm256_mul_pd(ay, by)), _mm256_mul_pd(az, bz));
}

VOXLINE_AVX2 void occupancy_avx2(const Capsule& c, float r_min, const float* px, const float* py,
                                 const float* pz, size_t n, uint16_t* out) {
  const float r_clamp = simd_max(c.r, r_min);
  const float ratio = c.r / r_clamp;
  const float correction = ratio * ratio;
  const Vec3f d = c.v1 - c.v0;
  const float dd = dot(d, d);

  const __m256 v0x = _mm256_set1_ps(c.v0.x), v0y = _mm256_set1_ps(c.v0.y), v0z = _mm256_set1_ps(c.v0.z);
  const __m256 v1x = _mm256_set1_ps(c.v1.x), v1y = _mm256_set1_ps(c.v1.y), v1z = _mm256_set1_ps(c.v1.z);
  const __m256 dx = _mm256_set1_ps(d.x), dy = _mm256_set1_ps(d.y), dz = _mm256_set1_ps(d.z);
  const __m256 vdd = _mm256_set1_ps(dd);
  const __m256 n0x = _mm256_set1_ps(c.n0.x), n0y = _mm256_set1_ps(c.n0.y), n0z = _mm256_set1_ps(c.n0.z);
  const __m256 n1x = _mm256_set1_ps(c.n1.x), n1y = _mm256_set1_ps(c.n1.y), n1z = _mm256_set1_ps(c.n1.z);
  const __m256 rc = _mm256_set1_ps(r_clamp);
  const __m256 corr = _mm256_set1_ps(correction);
  const __m256 off = _mm256_set1_ps(-std::numeric_limits<float>::infinity());
  const __m256 half = _mm256_set1_ps(0.5f);
  const __m256 scale = _mm256_set1_ps(4096.0f);
  const bool has_length = dd > 0.0f;

  size_t i = 0;
  alignas(32) int32_t fixed[8];
  for (; i + 8 <= n; i += 8) {
    const __m256 x = _mm256_loadu_ps(px + i), y = _mm256_loadu_ps(py + i), z = _mm256_loadu_ps(pz + i);
    const __m256 a0 = _mm256_sub_ps(x, v0x), a1 = _mm256_sub_ps(y, v0y), a2 = _mm256_sub_ps(z, v0z);
    const __m256 b0 = _mm256_sub_ps(x, v1x), b1 = _mm256_sub_ps(y, v1y), b2 = _mm256_sub_ps(z, v1z);
    __m256 h = _mm256_setzero_ps();
    if (has_length) {
      const __m256 pd = _mm256_add_ps(_mm256_add_ps(_mm256_mul_ps(a0, dx), _mm256_mul_ps(a1, dy)),
                                      _mm256_mul_ps(a2, dz));
      h = clamp01_ps(_mm256_div_ps(pd, vdd));
    }
    const __m256 q0 = _mm256_sub_ps(a0, _mm256_mul_ps(dx, h));
    const __m256 q1 = _mm256_sub_ps(a1, _mm256_mul_ps(dy, h));
    const __m256 q2 = _mm256_sub_ps(a2, _mm256_mul_ps(dz, h));
    const __m256 qq = _mm256_add_ps(_mm256_add_ps(_mm256_mul_ps(q0, q0), _mm256_mul_ps(q1, q1)),
                                    _mm256_mul_ps(q2, q2));
    const __m256 sdf_capsule = _mm256_sub_ps(_mm256_sqrt_ps(qq), rc);
    __m256 s0 = off, s1 = off;
    if (c.clip0) {
      s0 = neg_ps(_mm256_add_ps(_mm256_add_ps(_mm256_mul_ps(a0, n0x), _mm256_mul_ps(a1, n0y)),
                                _mm256_mul_ps(a2, n0z)));
    }
    if (c.clip1) {
      s1 = _mm256_add_ps(_mm256_add_ps(_mm256_mul_ps(b0, n1x), _mm256_mul_ps(b1, n1y)), _mm256_mul_ps(b2, n1z));
    }
    const __m256 sdf = _mm256_max_ps(_mm256_max_ps(sdf_capsule, s0), s1);
    const __m256 occ = _mm256_mul_ps(clamp01_ps(_mm256_sub_ps(half, sdf)), corr);
    _mm256_store_si256(reinterpret_cast<__m256i*>(fixed), _mm256_cvtps_epi32(_mm256_mul_ps(occ, scale)));
    for (int k = 0; k < 8; ++k) out[i + k] = static_cast<uint16_t>(fixed[k]);
  }
  if (i < n) scalar_kernels().capsule_occupancy(c, r_min, px + i, py + i, pz + i, n - i, out + i);
}

VOXLINE_AVX2 inline __m256 pair_sums(const float* row) {
  const __m256 lo = _mm256_loadu_ps(row);
  const __m256 hi = _mm256_loadu_ps(row + 8);
  const __m256 even = _mm256_shuffle_ps(lo, hi, _MM_SHUFFLE(2, 0, 2, 0));
  const __m256 odd = _mm256_shuffle_ps(lo, hi, _MM_SHUFFLE(3, 1, 3, 1));
  return _mm256_add_ps(even, odd);
}

VOXLINE_AVX2 void mip_reduce_avx2(const float* src, int src_res, float* dst) {
  const int n = src_res / 2;
  if (n < 8) {
    scalar_kernels().mip_reduce(src, src_res, dst);
    return;
  }
  const size_t s = static_cast<size_t>(src_res);
  const __m256 eighth = _mm256_set1_ps(0.125f);
  for (int z = 0; z < n; ++z) {
    for (int y = 0; y < n; ++y) {
      const float* r00 = src + ((2 * z) * s + 2 * y) * s;
      const float* r10 = r00 + s;
      const float* r01 = r00 + s * s;
      const float* r11 = r01 + s;
      float* out = dst + (static_cast<size_t>(z) * n + y) * n;
      for (int x = 0; x + 8 <= n; x += 8) {
        const int i = 2 * x;
        const __m256 a = pair_sums(r00 + i), b = pair_sums(r10 + i);
        const __m256 c = pair_sums(r01 + i), d = pair_sums(r11 + i);
        const __m256 v = _mm256_mul_ps(_mm256_add_ps(_mm256_add_ps(a, b), _mm256_add_ps(c, d)), eighth);
        // Lanes come out as [0 1 4 5 | 2 3 6 7].
        const __m256d fixed = _mm256_permute4x64_pd(_mm256_castps_pd(v), _MM_SHUFFLE(3, 1, 2, 0));
        _mm256_storeu_ps(out + x, _mm256_castpd_ps(fixed));
      }
    }
  }
}

VOXLINE_AVX2 void erode6_avx2(const float* src, int res, float* dst) {
  const size_t r = static_cast<size_t>(res);
  for (int z = 0; z < res; ++z) {
    for (int y = 0; y < res; ++y) {
      const size_t row = (z * r + y) * r;
      const bool edge = z == 0 || y == 0 || z == res - 1 || y == res - 1;
      if (edge) {
        std::memset(dst + row, 0, r * sizeof(float));
        continue;
      }
      dst[row] = 0.0f;
      dst[row + r - 1] = 0.0f;
      int x = 1;
      for (; x + 8 <= res - 1; x += 8) {
        const size_t i = row + x;
        __m256 m = _mm256_loadu_ps(src + i);
        m = _mm256_min_ps(m, _mm256_loadu_ps(src + i - 1));
        m = _mm256_min_ps(m, _mm256_loadu_ps(src + i + 1));
        m = _mm256_min_ps(m, _mm256_loadu_ps(src + i - r));
        m = _mm256_min_ps(m, _mm256_loadu_ps(src + i + r));
        m = _mm256_min_ps(m, _mm256_loadu_ps(src + i - r * r));
        m = _mm256_min_ps(m, _mm256_loadu_ps(src + i + r * r));
        _mm256_storeu_ps(dst + i, m);
      }
      for (; x < res - 1; ++x) {
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

VOXLINE_AVX2 void ray_capsules_avx2(const Vec3d& origin, const Vec3d& dir, const CapsuleBatch& b, size_t begin,
                                    size_t count, double* t_out, uint8_t* part_out) {
  const size_t n = begin + count;
  const __m256d ox = _mm256_set1_pd(origin.x), oy = _mm256_set1_pd(origin.y), oz = _mm256_set1_pd(origin.z);
  const __m256d dx = _mm256_set1_pd(dir.x), dy = _mm256_set1_pd(dir.y), dz = _mm256_set1_pd(dir.z);
  const __m256d inf = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  const __m256d ninf = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d two = _mm256_set1_pd(2.0);
  alignas(32) double parts[4];

  size_t i = begin;
  for (; i + 4 <= n; i += 4) {
    const __m256d ax = _mm256_loadu_pd(&b.ax[i]), ay = _mm256_loadu_pd(&b.ay[i]), az = _mm256_loadu_pd(&b.az[i]);
    const __m256d bx = _mm256_loadu_pd(&b.bx[i]), by = _mm256_loadu_pd(&b.by[i]), bz = _mm256_loadu_pd(&b.bz[i]);
    const __m256d r = _mm256_loadu_pd(&b.r[i]);

    const __m256d bax = _mm256_sub_pd(bx, ax), bay = _mm256_sub_pd(by, ay), baz = _mm256_sub_pd(bz, az);
    const __m256d oax = _mm256_sub_pd(ox, ax), oay = _mm256_sub_pd(oy, ay), oaz = _mm256_sub_pd(oz, az);
    const __m256d obx = _mm256_sub_pd(ox, bx), oby = _mm256_sub_pd(oy, by), obz = _mm256_sub_pd(oz, bz);
    const __m256d rr = _mm256_mul_pd(r, r);
    const __m256d baba = dot_pd(bax, bay, baz, bax, bay, baz);
    const __m256d bard = dot_pd(bax, bay, baz, dx, dy, dz);
    const __m256d baoa = dot_pd(bax, bay, baz, oax, oay, oaz);
    const __m256d rdoa = dot_pd(dx, dy, dz, oax, oay, oaz);
    const __m256d oaoa = dot_pd(oax, oay, oaz, oax, oay, oaz);
    const __m256d rdob = dot_pd(dx, dy, dz, obx, oby, obz);
    const __m256d obob = dot_pd(obx, oby, obz, obx, oby, obz);

    __m256d enter = inf;
    __m256d exit = ninf;

    {
      const __m256d disc = _mm256_sub_pd(_mm256_mul_pd(rdoa, rdoa), _mm256_sub_pd(oaoa, rr));
      const __m256d m = _mm256_cmp_pd(disc, zero, _CMP_GE_OQ);
      const __m256d s = _mm256_sqrt_pd(disc);
      const __m256d nr = neg_pd(rdoa);
      enter = _mm256_blendv_pd(enter, _mm256_min_pd(enter, _mm256_sub_pd(nr, s)), m);
      exit = _mm256_blendv_pd(exit, _mm256_max_pd(exit, _mm256_add_pd(nr, s)), m);
    }
    {
      const __m256d disc = _mm256_sub_pd(_mm256_mul_pd(rdob, rdob), _mm256_sub_pd(obob, rr));
      const __m256d m = _mm256_cmp_pd(disc, zero, _CMP_GE_OQ);
      const __m256d s = _mm256_sqrt_pd(disc);
      const __m256d nr = neg_pd(rdob);
      enter = _mm256_blendv_pd(enter, _mm256_min_pd(enter, _mm256_sub_pd(nr, s)), m);
      exit = _mm256_blendv_pd(exit, _mm256_max_pd(exit, _mm256_add_pd(nr, s)), m);
    }
    {
      const __m256d k2 = _mm256_sub_pd(baba, _mm256_mul_pd(bard, bard));
      const __m256d k1 = _mm256_sub_pd(_mm256_mul_pd(baba, rdoa), _mm256_mul_pd(baoa, bard));
      const __m256d k0 = _mm256_sub_pd(_mm256_sub_pd(_mm256_mul_pd(baba, oaoa), _mm256_mul_pd(baoa, baoa)),
                                       _mm256_mul_pd(rr, baba));
      const __m256d hc = _mm256_sub_pd(_mm256_mul_pd(k1, k1), _mm256_mul_pd(k2, k0));
      const __m256d mcyl =
          _mm256_and_pd(_mm256_cmp_pd(k2, zero, _CMP_GT_OQ), _mm256_cmp_pd(hc, zero, _CMP_GE_OQ));
      const __m256d sh = _mm256_sqrt_pd(hc);
      const __m256d nk1 = neg_pd(k1);
      const __m256d c_in = _mm256_div_pd(_mm256_sub_pd(nk1, sh), k2);
      const __m256d c_out = _mm256_div_pd(_mm256_add_pd(nk1, sh), k2);
      const __m256d mb = _mm256_cmp_pd(bard, zero, _CMP_NEQ_UQ);
      const __m256d ta = _mm256_div_pd(neg_pd(baoa), bard);
      const __m256d tb = _mm256_div_pd(_mm256_sub_pd(baba, baoa), bard);
      const __m256d s_in = _mm256_blendv_pd(ninf, _mm256_min_pd(ta, tb), mb);
      const __m256d s_out = _mm256_blendv_pd(inf, _mm256_max_pd(ta, tb), mb);
      const __m256d inside_slab =
          _mm256_and_pd(_mm256_cmp_pd(baoa, zero, _CMP_GE_OQ), _mm256_cmp_pd(baoa, baba, _CMP_LE_OQ));
      const __m256d slab_ok = _mm256_or_pd(mb, inside_slab);
      const __m256d body_in = _mm256_max_pd(c_in, s_in);
      const __m256d body_out = _mm256_min_pd(c_out, s_out);
      const __m256d m =
          _mm256_and_pd(_mm256_and_pd(mcyl, slab_ok), _mm256_cmp_pd(body_in, body_out, _CMP_LE_OQ));
      enter = _mm256_blendv_pd(enter, _mm256_min_pd(enter, body_in), m);
      exit = _mm256_blendv_pd(exit, _mm256_max_pd(exit, body_out), m);
    }

    __m256d enter_part = zero;
    __m256d exit_part = zero;
    __m256d blocked = zero;
    {
      const __m256d on = _mm256_cmp_pd(_mm256_loadu_pd(&b.clip0[i]), zero, _CMP_NEQ_UQ);
      const __m256d nx = _mm256_loadu_pd(&b.n0x[i]), ny = _mm256_loadu_pd(&b.n0y[i]), nz = _mm256_loadu_pd(&b.n0z[i]);
      const __m256d dn = dot_pd(dx, dy, dz, nx, ny, nz);
      const __m256d f = dot_pd(oax, oay, oaz, nx, ny, nz);
      const __m256d tp = _mm256_div_pd(neg_pd(f), dn);
      const __m256d pos = _mm256_and_pd(on, _mm256_cmp_pd(dn, zero, _CMP_GT_OQ));
      const __m256d neg = _mm256_and_pd(on, _mm256_cmp_pd(dn, zero, _CMP_LT_OQ));
      const __m256d flat = _mm256_andnot_pd(_mm256_or_pd(pos, neg), on);
      blocked = _mm256_or_pd(blocked, _mm256_and_pd(flat, _mm256_cmp_pd(f, zero, _CMP_LT_OQ)));
      enter_part = _mm256_blendv_pd(enter_part, one, _mm256_and_pd(pos, _mm256_cmp_pd(tp, enter, _CMP_GT_OQ)));
      enter = _mm256_blendv_pd(enter, _mm256_max_pd(enter, tp), pos);
      exit_part = _mm256_blendv_pd(exit_part, one, _mm256_and_pd(neg, _mm256_cmp_pd(tp, exit, _CMP_LT_OQ)));
      exit = _mm256_blendv_pd(exit, _mm256_min_pd(exit, tp), neg);
    }
    {
      const __m256d on = _mm256_cmp_pd(_mm256_loadu_pd(&b.clip1[i]), zero, _CMP_NEQ_UQ);
      const __m256d nx = _mm256_loadu_pd(&b.n1x[i]), ny = _mm256_loadu_pd(&b.n1y[i]), nz = _mm256_loadu_pd(&b.n1z[i]);
      const __m256d dn = dot_pd(dx, dy, dz, nx, ny, nz);
      const __m256d g = dot_pd(obx, oby, obz, nx, ny, nz);
      const __m256d tp = _mm256_div_pd(neg_pd(g), dn);
      const __m256d neg = _mm256_and_pd(on, _mm256_cmp_pd(dn, zero, _CMP_LT_OQ));
      const __m256d pos = _mm256_and_pd(on, _mm256_cmp_pd(dn, zero, _CMP_GT_OQ));
      const __m256d flat = _mm256_andnot_pd(_mm256_or_pd(pos, neg), on);
      blocked = _mm256_or_pd(blocked, _mm256_and_pd(flat, _mm256_cmp_pd(g, zero, _CMP_GT_OQ)));
      enter_part = _mm256_blendv_pd(enter_part, two, _mm256_and_pd(neg, _mm256_cmp_pd(tp, enter, _CMP_GT_OQ)));
      enter = _mm256_blendv_pd(enter, _mm256_max_pd(enter, tp), neg);
      exit_part = _mm256_blendv_pd(exit_part, two, _mm256_and_pd(pos, _mm256_cmp_pd(tp, exit, _CMP_LT_OQ)));
      exit = _mm256_blendv_pd(exit, _mm256_min_pd(exit, tp), pos);
    }

    const __m256d valid = _mm256_andnot_pd(blocked, _mm256_cmp_pd(enter, exit, _CMP_LE_OQ));
    const __m256d enter_ok = _mm256_cmp_pd(enter, zero, _CMP_GE_OQ);
    const __m256d use_enter = _mm256_and_pd(valid, enter_ok);
    const __m256d use_exit =
        _mm256_and_pd(_mm256_andnot_pd(enter_ok, valid), _mm256_cmp_pd(exit, zero, _CMP_GE_OQ));
    __m256d t = _mm256_blendv_pd(inf, enter, use_enter);
    t = _mm256_blendv_pd(t, exit, use_exit);
    __m256d part = _mm256_blendv_pd(zero, enter_part, use_enter);
    part = _mm256_blendv_pd(part, exit_part, use_exit);
    _mm256_storeu_pd(t_out + (i - begin), t);
    _mm256_store_pd(parts, part);
    for (int k = 0; k < 4; ++k) part_out[i - begin + k] = static_cast<uint8_t>(parts[k]);
  }
  for (; i < n; ++i) {
    const CapsuleD c{{b.ax[i], b.ay[i], b.az[i]},    {b.bx[i], b.by[i], b.bz[i]},    b.r[i],
                     {b.n0x[i], b.n0y[i], b.n0z[i]}, {b.n1x[i], b.n1y[i], b.n1z[i]}, b.clip0[i] != 0.0,
                     b.clip1[i] != 0.0};
    const auto hit = ray_capsule(origin, dir, c);
    t_out[i - begin] = hit ? hit->t : std::numeric_limits<double>::infinity();
    part_out[i - begin] = hit ? static_cast<uint8_t>(hit->part) : 0;
  }
}

#undef VOXLINE_AVX2

}  // namespace

const KernelTable* avx2_kernels() {
  static const KernelTable table{Isa::avx2, occupancy_avx2, mip_reduce_avx2, erode6_avx2, ray_capsules_avx2};
  return __builtin_cpu_supports("avx2") ? &table : nullptr;
}

#else

const KernelTable* avx2_kernels() { return nullptr; }

#endif

}  // namespace voxline::simd
