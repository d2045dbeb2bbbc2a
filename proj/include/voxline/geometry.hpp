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

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>

#include "voxline/lineset.hpp"
#include "voxline/vec3.hpp"

namespace voxline {

// min/max with the operand semantics of the x86 SIMD min/max instructions
// (second operand returned when the comparison is false). The scalar
// reference paths use these so the vector kernels can match them bit for bit.
template <typename T>
constexpr T simd_max(T a, T b) { return a > b ? a : b; }
template <typename T>
constexpr T simd_min(T a, T b) { return a < b ? a : b; }
template <typename T>
constexpr T clamp01(T x) { return simd_min(simd_max(x, T(0)), T(1)); }

/// Signed distance to a capsule intersected with its enabled clip
/// half-spaces. A zero-length capsule degenerates to a clipped sphere.
template <typename T>
T clipped_capsule_sdf(const Vec3<T>& p, const BasicCapsule<T>& c) {
  const Vec3<T> d = c.v1 - c.v0;
  const Vec3<T> pv0 = p - c.v0;
  const Vec3<T> pv1 = p - c.v1;
  const T dd = dot(d, d);
  const T h = dd > T(0) ? clamp01(dot(pv0, d) / dd) : T(0);
  const Vec3<T> q = pv0 - d * h;
  const T sdf_capsule = std::sqrt(dot(q, q)) - c.r;
  constexpr T kOff = -std::numeric_limits<T>::infinity();
  const T sdf_n0 = c.clip0 ? -dot(pv0, c.n0) : kOff;
  const T sdf_n1 = c.clip1 ? dot(pv1, c.n1) : kOff;
  return simd_max(simd_max(sdf_capsule, sdf_n0), sdf_n1);
}

/// Occupancy fraction of a voxel centred at `p` (voxel units). Radii below
/// `r_min` are clamped up and the result scaled by (r / r_min)^2.
inline float capsule_occupancy(const Vec3f& p, const Capsule& c, float r_min) {
  const float r_clamp = simd_max(c.r, r_min);
  const float ratio = c.r / r_clamp;
  const float correction = ratio * ratio;
  Capsule clamped = c;
  clamped.r = r_clamp;
  const float sdf = clipped_capsule_sdf(p, clamped);
  return clamp01(0.5f - sdf) * correction;
}

/// Which surface of a clipped capsule a ray hit: the rounded tube, or one
/// of the two clip-plane disks.
enum class HitPart : uint8_t { tube = 0, plane0 = 1, plane1 = 2 };

struct CapsuleHit {
  double t;
  HitPart part;
};

/// Smallest t >= 0 at which the ray meets the surface of the clipped
/// capsule. The clipped capsule is convex, so the ray overlaps it in one
/// interval; the result is its entry (or its exit when the origin is inside).
/// `dir` must be unit length.
inline std::optional<CapsuleHit> ray_capsule(const Vec3d& origin, const Vec3d& dir, const CapsuleD& c) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const Vec3d ba = c.v1 - c.v0;
  const Vec3d oa = origin - c.v0;
  const Vec3d ob = origin - c.v1;
  const double rr = c.r * c.r;
  const double baba = dot(ba, ba);
  const double bard = dot(ba, dir);
  const double baoa = dot(ba, oa);
  const double rdoa = dot(dir, oa);
  const double oaoa = dot(oa, oa);
  const double rdob = dot(dir, ob);
  const double obob = dot(ob, ob);

  double enter = kInf;
  double exit = -kInf;

  // End spheres.
  const double disc_a = rdoa * rdoa - (oaoa - rr);
  if (disc_a >= 0.0) {
    const double s = std::sqrt(disc_a);
    enter = simd_min(enter, -rdoa - s);
    exit = simd_max(exit, -rdoa + s);
  }
  const double disc_b = rdob * rdob - (obob - rr);
  if (disc_b >= 0.0) {
    const double s = std::sqrt(disc_b);
    enter = simd_min(enter, -rdob - s);
    exit = simd_max(exit, -rdob + s);
  }

  // Finite cylinder: infinite cylinder interval clipped to the axial slab.
  // A ray parallel to the axis that meets the tube also meets both end
  // spheres, whose hull already spans the body.
  const double k2 = baba - bard * bard;
  const double k1 = baba * rdoa - baoa * bard;
  const double k0 = baba * oaoa - baoa * baoa - rr * baba;
  const double hc = k1 * k1 - k2 * k0;
  if (k2 > 0.0 && hc >= 0.0) {
    const double sh = std::sqrt(hc);
    const double c_in = (-k1 - sh) / k2;
    const double c_out = (-k1 + sh) / k2;
    double s_in = -kInf;
    double s_out = kInf;
    bool slab_ok = true;
    if (bard != 0.0) {
      const double ta = -baoa / bard;
      const double tb = (baba - baoa) / bard;
      s_in = simd_min(ta, tb);
      s_out = simd_max(ta, tb);
    } else {
      slab_ok = baoa >= 0.0 && baoa <= baba;
    }
    const double body_in = simd_max(c_in, s_in);
    const double body_out = simd_min(c_out, s_out);
    if (slab_ok && body_in <= body_out) {
      enter = simd_min(enter, body_in);
      exit = simd_max(exit, body_out);
    }
  }

  HitPart enter_part = HitPart::tube;
  HitPart exit_part = HitPart::tube;
  bool blocked = false;
  if (c.clip0) {
    const double dn = dot(dir, c.n0);
    const double f = dot(oa, c.n0);
    const double tp = -f / dn;
    if (dn > 0.0) {
      if (tp > enter) enter_part = HitPart::plane0;
      enter = simd_max(enter, tp);
    } else if (dn < 0.0) {
      if (tp < exit) exit_part = HitPart::plane0;
      exit = simd_min(exit, tp);
    } else if (f < 0.0) {
      blocked = true;
    }
  }
  if (c.clip1) {
    const double dn = dot(dir, c.n1);
    const double g = dot(ob, c.n1);
    const double tp = -g / dn;
    if (dn < 0.0) {
      if (tp > enter) enter_part = HitPart::plane1;
      enter = simd_max(enter, tp);
    } else if (dn > 0.0) {
      if (tp < exit) exit_part = HitPart::plane1;
      exit = simd_min(exit, tp);
    } else if (g > 0.0) {
      blocked = true;
    }
  }

  if (blocked || !(enter <= exit)) return std::nullopt;
  if (enter >= 0.0) return CapsuleHit{enter, enter_part};
  if (exit >= 0.0) return CapsuleHit{exit, exit_part};
  return std::nullopt;
}

/// Outward surface normal of a clipped capsule at a hit point.
inline Vec3d capsule_normal(const Vec3d& p, const CapsuleD& c, HitPart part) {
  if (part == HitPart::plane0) return -c.n0;
  if (part == HitPart::plane1) return c.n1;
  const Vec3d d = c.v1 - c.v0;
  const double dd = dot(d, d);
  const double h = dd > 0.0 ? clamp01(dot(p - c.v0, d) / dd) : 0.0;
  const Vec3d n = p - (c.v0 + d * h);
  const double l = length(n);
  return l > 0.0 ? n / l : Vec3d(0, 0, 1);
}

}  // namespace voxline
