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

// Data-parallel inner loops of the pipeline. Every kernel has a scalar
// reference and, where the CPU allows, an AVX2 variant that produces
// bit-identical results. The variant is chosen once at runtime.
#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "voxline/lineset.hpp"
#include "voxline/vec3.hpp"

namespace voxline::simd {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);
bool isa_supported(Isa isa);

/// Structure-of-arrays batch of clipped capsules for ray intersection.
/// Clip flags are stored as 0.0 / 1.0.
struct CapsuleBatch {
  std::vector<double> ax, ay, az, bx, by, bz, r;
  std::vector<double> n0x, n0y, n0z, n1x, n1y, n1z, clip0, clip1;

  size_t size() const { return ax.size(); }
  void clear();
  void push_back(const CapsuleD& c);
};

struct KernelTable {
  Isa isa;

  /// Fixed-point (x4096) capsule_occupancy at n voxel centres.
  void (*capsule_occupancy)(const Capsule& c, float r_min, const float* px, const float* py,
                            const float* pz, size_t n, uint16_t* out);

  /// One averaging mip step: dst has resolution src_res / 2.
  void (*mip_reduce)(const float* src, int src_res, float* dst);

  /// Minimum over each voxel and its six neighbours; voxels outside the
  /// grid count as 0. Inputs must be non-negative.
  void (*erode6)(const float* src, int res, float* dst);

  /// ray_capsule against capsules [begin, begin + n) of the batch. Misses
  /// report +inf; parts are HitPart values. Outputs are indexed from 0.
  void (*ray_capsules)(const Vec3d& origin, const Vec3d& dir, const CapsuleBatch& caps, size_t begin, size_t n,
                       double* t_out, uint8_t* part_out);
};

const KernelTable& scalar_kernels();
/// nullptr when the CPU or compiler lacks AVX2.
const KernelTable* avx2_kernels();
const KernelTable& kernels_for(Isa isa);

/// Active table: the best supported ISA unless overridden with
/// `VOXLINE_ISA=scalar|avx2` or select_isa().
const KernelTable& kernels();
void select_isa(Isa isa);

}  // namespace voxline::simd
