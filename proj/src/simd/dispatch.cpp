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

#include <atomic>
#include <cstdlib>
#include <string>

#include "voxline/error.hpp"
#include "voxline/simd/kernels.hpp"

namespace voxline::simd {

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool isa_supported(Isa isa) { return isa == Isa::scalar || avx2_kernels() != nullptr; }

const KernelTable& kernels_for(Isa isa) {
  if (isa == Isa::avx2) {
    if (const KernelTable* t = avx2_kernels()) return *t;
    throw ParameterError("AVX2 kernels are not supported on this CPU");
  }
  return scalar_kernels();
}

namespace {

const KernelTable* initial_table() {
  if (const char* env = std::getenv("VOXLINE_ISA")) {
    const std::string v(env);
    if (v == "scalar") return &scalar_kernels();
    if (v == "avx2" && avx2_kernels()) return avx2_kernels();
  }
  if (const KernelTable* t = avx2_kernels()) return t;
  return &scalar_kernels();
}

std::atomic<const KernelTable*>& active() {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

}  // namespace

const KernelTable& kernels() { return *active().load(std::memory_order_acquire); }

void select_isa(Isa isa) { active().store(&kernels_for(isa), std::memory_order_release); }

}  // namespace voxline::simd
