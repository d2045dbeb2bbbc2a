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

#include <cassert>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "voxline/vec3.hpp"

namespace voxline {

// Dense cubic volume, x-fastest storage.
template <typename T>
class Volume {
 public:
  Volume() = default;
  explicit Volume(int resolution, T fill = T{})
      : res_(resolution), data_(static_cast<size_t>(resolution) * resolution * resolution, fill) {}

  int resolution() const { return res_; }
  size_t size() const { return data_.size(); }

  size_t index(int x, int y, int z) const {
    assert(in_bounds(x, y, z));
    return (static_cast<size_t>(z) * res_ + y) * res_ + x;
  }
  bool in_bounds(int x, int y, int z) const {
    return x >= 0 && y >= 0 && z >= 0 && x < res_ && y < res_ && z < res_;
  }
  Vec3i coord(size_t i) const {
    const auto r = static_cast<size_t>(res_);
    return {static_cast<int32_t>(i % r), static_cast<int32_t>((i / r) % r),
            static_cast<int32_t>(i / (r * r))};
  }

  T& at(int x, int y, int z) { return data_[index(x, y, z)]; }
  const T& at(int x, int y, int z) const { return data_[index(x, y, z)]; }
  T& operator[](size_t i) { return data_[i]; }
  const T& operator[](size_t i) const { return data_[i]; }

  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }
  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }

  bool operator==(const Volume&) const = default;

 private:
  int res_ = 0;
  std::vector<T> data_;
};

}  // namespace voxline
