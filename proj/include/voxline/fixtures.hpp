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

// Scenes with thick occluders, used by the culling and opacity
// experiments. Coordinates span roughly [-33, 33] and the radius is 3, so
// at 64^3 the tubes are about three voxels thick.
#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "voxline/lineset.hpp"

namespace voxline {

enum class Fixture {
  /// A solid wall of parallel lines with streamlines on both sides.
  wall,
  /// Streamlines enclosed in a hollow box of six walls.
  shell,
  /// A dense tangle of streamlines.
  bundle,
};

LineSet make_fixture(Fixture fixture, uint64_t seed = 1);
std::optional<Fixture> parse_fixture(std::string_view name);
std::string_view fixture_name(Fixture fixture);

}  // namespace voxline
