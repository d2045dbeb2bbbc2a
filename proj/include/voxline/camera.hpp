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

#include <cstdint>

#include "voxline/vec3.hpp"

namespace voxline {

struct Ray {
  Vec3d origin;
  Vec3d dir;
};

/// Pinhole camera in world units.
struct Camera {
  Vec3d position{0, 0, -5};
  Vec3d forward{0, 0, 1};
  Vec3d up{0, 1, 0};
  double fov_y = 0.8;
  int width = 256;
  int height = 256;

  /// Makes forward unit length and up orthogonal to it. Throws
  /// ParameterError for degenerate frames or fov outside (0, pi).
  void orthonormalize();

  /// Primary ray through the centre of pixel (px, py); row 0 is the top.
  /// Requires an orthonormal frame.
  Ray pixel_ray(int px, int py) const;
};

/// Camera at `distance` from `target`, looking at it. Angles in radians;
/// elevation is measured from the xz plane and up is +y.
Camera orbit_camera(const Vec3d& target, double distance, double azimuth, double elevation, double fov_y,
                    int width, int height);

}  // namespace voxline
