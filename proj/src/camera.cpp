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

#include "voxline/camera.hpp"

#include <cmath>
#include <numbers>

#include "voxline/error.hpp"

namespace voxline {

void Camera::orthonormalize() {
  if (!(fov_y > 0.0 && fov_y < std::numbers::pi)) throw ParameterError("fov must lie in (0, pi)");
  if (width <= 0 || height <= 0) throw ParameterError("image size must be positive");
  const double fl = length(forward);
  if (!(fl > 0.0)) throw ParameterError("camera forward vector is zero");
  forward = forward / fl;
  const Vec3d u = up - forward * dot(up, forward);
  const double ul = length(u);
  if (!(ul > 1e-9)) throw ParameterError("camera up vector is parallel to forward");
  up = u / ul;
}

Ray Camera::pixel_ray(int px, int py) const {
  const double tan_half = std::tan(0.5 * fov_y);
  const double aspect = static_cast<double>(width) / height;
  const double sx = (2.0 * (px + 0.5) / width - 1.0) * tan_half * aspect;
  const double sy = (1.0 - 2.0 * (py + 0.5) / height) * tan_half;
  const Vec3d right = cross(forward, up);
  return {position, normalize(forward + right * sx + up * sy)};
}

Camera orbit_camera(const Vec3d& target, double distance, double azimuth, double elevation, double fov_y,
                    int width, int height) {
  const Vec3d offset(std::cos(elevation) * std::sin(azimuth), std::sin(elevation),
                     std::cos(elevation) * std::cos(azimuth));
  Camera c;
  c.position = target + offset * distance;
  c.forward = -offset;
  c.up = Vec3d(0, 1, 0);
  c.fov_y = fov_y;
  c.width = width;
  c.height = height;
  c.orthonormalize();
  return c;
}

}  // namespace voxline
