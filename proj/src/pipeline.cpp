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

#include "voxline/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "voxline/error.hpp"
#include "voxline/fixtures.hpp"

namespace voxline {

std::string_view method_name(Method m) {
  switch (m) {
    case Method::dda:
      return "dda";
    case Method::capsule:
      return "capsule";
    case Method::aabb:
      return "aabb";
  }
  return "";
}

std::string_view strategy_name(Strategy s) {
  switch (s) {
    case Strategy::vss:
      return "vss";
    case Strategy::vsv:
      return "vsv";
    case Strategy::vcsv:
      return "vcsv";
  }
  return "";
}

std::string_view mode_name(RenderMode m) { return m == RenderMode::opaque ? "opaque" : "transparent"; }

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw ConfigError("invalid value `" + std::string(value) + "` for " + std::string(key));
}

double to_double(std::string_view key, std::string_view value) {
  value = trim(value);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || ptr != value.data() + value.size() || !std::isfinite(v)) bad_value(key, value);
  return v;
}

int64_t to_int(std::string_view key, std::string_view value) {
  value = trim(value);
  int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || ptr != value.data() + value.size()) bad_value(key, value);
  return v;
}

bool to_bool(std::string_view key, std::string_view value) {
  value = trim(value);
  if (value == "true" || value == "1" || value == "on") return true;
  if (value == "false" || value == "0" || value == "off") return false;
  bad_value(key, value);
}

Vec3d to_vec3(std::string_view key, std::string_view value) {
  Vec3d v;
  std::string_view rest = value;
  for (int a = 0; a < 3; ++a) {
    const size_t comma = rest.find(',');
    if ((a < 2) == (comma == std::string_view::npos)) bad_value(key, value);
    v[a] = to_double(key, rest.substr(0, comma));
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
  }
  return v;
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

const std::vector<std::string>& PipelineConfig::keys() {
  static const std::vector<std::string> k{
      "input",  "res",       "method",     "strategy",  "mode",   "alpha",  "k",          "out",
      "workers", "seed",     "port",       "radius",    "r_min",  "width",  "height",     "azimuth",
      "elevation", "distance", "fov",      "light",     "background", "clipping", "early_termination",
      "revoxelize"};
  return k;
}

void PipelineConfig::set(std::string_view key, std::string_view value) {
  const std::string_view v = trim(value);
  if (key == "input") {
    input = std::string(v);
  } else if (key == "res" || key == "resolution") {
    resolution = static_cast<int>(to_int(key, v));
  } else if (key == "method") {
    if (v == "dda") method = Method::dda;
    else if (v == "capsule") method = Method::capsule;
    else if (v == "aabb") method = Method::aabb;
    else bad_value(key, v);
  } else if (key == "strategy") {
    if (v == "vss") strategy = Strategy::vss;
    else if (v == "vsv") strategy = Strategy::vsv;
    else if (v == "vcsv") strategy = Strategy::vcsv;
    else bad_value(key, v);
  } else if (key == "mode") {
    if (v == "opaque") mode = RenderMode::opaque;
    else if (v == "transparent") mode = RenderMode::transparent;
    else bad_value(key, v);
  } else if (key == "alpha") {
    alpha = to_double(key, v);
  } else if (key == "k") {
    k = static_cast<int>(to_int(key, v));
  } else if (key == "out") {
    out = std::string(v);
  } else if (key == "workers") {
    const int64_t w = to_int(key, v);
    if (w < 0) bad_value(key, v);
    workers = static_cast<unsigned>(w);
  } else if (key == "seed") {
    seed = static_cast<uint64_t>(to_int(key, v));
  } else if (key == "port") {
    port = static_cast<int>(to_int(key, v));
  } else if (key == "radius") {
    if (v == "file") radius.reset();
    else radius = to_double(key, v);
  } else if (key == "r_min") {
    r_min = static_cast<float>(to_double(key, v));
  } else if (key == "width") {
    width = static_cast<int>(to_int(key, v));
  } else if (key == "height") {
    height = static_cast<int>(to_int(key, v));
  } else if (key == "azimuth") {
    azimuth = to_double(key, v);
  } else if (key == "elevation") {
    elevation = to_double(key, v);
  } else if (key == "distance") {
    distance = to_double(key, v);
  } else if (key == "fov") {
    fov = to_double(key, v);
  } else if (key == "light") {
    light = to_vec3(key, v);
  } else if (key == "background") {
    background = to_vec3(key, v);
  } else if (key == "clipping") {
    clipping = to_bool(key, v);
  } else if (key == "early_termination") {
    early_termination = to_bool(key, v);
  } else if (key == "revoxelize") {
    revoxelize = to_bool(key, v);
  } else {
    throw ConfigError("unknown config key `" + std::string(key) + "`");
  }
}

void PipelineConfig::validate() const {
  if (!is_power_of_two(resolution) || resolution < 4 || resolution > 1024) {
    throw ConfigError("res must be a power of two in [4, 1024], got " + std::to_string(resolution));
  }
  if (strategy == Strategy::vcsv && mode == RenderMode::transparent) {
    throw ConfigError("strategy vcsv culls hidden fragments and cannot be combined with transparent mode");
  }
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in (0, 1]");
  if (k < 1 || k > 64) throw ConfigError("k must lie in [1, 64]");
  if (radius && !(*radius > 0.0)) throw ConfigError("radius must be positive");
  if (!(r_min > 0.0f)) throw ConfigError("r_min must be positive");
  if (width < 1 || height < 1 || width > 8192 || height > 8192) throw ConfigError("image size out of range");
  if (!(fov > 0.0 && fov < 3.14159)) throw ConfigError("fov must lie in (0, pi)");
  if (!(distance > 0.0)) throw ConfigError("distance must be positive");
  if (!(length(light) > 0.0)) throw ConfigError("light direction must be nonzero");
  if (port < 0 || port > 65535) throw ConfigError("port out of range");
}

RenderSettings PipelineConfig::render_settings() const {
  RenderSettings s;
  s.mode = mode;
  s.alpha = alpha;
  s.k = k;
  s.background = background;
  s.early_termination = early_termination;
  s.workers = workers;
  return s;
}

VoxelizeOptions PipelineConfig::voxelize_options() const { return {method, r_min, workers}; }

void apply_config_text(PipelineConfig& config, std::string_view text) {
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const size_t hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key=value");
    }
    try {
      config.set(trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void apply_config_file(PipelineConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  apply_config_text(config, ss.str());
}

LineSet load_input(const PipelineConfig& config) {
  const std::string& in = config.input;
  if (in.rfind("fixture:", 0) == 0) {
    const auto f = parse_fixture(std::string_view(in).substr(8));
    if (!f) throw ConfigError("unknown fixture in `" + in + "`");
    return make_fixture(*f, config.seed);
  }
  const std::string kind = in.substr(0, in.find(':'));
  if (kind == "helix" || kind == "random_streamlines" || kind == "grid_diagonals") {
    return generate(parse_generator_spec(in), config.seed);
  }
  return load_lineset(in);
}

Geometry prepare_geometry(LineSet lines, const PipelineConfig& config) {
  lines.validate();
  Geometry g;
  if (config.radius) {
    float world_radius = 0.0f;
    g.grid = fit_grid_voxel_radius(lines, config.resolution, *config.radius, &world_radius);
    lines.radius = world_radius;
  } else {
    g.grid = fit_grid(lines, config.resolution);
  }
  g.lines = std::move(lines);
  g.normals = compute_clip_normals(g.lines);
  g.segments = build_segments(g.lines, g.normals, g.grid, config.clipping);
  const auto t0 = std::chrono::steady_clock::now();
  g.pyramid = voxelize(g.segments, g.grid, config.voxelize_options(), &g.voxelize_stats);
  g.voxelize_ms = ms_since(t0);
  return g;
}

Camera config_camera(const Geometry& geometry, const PipelineConfig& config) {
  const GridDesc& grid = geometry.grid;
  const Vec3d centre = (grid.world_min + grid.world_max()) * 0.5;
  const double extent = grid.resolution * grid.voxel_size;
  return orbit_camera(centre, config.distance * extent, config.azimuth, config.elevation, config.fov, config.width,
                      config.height);
}

std::string FrameStats::counters_text() const {
  std::ostringstream o;
  o << "segments=" << segments << "\n"
    << "incidences=" << incidences << "\n"
    << "fragments=" << fragments << "\n"
    << "fragment_touches=" << fragment_touches << "\n"
    << "occupied_voxels=" << occupied_voxels << "\n"
    << "visible_voxels=" << visible_voxels << "\n"
    << "segments_culled=" << segments_culled << "\n"
    << "ray_capsule_tests=" << ray_capsule_tests << "\n"
    << "voxels_visited=" << voxels_visited << "\n";
  return o.str();
}

Scene FrameState::scene(const Geometry& geometry) const {
  Scene s;
  s.grid = &geometry.grid;
  s.segments = &geometry.segments;
  s.abuffer = &abuffer;
  s.fragment_capsules = &fragment_capsules;
  s.occupied = &occupied;
  s.shading = &shading;
  return s;
}

FrameState prepare_frame(const Geometry& geometry, const Camera& camera, const PipelineConfig& config,
                         FrameStats* stats) {
  config.validate();
  FrameState f;
  FrameStats local;
  const VoxelizeOptions vopt = config.voxelize_options();
  ABufferStats astats;

  auto t0 = std::chrono::steady_clock::now();
  const bool cull = config.strategy == Strategy::vcsv && config.mode == RenderMode::opaque;
  if (cull) {
    const Volume<float> eroded = erode(geometry.pyramid.mips[0]);
    f.culling = compute_visibility(eroded, geometry.pyramid, geometry.grid, camera, config.workers);
  }
  local.cull_ms = ms_since(t0);

  t0 = std::chrono::steady_clock::now();
  switch (config.strategy) {
    case Strategy::vss:
      f.abuffer = build_vss(geometry.segments, geometry.grid, vopt, &astats);
      break;
    case Strategy::vsv:
      f.abuffer = build_vsv(geometry.segments, geometry.grid, geometry.pyramid, vopt, &astats);
      break;
    case Strategy::vcsv:
      f.abuffer = build_vcsv(geometry.segments, geometry.grid, geometry.pyramid, *f.culling, vopt, &astats);
      break;
  }
  f.abuffer.canonicalize(config.workers);
  f.fragment_capsules = gather_fragment_capsules(f.abuffer, geometry.segments);
  f.occupied = nonempty_voxels(f.abuffer, geometry.grid.resolution);
  local.abuffer_ms = ms_since(t0);

  t0 = std::chrono::steady_clock::now();
  f.shading = compute_shading(geometry.pyramid, f.occupied, geometry.grid, config.light, config.workers);
  local.shade_ms = ms_since(t0);

  local.segments = geometry.segments.size();
  local.incidences = geometry.voxelize_stats.incidences;
  local.fragments = f.abuffer.total();
  local.fragment_touches = astats.touches();
  local.segments_culled = astats.segments_culled;
  local.voxelize_ms = geometry.voxelize_ms;
  uint64_t occupied = 0;
  for (size_t i = 0; i < geometry.pyramid.base.size(); ++i) occupied += geometry.pyramid.count(i) > 0;
  local.occupied_voxels = occupied;
  local.visible_voxels = f.culling ? f.culling->set_count() : occupied;
  local.culled_fraction =
      occupied == 0 ? 0.0 : 1.0 - static_cast<double>(local.visible_voxels) / static_cast<double>(occupied);
  if (stats) *stats = local;
  return f;
}

Frame render_frame(const Geometry& geometry, const Camera& camera, const PipelineConfig& config) {
  Frame out;
  const FrameState state = prepare_frame(geometry, camera, config, &out.stats);
  const auto t0 = std::chrono::steady_clock::now();
  TraceStats ts;
  out.image = render(state.scene(geometry), camera, config.render_settings(), &ts);
  out.stats.render_ms = ms_since(t0);
  out.stats.ray_capsule_tests = ts.ray_capsule_tests;
  out.stats.voxels_visited = ts.voxels_visited;
  return out;
}

}  // namespace voxline
