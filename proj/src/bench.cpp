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

#include "voxline/bench.hpp"

#include <chrono>
#include <sstream>

#include "voxline/error.hpp"

namespace voxline {

namespace {

constexpr Method kMethods[] = {Method::dda, Method::capsule, Method::aabb};

BenchRow base_row(const std::string& experiment, const PipelineConfig& c, const Geometry& g) {
  BenchRow r;
  r.experiment = experiment;
  r.dataset = c.input;
  r.resolution = c.resolution;
  r.method = std::string(method_name(c.method));
  r.strategy = std::string(strategy_name(c.strategy));
  r.alpha = c.alpha;
  r.segments = g.segments.size();
  r.mean_segment_length = mean_segment_length(g.lines) / g.grid.voxel_size;
  r.voxels_visited = g.voxelize_stats.incidences;
  return r;
}

void traversal(const PipelineConfig& base, const LineSet& lines, const BenchPlan& plan, std::vector<BenchRow>& out) {
  for (int res : plan.resolutions) {
    for (Method m : kMethods) {
      PipelineConfig c = base;
      c.resolution = res;
      c.method = m;
      const Geometry g = prepare_geometry(lines, c);
      BenchRow r = base_row("traversal", c, g);
      r.time_ms = g.voxelize_ms;
      out.push_back(r);
    }
  }
}

void segment_length(const PipelineConfig& base, const LineSet& lines, const BenchPlan& plan,
                    std::vector<BenchRow>& out) {
  for (int n : plan.decimations) {
    const LineSet dec = decimate(lines, n);
    for (Method m : kMethods) {
      PipelineConfig c = base;
      c.method = m;
      const Geometry g = prepare_geometry(dec, c);
      BenchRow r = base_row("length", c, g);
      r.decimation = n;
      r.time_ms = g.voxelize_ms;
      out.push_back(r);
    }
  }
}

void strategies(const PipelineConfig& base, const LineSet& lines, std::vector<BenchRow>& out) {
  PipelineConfig c = base;
  c.mode = RenderMode::opaque;
  const Geometry g = prepare_geometry(lines, c);
  const Camera cam = config_camera(g, c);
  for (Strategy s : {Strategy::vss, Strategy::vsv, Strategy::vcsv}) {
    c.strategy = s;
    FrameStats fs;
    prepare_frame(g, cam, c, &fs);
    BenchRow r = base_row("strategy", c, g);
    r.fragments = fs.fragments;
    r.fragment_touches = fs.fragment_touches;
    r.time_ms = fs.cull_ms + fs.abuffer_ms;
    out.push_back(r);
  }
}

void opacity(const PipelineConfig& base, const LineSet& lines, const BenchPlan& plan, std::vector<BenchRow>& out) {
  PipelineConfig c = base;
  c.mode = RenderMode::transparent;
  c.strategy = Strategy::vsv;
  const Geometry g = prepare_geometry(lines, c);
  const Camera cam = config_camera(g, c);
  for (double a : plan.alphas) {
    c.alpha = a;
    const Frame f = render_frame(g, cam, c);
    BenchRow r = base_row("opacity", c, g);
    r.fragments = f.stats.fragments;
    r.fragment_touches = f.stats.fragment_touches;
    r.ray_capsule_tests = f.stats.ray_capsule_tests;
    r.time_ms = f.stats.render_ms;
    out.push_back(r);
  }
}

}  // namespace

std::vector<BenchRow> run_bench(const PipelineConfig& config, const BenchPlan& plan) {
  std::vector<BenchRow> rows;
  if (plan.experiments.empty()) return rows;
  const LineSet lines = load_input(config);
  for (const auto& e : plan.experiments) {
    if (e == "traversal") traversal(config, lines, plan, rows);
    else if (e == "length") segment_length(config, lines, plan, rows);
    else if (e == "strategy") strategies(config, lines, rows);
    else if (e == "opacity") opacity(config, lines, plan, rows);
    else throw ConfigError("unknown experiment `" + e + "`");
  }
  return rows;
}

std::string bench_csv_header() {
  return "experiment,dataset,resolution,method,strategy,alpha,decimation,segments,mean_segment_length,"
         "voxels_visited,fragments,fragment_touches,ray_capsule_tests,time_ms\n";
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream o;
  o << bench_csv_header();
  for (const auto& r : rows) {
    o << r.experiment << ",\"" << r.dataset << "\"," << r.resolution << "," << r.method << "," << r.strategy << ","
      << r.alpha << "," << r.decimation << "," << r.segments << "," << r.mean_segment_length << ","
      << r.voxels_visited << "," << r.fragments << "," << r.fragment_touches << "," << r.ray_capsule_tests << ","
      << r.time_ms << "\n";
  }
  return o.str();
}

}  // namespace voxline
