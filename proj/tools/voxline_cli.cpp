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

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "voxline/bench.hpp"
#include "voxline/error.hpp"
#include "voxline/lineset.hpp"
#include "voxline/pipeline.hpp"
#include "voxline/server.hpp"
#include "voxline/simd/kernels.hpp"

namespace {

using namespace voxline;

struct StageError : Error {
  using Error::Error;
};

template <typename F>
auto stage(const char* name, F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(std::string(name) + ": " + e.what());
  }
}

void write_bytes(const std::string& path, const std::vector<std::byte>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct ConfigFlags {
  std::string file;
  std::map<std::string, std::string> values;

  void add_to(CLI::App* app) {
    app->add_option("--config", file, "key=value config file; flags override it");
    for (const auto& key : PipelineConfig::keys()) app->add_option("--" + key, values[key]);
  }

  PipelineConfig resolve(CLI::App* app) const {
    PipelineConfig c;
    if (!file.empty()) apply_config_file(c, file);
    for (const auto& key : PipelineConfig::keys()) {
      if (app->count("--" + key) > 0) c.set(key, values.at(key));
    }
    c.validate();
    return c;
  }
};

int cmd_render(const PipelineConfig& config) {
  const LineSet lines = stage("load", [&] { return load_input(config); });
  const Geometry geometry = stage("voxelize", [&] { return prepare_geometry(lines, config); });
  const Camera camera = stage("camera", [&] { return config_camera(geometry, config); });
  const Frame frame = stage("render", [&] { return render_frame(geometry, camera, config); });
  stage("write", [&] {
    write_bytes(config.out + ".ppm", frame.image.to_ppm());
    write_bytes(config.out + ".hiti", frame.image.to_hiti());
    std::ofstream(config.out + ".stats.txt") << frame.stats.counters_text();
    return 0;
  });
  const auto& s = frame.stats;
  std::fprintf(stderr,
               "isa=%s segments=%llu fragments=%llu visible=%llu/%llu voxelize=%.1fms cull=%.1fms abuffer=%.1fms "
               "shade=%.1fms render=%.1fms\n",
               std::string(simd::isa_name(simd::kernels().isa)).c_str(),
               static_cast<unsigned long long>(s.segments), static_cast<unsigned long long>(s.fragments),
               static_cast<unsigned long long>(s.visible_voxels), static_cast<unsigned long long>(s.occupied_voxels),
               s.voxelize_ms, s.cull_ms, s.abuffer_ms, s.shade_ms, s.render_ms);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Voxel-accelerated line set renderer"};
  app.require_subcommand(1);
  std::string isa;
  app.add_option("--isa", isa, "kernel instruction set: scalar or avx2");

  ConfigFlags render_flags, bench_flags, serve_flags;
  auto* render = app.add_subcommand("render", "render one frame to <out>.ppm, <out>.hiti and <out>.stats.txt");
  render_flags.add_to(render);

  auto* bench = app.add_subcommand("bench", "run counter and timing experiments, write CSV");
  bench_flags.add_to(bench);
  std::string experiments = "traversal,length,strategy,opacity";
  std::string resolutions, decimations, alphas, csv_path;
  bench->add_option("--experiments", experiments, "comma list of traversal,length,strategy,opacity");
  bench->add_option("--resolutions", resolutions, "comma list for the traversal experiment");
  bench->add_option("--decimations", decimations, "comma list for the length experiment");
  bench->add_option("--alphas", alphas, "comma list for the opacity experiment");
  bench->add_option("--csv", csv_path, "output file (default stdout)");

  auto* serve = app.add_subcommand("serve", "stream frames over WebSocket");
  serve_flags.add_to(serve);
  std::string address = "127.0.0.1";
  serve->add_option("--address", address, "listen address");

  CLI11_PARSE(app, argc, argv);

  try {
    if (isa == "scalar") simd::select_isa(simd::Isa::scalar);
    else if (isa == "avx2") simd::select_isa(simd::Isa::avx2);
    else if (!isa.empty()) throw ConfigError("unknown isa `" + isa + "`");

    if (render->parsed()) return cmd_render(render_flags.resolve(render));

    if (bench->parsed()) {
      const PipelineConfig config = bench_flags.resolve(bench);
      BenchPlan plan;
      plan.experiments = split(experiments);
      if (!resolutions.empty()) {
        plan.resolutions.clear();
        for (const auto& r : split(resolutions)) plan.resolutions.push_back(std::stoi(r));
      }
      if (!decimations.empty()) {
        plan.decimations.clear();
        for (const auto& d : split(decimations)) plan.decimations.push_back(std::stoi(d));
      }
      if (!alphas.empty()) {
        plan.alphas.clear();
        for (const auto& a : split(alphas)) plan.alphas.push_back(std::stod(a));
      }
      const std::string csv = bench_csv(stage("bench", [&] { return run_bench(config, plan); }));
      if (csv_path.empty()) {
        std::cout << csv;
      } else {
        std::ofstream(csv_path) << csv;
      }
      return 0;
    }

    if (serve->parsed()) {
      const PipelineConfig config = serve_flags.resolve(serve);
      FrameServer server(config, address);
      server.listen();
      std::fprintf(stderr, "listening on ws://%s:%u\n", address.c_str(), static_cast<unsigned>(server.port()));
      server.run();
      return 0;
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
