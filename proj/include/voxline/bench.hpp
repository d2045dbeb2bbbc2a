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

#include <string>
#include <vector>

#include "voxline/pipeline.hpp"

namespace voxline {

struct BenchRow {
  std::string experiment;
  std::string dataset;
  int resolution = 0;
  std::string method;
  std::string strategy;
  double alpha = 1.0;
  int decimation = 1;
  uint64_t segments = 0;
  /// Voxel units.
  double mean_segment_length = 0.0;
  uint64_t voxels_visited = 0;
  uint64_t fragments = 0;
  uint64_t fragment_touches = 0;
  uint64_t ray_capsule_tests = 0;
  double time_ms = 0.0;
};

/// Experiments: `traversal` (methods x resolutions), `length` (methods x
/// decimation factors), `strategy` (VSS/VSV/VCSV) and `opacity`
/// (transparent renders over alphas). All run on the config's input.
struct BenchPlan {
  std::vector<std::string> experiments{"traversal", "length", "strategy", "opacity"};
  std::vector<int> resolutions{32, 64, 128};
  std::vector<int> decimations{1, 2, 4, 8, 16};
  std::vector<double> alphas{1.0, 0.5, 0.2, 0.1};
};

std::vector<BenchRow> run_bench(const PipelineConfig& config, const BenchPlan& plan);

std::string bench_csv_header();
std::string bench_csv(const std::vector<BenchRow>& rows);

}  // namespace voxline
