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

#include <stdexcept>
#include <string>

namespace voxline {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file. The message names the line or byte offset.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Invalid generator or operation parameters.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Invalid pipeline configuration, raised before any stage runs.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Violated internal invariant, e.g. the two voxelization passes disagreeing.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace voxline
