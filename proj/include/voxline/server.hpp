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

// WebSocket frame server. Clients send camera poses and settings as JSON
// text messages and receive, per rendered frame, a `frame_header` text
// message followed by one binary message of width * height * 3 sRGB bytes.
#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "voxline/pipeline.hpp"

namespace voxline {

class FrameServer {
 public:
  /// Loads the input and voxelizes it. Throws on invalid configuration.
  explicit FrameServer(PipelineConfig config, std::string address = "127.0.0.1");
  ~FrameServer();
  FrameServer(const FrameServer&) = delete;
  FrameServer& operator=(const FrameServer&) = delete;

  /// Binds and listens on config.port (0 picks a free port). Throws Error
  /// when the port cannot be bound.
  void listen();
  uint16_t port() const;

  /// Serves until stop(); call listen() first.
  void run();
  /// Safe to call from any thread.
  void stop();

  struct Impl;

 private:
  std::unique_ptr<Impl> impl_;
};

}  // namespace voxline
