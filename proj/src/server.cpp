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

#include "voxline/server.hpp"

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>
#include <condition_variable>
#include <deque>
#include <functional>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "json.hpp"
#include "voxline/error.hpp"

namespace voxline {

namespace beast = boost::beast;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;
using nlohmann::json;

namespace {

struct Outgoing {
  bool binary;
  std::string data;
};

struct Pose {
  uint64_t id = 0;
  Vec3d position, forward, up;
  double fov = 0.8;
};

Vec3d vec3_field(const json& msg, const char* key) {
  const auto it = msg.find(key);
  if (it == msg.end() || !it->is_array() || it->size() != 3) {
    throw ParameterError(std::string("pose field `") + key + "` must be an array of 3 numbers");
  }
  Vec3d v;
  for (int a = 0; a < 3; ++a) {
    if (!(*it)[a].is_number()) throw ParameterError(std::string("pose field `") + key + "` must be numeric");
    v[a] = (*it)[a].get<double>();
  }
  return v;
}

Pose parse_pose(const json& msg) {
  Pose p;
  const auto id = msg.find("id");
  if (id == msg.end() || !id->is_number_unsigned()) throw ParameterError("pose `id` must be an unsigned integer");
  p.id = id->get<uint64_t>();
  p.position = vec3_field(msg, "position");
  p.forward = vec3_field(msg, "forward");
  p.up = vec3_field(msg, "up");
  const auto fov = msg.find("fov");
  if (fov == msg.end() || !fov->is_number()) throw ParameterError("pose `fov` must be a number");
  p.fov = fov->get<double>();
  return p;
}

std::string error_message(const std::string& what) { return json{{"type", "error"}, {"message", what}}.dump(); }

json stats_json(const FrameStats& s, const PipelineConfig& c) {
  return {{"mode", mode_name(c.mode)},
          {"strategy", strategy_name(c.strategy)},
          {"method", method_name(c.method)},
          {"alpha", c.alpha},
          {"k", c.k},
          {"segments", s.segments},
          {"incidences", s.incidences},
          {"fragments", s.fragments},
          {"fragment_touches", s.fragment_touches},
          {"occupied_voxels", s.occupied_voxels},
          {"visible_voxels", s.visible_voxels},
          {"culled_fraction", s.culled_fraction},
          {"segments_culled", s.segments_culled},
          {"ray_capsule_tests", s.ray_capsule_tests},
          {"voxels_visited", s.voxels_visited},
          {"voxelize_ms", s.voxelize_ms},
          {"cull_ms", s.cull_ms},
          {"abuffer_ms", s.abuffer_ms},
          {"shade_ms", s.shade_ms},
          {"render_ms", s.render_ms}};
}

bool affects_geometry(std::string_view key) {
  return key == "input" || key == "res" || key == "resolution" || key == "method" || key == "radius" ||
         key == "r_min" || key == "clipping" || key == "seed";
}

}  // namespace

class Session;

struct FrameServer::Impl {
  PipelineConfig config;
  Strategy requested_strategy;
  std::string address;
  Geometry geometry;

  net::io_context ioc;
  tcp::acceptor acceptor{ioc};
  std::weak_ptr<Session> session;

  std::mutex mutex;
  std::condition_variable wake;
  std::optional<Pose> pending_pose;
  std::vector<std::pair<std::string, std::string>> pending_sets;
  bool stopping = false;
  std::jthread worker;

  // Render-thread state.
  std::optional<Pose> last_pose;
  uint64_t next_frame_id = 1;

  void accept();
  void on_message(const std::shared_ptr<Session>& s, const std::string& text);
  void send(std::vector<Outgoing> messages);
  void render_loop();
  void apply_setting(const std::string& key, const std::string& value, bool& rebuild);
};

class Session : public std::enable_shared_from_this<Session> {
 public:
  Session(tcp::socket socket, FrameServer::Impl& server) : ws_(std::move(socket)), server_(server) {}

  void start() {
    ws_.async_accept([self = shared_from_this()](beast::error_code ec) {
      if (ec) return;
      self->server_.session = self;
      self->read();
    });
  }

  void send(Outgoing message) {
    queue_.push_back(std::move(message));
    if (queue_.size() == 1) write();
  }

  void close() {
    beast::error_code ec;
    beast::get_lowest_layer(ws_).socket().close(ec);
  }

 private:
  void read() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, size_t) {
      if (ec) return;
      const bool text = self->ws_.got_text();
      std::string msg = beast::buffers_to_string(self->buffer_.data());
      self->buffer_.consume(self->buffer_.size());
      if (text) {
        self->server_.on_message(self, msg);
      } else {
        self->send({false, error_message("expected a JSON text message")});
      }
      self->read();
    });
  }

  void write() {
    ws_.binary(queue_.front().binary);
    ws_.async_write(net::buffer(queue_.front().data), [self = shared_from_this()](beast::error_code ec, size_t) {
      if (ec) return;
      self->queue_.pop_front();
      if (!self->queue_.empty()) self->write();
    });
  }

  websocket::stream<beast::tcp_stream> ws_;
  beast::flat_buffer buffer_;
  std::deque<Outgoing> queue_;
  FrameServer::Impl& server_;
};

void FrameServer::Impl::accept() {
  acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
    if (ec) return;
    if (auto old = session.lock()) old->close();
    std::make_shared<Session>(std::move(socket), *this)->start();
    accept();
  });
}

void FrameServer::Impl::on_message(const std::shared_ptr<Session>& s, const std::string& text) {
  try {
    const json msg = json::parse(text);
    if (!msg.is_object() || !msg.contains("type") || !msg["type"].is_string()) {
      throw ParameterError("message needs a string `type`");
    }
    const std::string type = msg["type"];
    if (type == "pose") {
      Pose p = parse_pose(msg);
      std::lock_guard lock(mutex);
      pending_pose = p;
    } else if (type == "set") {
      if (!msg.contains("key") || !msg["key"].is_string() || !msg.contains("value")) {
        throw ParameterError("set needs a string `key` and a `value`");
      }
      const auto& v = msg["value"];
      std::string value = v.is_string() ? v.get<std::string>() : v.dump();
      std::lock_guard lock(mutex);
      pending_sets.emplace_back(msg["key"].get<std::string>(), std::move(value));
    } else {
      throw ParameterError("unknown message type `" + type + "`");
    }
    wake.notify_one();
  } catch (const json::exception& e) {
    s->send({false, error_message(std::string("malformed JSON: ") + e.what())});
  } catch (const Error& e) {
    s->send({false, error_message(e.what())});
  }
}

void FrameServer::Impl::send(std::vector<Outgoing> messages) {
  net::post(ioc, [this, messages = std::move(messages)]() mutable {
    if (auto s = session.lock()) {
      for (auto& m : messages) s->send(std::move(m));
    }
  });
}

void FrameServer::Impl::apply_setting(const std::string& key, const std::string& value, bool& rebuild) {
  PipelineConfig next = config;
  Strategy requested = requested_strategy;
  next.set(key, value);
  if (key == "strategy") requested = next.strategy;
  if (key == "alpha") next.mode = next.alpha < 1.0 ? RenderMode::transparent : RenderMode::opaque;
  next.strategy = next.mode == RenderMode::transparent && requested == Strategy::vcsv ? Strategy::vsv : requested;
  next.validate();
  config = next;
  requested_strategy = requested;
  if (affects_geometry(key)) rebuild = true;
}

void FrameServer::Impl::render_loop() {
  for (;;) {
    std::optional<Pose> pose;
    std::vector<std::pair<std::string, std::string>> sets;
    {
      std::unique_lock lock(mutex);
      wake.wait(lock, [&] { return stopping || pending_pose || !pending_sets.empty(); });
      if (stopping) return;
      pose = pending_pose;
      pending_pose.reset();
      sets.swap(pending_sets);
    }
    bool rebuild = config.revoxelize;
    for (const auto& [key, value] : sets) {
      try {
        apply_setting(key, value, rebuild);
      } catch (const Error& e) {
        send({{false, error_message(e.what())}});
      }
    }
    if (!pose) pose = last_pose;
    if (!pose) continue;
    last_pose = pose;
    try {
      if (rebuild) geometry = prepare_geometry(load_input(config), config);
      Camera cam;
      cam.position = pose->position;
      cam.forward = pose->forward;
      cam.up = pose->up;
      cam.fov_y = pose->fov;
      cam.width = config.width;
      cam.height = config.height;
      cam.orthonormalize();
      const Frame frame = render_frame(geometry, cam, config);
      const json header{{"type", "frame_header"},
                        {"id", next_frame_id++},
                        {"pose_id", pose->id},
                        {"width", frame.image.width},
                        {"height", frame.image.height},
                        {"stats", stats_json(frame.stats, config)}};
      const auto bytes = frame.image.srgb_bytes();
      send({{false, header.dump()}, {true, std::string(bytes.begin(), bytes.end())}});
    } catch (const Error& e) {
      send({{false, error_message(e.what())}});
    }
  }
}

FrameServer::FrameServer(PipelineConfig config, std::string address) : impl_(std::make_unique<Impl>()) {
  config.validate();
  impl_->requested_strategy = config.strategy;
  impl_->config = std::move(config);
  impl_->address = std::move(address);
  impl_->geometry = prepare_geometry(load_input(impl_->config), impl_->config);
}

FrameServer::~FrameServer() {
  stop();
  if (impl_->worker.joinable()) impl_->worker.join();
}

void FrameServer::listen() {
  try {
    const tcp::endpoint ep(net::ip::make_address(impl_->address), static_cast<uint16_t>(impl_->config.port));
    impl_->acceptor.open(ep.protocol());
    impl_->acceptor.set_option(net::socket_base::reuse_address(true));
    impl_->acceptor.bind(ep);
    impl_->acceptor.listen();
  } catch (const boost::system::system_error& e) {
    throw Error("cannot listen on " + impl_->address + ":" + std::to_string(impl_->config.port) + ": " + e.what());
  }
}

uint16_t FrameServer::port() const { return impl_->acceptor.local_endpoint().port(); }

void FrameServer::run() {
  impl_->worker = std::jthread([this] { impl_->render_loop(); });
  impl_->accept();
  impl_->ioc.run();
}

void FrameServer::stop() {
  {
    std::lock_guard lock(impl_->mutex);
    impl_->stopping = true;
  }
  impl_->wake.notify_all();
  net::post(impl_->ioc, [this] {
    beast::error_code ec;
    impl_->acceptor.close(ec);
    if (auto s = impl_->session.lock()) s->close();
    impl_->ioc.stop();
  });
}

}  // namespace voxline
