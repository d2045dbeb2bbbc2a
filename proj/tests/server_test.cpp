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


#include <gtest/gtest.h>

#include <boost/asio/connect.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>
#include <json.hpp>
#include <thread>

#include "voxline/error.hpp"
#include "voxline/server.hpp"

namespace voxline {
namespace {

namespace beast = boost::beast;
namespace net = boost::asio;
using json = nlohmann::json;
using tcp = net::ip::tcp;

PipelineConfig small_config() {
  PipelineConfig c;
  c.resolution = 16;
  c.width = 24;
  c.height = 20;
  c.port = 0;
  c.workers = 1;
  return c;
}

class Running {
 public:
  explicit Running(PipelineConfig c) : server_(std::move(c)) {
    server_.listen();
    thread_ = std::thread([this] { server_.run(); });
  }
  ~Running() {
    server_.stop();
    thread_.join();
  }
  uint16_t port() const { return server_.port(); }

 private:
  FrameServer server_;
  std::thread thread_;
};

class Client {
 public:
  explicit Client(uint16_t port) : ws_(ioc_) {
    tcp::resolver resolver(ioc_);
    net::connect(ws_.next_layer(), resolver.resolve("127.0.0.1", std::to_string(port)));
    ws_.handshake("127.0.0.1", "/");
  }

  void send(const json& msg) {
    ws_.text(true);
    ws_.write(net::buffer(msg.dump()));
  }
  void send_raw(const std::string& text) {
    ws_.text(true);
    ws_.write(net::buffer(text));
  }

  // Next message; `binary` reports its kind.
  std::string read(bool& binary) {
    beast::flat_buffer buf;
    ws_.read(buf);
    binary = ws_.got_binary();
    return beast::buffers_to_string(buf.data());
  }

  struct Frame {
    json header;
    std::string body;
  };
  Frame read_frame() {
    bool binary = false;
    Frame f;
    f.header = json::parse(read(binary));
    EXPECT_FALSE(binary);
    EXPECT_EQ(f.header["type"], "frame_header") << f.header.dump();
    if (f.header["type"] != "frame_header") return f;
    f.body = read(binary);
    EXPECT_TRUE(binary);
    return f;
  }

 private:
  net::io_context ioc_;
  beast::websocket::stream<tcp::socket> ws_;
};

json pose(uint64_t id, double angle = 0.0) {
  const double d = 6.0;
  return {{"type", "pose"},
          {"id", id},
          {"position", {d * std::sin(angle), 0.5, d * std::cos(angle)}},
          {"forward", {-std::sin(angle), -0.07, -std::cos(angle)}},
          {"up", {0, 1, 0}},
          {"fov", 0.8}};
}

TEST(FrameServer, OneFramePerPose) {
  Running server(small_config());
  Client client(server.port());
  client.send(pose(7));
  const auto f = client.read_frame();
  EXPECT_EQ(f.header["id"], 1);
  EXPECT_EQ(f.header["pose_id"], 7);
  EXPECT_EQ(f.header["width"], 24);
  EXPECT_EQ(f.header["height"], 20);
  EXPECT_EQ(f.body.size(), 24u * 20u * 3u);
  EXPECT_EQ(f.header["stats"]["mode"], "opaque");
  EXPECT_GT(f.header["stats"]["fragments"].get<uint64_t>(), 0u);
  client.send(pose(8, 0.5));
  const auto g = client.read_frame();
  EXPECT_EQ(g.header["id"], 2);
  EXPECT_EQ(g.header["pose_id"], 8);
}

TEST(FrameServer, BurstCoalescesToLatestPose) {
  Running server(small_config());
  Client client(server.port());
  for (uint64_t i = 0; i < 100; ++i) client.send(pose(100 + i, 0.01 * i));
  uint64_t last_id = 0, last_pose = 0;
  int frames = 0;
  while (last_pose != 199) {
    const auto f = client.read_frame();
    const uint64_t id = f.header["id"], p = f.header["pose_id"];
    EXPECT_GT(id, last_id);
    EXPECT_GT(p, last_pose);
    last_id = id;
    last_pose = p;
    ASSERT_LE(++frames, 100);
  }
  EXPECT_EQ(last_pose, 199u);
}

TEST(FrameServer, OpacityChangeSwitchesToTransparent) {
  PipelineConfig c = small_config();
  c.strategy = Strategy::vcsv;
  Running server(c);
  Client client(server.port());
  client.send(pose(1));
  const auto a = client.read_frame();
  EXPECT_EQ(a.header["stats"]["mode"], "opaque");
  EXPECT_EQ(a.header["stats"]["strategy"], "vcsv");
  client.send({{"type", "set"}, {"key", "alpha"}, {"value", "0.1"}});
  const auto b = client.read_frame();
  EXPECT_EQ(b.header["pose_id"], 1);
  EXPECT_EQ(b.header["stats"]["mode"], "transparent");
  EXPECT_EQ(b.header["stats"]["strategy"], "vsv");
  EXPECT_DOUBLE_EQ(b.header["stats"]["alpha"].get<double>(), 0.1);
  client.send(pose(2, 0.3));
  EXPECT_EQ(client.read_frame().header["stats"]["mode"], "transparent");
  client.send({{"type", "set"}, {"key", "alpha"}, {"value", "1"}});
  const auto d = client.read_frame();
  EXPECT_EQ(d.header["stats"]["mode"], "opaque");
  EXPECT_EQ(d.header["stats"]["strategy"], "vcsv");
}

TEST(FrameServer, MalformedMessagesGetErrorsAndConnectionSurvives) {
  Running server(small_config());
  Client client(server.port());
  bool binary = true;
  for (const std::string bad : {"{not json", R"({"type":"pose","id":-1})", R"({"type":"dance"})", "[1,2]",
                                R"({"type":"pose","id":3,"position":[0,0],"forward":[0,0,-1],"up":[0,1,0],"fov":1})"}) {
    client.send_raw(bad);
    const json e = json::parse(client.read(binary));
    EXPECT_FALSE(binary);
    EXPECT_EQ(e["type"], "error") << bad;
    EXPECT_TRUE(e["message"].is_string());
  }
  client.send({{"type", "set"}, {"key", "res"}, {"value", "100"}});
  client.send(pose(5));
  const json e = json::parse(client.read(binary));
  EXPECT_EQ(e["type"], "error");
  const auto f = client.read_frame();
  EXPECT_EQ(f.header["pose_id"], 5);
  EXPECT_EQ(f.header["width"], 24);
}

TEST(FrameServer, GeometrySettingRevoxelizes) {
  Running server(small_config());
  Client client(server.port());
  client.send(pose(1));
  const auto a = client.read_frame();
  client.send({{"type", "set"}, {"key", "res"}, {"value", "32"}});
  const auto b = client.read_frame();
  EXPECT_GT(b.header["stats"]["incidences"].get<uint64_t>(), a.header["stats"]["incidences"].get<uint64_t>());
}

TEST(FrameServer, BusyPortFailsAtStartup) {
  Running first(small_config());
  PipelineConfig c = small_config();
  c.port = first.port();
  FrameServer second(c);
  EXPECT_THROW(second.listen(), Error);
}

}  // namespace
}  // namespace voxline
