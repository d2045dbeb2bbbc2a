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

#include <array>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "binary_io.hpp"
#include "voxline/error.hpp"
#include "voxline/lineset.hpp"

namespace voxline {

namespace {

constexpr std::array<char, 4> kBinaryMagic{'L', 'N', 'S', '1'};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_float(std::string_view token, float& out) {
  const char* first = token.data();
  const char* last = first + token.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

[[noreturn]] void fail_line(size_t line, const std::string& what) {
  throw ParseError("line " + std::to_string(line) + ": " + what);
}

std::string format_float(float v) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

}  // namespace

LineSet parse_lns_text(std::string_view text) {
  LineSet out;
  bool have_header = false;
  std::vector<Vec3f> current;
  size_t current_start_line = 0;
  auto flush = [&](size_t line) {
    if (current.empty()) return;
    if (current.size() < 2) fail_line(current_start_line, "polyline with fewer than 2 vertices");
    out.add_polyline(current);
    current.clear();
    (void)line;
  };

  size_t line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    const size_t nl = text.find('\n', pos);
    const size_t end = nl == std::string_view::npos ? text.size() : nl;
    const std::string_view line = trim(text.substr(pos, end - pos));
    ++line_no;
    pos = end + 1;

    if (line.empty()) {
      if (have_header) flush(line_no);
      if (nl == std::string_view::npos) break;
      continue;
    }
    if (line.front() == '#') {
      if (nl == std::string_view::npos) break;
      continue;
    }
    const auto tokens = split_ws(line);
    if (!have_header) {
      float r = 0.0f;
      if (tokens.size() != 3 || tokens[0] != "lns" || tokens[1] != "1" ||
          !tokens[2].starts_with("radius=") || !parse_float(tokens[2].substr(7), r)) {
        fail_line(line_no, "malformed header, expected `lns 1 radius=<float>`");
      }
      if (!std::isfinite(r) || !(r > 0.0f)) fail_line(line_no, "radius must be positive and finite");
      out.radius = r;
      have_header = true;
    } else {
      if (tokens.size() != 4 || tokens[0] != "v") fail_line(line_no, "expected `v x y z`");
      Vec3f p;
      for (int a = 0; a < 3; ++a) {
        float value = 0.0f;
        if (!parse_float(tokens[1 + a], value)) fail_line(line_no, "invalid number");
        if (!std::isfinite(value)) fail_line(line_no, "non-finite coordinate");
        p[a] = value;
      }
      if (current.empty()) current_start_line = line_no;
      current.push_back(p);
    }
    if (nl == std::string_view::npos) break;
  }
  flush(line_no);
  if (out.polyline_count() == 0) throw ParseError("no polylines");
  return out;
}

std::string to_lns_text(const LineSet& lines) {
  std::string out = "lns 1 radius=" + format_float(lines.radius) + "\n";
  for (size_t p = 0; p < lines.polyline_count(); ++p) {
    if (p > 0) out += "\n";
    for (uint32_t i = lines.polyline_offsets[p]; i < lines.polyline_offsets[p + 1]; ++i) {
      const Vec3f& v = lines.vertices[i];
      out += "v " + format_float(v.x) + " " + format_float(v.y) + " " + format_float(v.z) + "\n";
    }
  }
  return out;
}

LineSet parse_lns_binary(std::span<const std::byte> bytes) {
  ByteReader in(bytes);
  if (!in.expect_magic(kBinaryMagic)) throw ParseError("byte offset 0: missing LNS1 magic");
  const uint32_t polylines = in.u32();
  const uint32_t vertex_count = in.u32();
  const size_t radius_offset = in.offset();
  const float radius = in.f32();
  if (!std::isfinite(radius) || !(radius > 0.0f)) {
    throw ParseError("byte offset " + std::to_string(radius_offset) + ": radius must be positive");
  }
  if (polylines == 0) throw ParseError("no polylines");

  LineSet out;
  out.radius = radius;
  out.polyline_offsets.assign(polylines + size_t{1}, 0);
  for (auto& o : out.polyline_offsets) o = in.u32();
  const size_t offsets_end = in.offset();
  if (out.polyline_offsets.front() != 0 || out.polyline_offsets.back() != vertex_count) {
    throw ParseError("byte offset " + std::to_string(offsets_end) + ": offsets do not match vertex count");
  }
  for (size_t p = 0; p < polylines; ++p) {
    if (out.polyline_offsets[p + 1] < out.polyline_offsets[p] + 2) {
      throw ParseError("byte offset " + std::to_string(offsets_end) + ": polyline " + std::to_string(p) +
                       " has fewer than 2 vertices");
    }
  }
  out.vertices.resize(vertex_count);
  for (auto& v : out.vertices) {
    const size_t at = in.offset();
    v.x = in.f32();
    v.y = in.f32();
    v.z = in.f32();
    if (!std::isfinite(v.x) || !std::isfinite(v.y) || !std::isfinite(v.z)) {
      throw ParseError("byte offset " + std::to_string(at) + ": non-finite coordinate");
    }
  }
  return out;
}

std::vector<std::byte> to_lns_binary(const LineSet& lines) {
  ByteWriter out;
  out.magic(kBinaryMagic);
  out.u32(static_cast<uint32_t>(lines.polyline_count()));
  out.u32(static_cast<uint32_t>(lines.vertex_count()));
  out.f32(lines.radius);
  for (uint32_t o : lines.polyline_offsets) out.u32(o);
  for (const auto& v : lines.vertices) {
    out.f32(v.x);
    out.f32(v.y);
    out.f32(v.z);
  }
  return out.take();
}

LineSetFormat detect_format(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot open " + path.string());
  std::array<char, 4> head{};
  f.read(head.data(), head.size());
  return (f.gcount() == 4 && head == kBinaryMagic) ? LineSetFormat::binary : LineSetFormat::text;
}

LineSet load_lineset(const std::filesystem::path& path, LineSetFormat format) {
  const auto bytes = read_file(path);
  if (format == LineSetFormat::binary) return parse_lns_binary(bytes);
  return parse_lns_text(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

LineSet load_lineset(const std::filesystem::path& path) { return load_lineset(path, detect_format(path)); }

void save_lineset(const std::filesystem::path& path, const LineSet& lines, LineSetFormat format) {
  if (format == LineSetFormat::binary) {
    write_file(path, to_lns_binary(lines));
  } else {
    const std::string text = to_lns_text(lines);
    write_file(path, std::span(reinterpret_cast<const std::byte*>(text.data()), text.size()));
  }
}

}  // namespace voxline
