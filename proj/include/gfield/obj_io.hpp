// Copyright 2026 The gfield Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Wavefront OBJ reading and writing. Only `v` and `f` records carry data;
// normals, texture coordinates, groups and materials are skipped.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "gfield/mesh.hpp"

namespace gfield {

namespace detail {

inline std::string_view next_token(std::string_view& line) {
  std::size_t begin = line.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) {
    line = {};
    return {};
  }
  std::size_t end = line.find_first_of(" \t\r", begin);
  if (end == std::string_view::npos) end = line.size();
  std::string_view tok = line.substr(begin, end - begin);
  line.remove_prefix(end);
  return tok;
}

template <class T>
bool parse_number(std::string_view tok, T& out) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

}  // namespace detail

inline TriangleMesh load_obj(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MeshError(path.string() + ": cannot open file");

  TriangleMesh mesh;
  mesh.name = path.stem().string();
  std::vector<std::size_t> face_lines;
  auto fail = [&](std::size_t line_no, const std::string& what) {
    throw MeshError(path.string() + ":" + std::to_string(line_no) + ": " + what);
  };

  std::string raw;
  std::size_t line_no = 0;
  std::vector<long long> poly;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line(raw);
    std::string_view tag = detail::next_token(line);
    if (tag == "v") {
      Vec3 p;
      for (int k = 0; k < 3; ++k)
        if (!detail::parse_number(detail::next_token(line), p[k])) fail(line_no, "malformed vertex");
      mesh.vertices.push_back(p);
    } else if (tag == "f") {
      poly.clear();
      for (std::string_view tok = detail::next_token(line); !tok.empty(); tok = detail::next_token(line)) {
        long long idx = 0;
        if (!detail::parse_number(tok.substr(0, tok.find('/')), idx) || idx == 0)
          fail(line_no, "malformed face index '" + std::string(tok) + "'");
        if (idx < 0) {
          idx += static_cast<long long>(mesh.vertices.size());
          if (idx < 0) fail(line_no, "vertex index out of range");
        } else {
          idx -= 1;
        }
        poly.push_back(idx);
      }
      if (poly.size() < 3) fail(line_no, "face with fewer than 3 vertices");
      for (std::size_t k = 1; k + 1 < poly.size(); ++k) {
        mesh.triangles.push_back({static_cast<std::uint32_t>(poly[0]), static_cast<std::uint32_t>(poly[k]),
                                  static_cast<std::uint32_t>(poly[k + 1])});
        face_lines.push_back(line_no);
        for (long long v : {poly[0], poly[k], poly[k + 1]})
          if (v >= static_cast<long long>(std::numeric_limits<std::uint32_t>::max()))
            fail(line_no, "vertex index out of range");
      }
    }
  }
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
    for (auto v : mesh.triangles[t])
      if (v >= mesh.vertices.size())
        fail(face_lines[t], "vertex index " + std::to_string(v + 1) + " out of range (" +
                                std::to_string(mesh.vertices.size()) + " vertices)");
  return mesh;
}

inline void save_obj(const TriangleMesh& mesh, const std::filesystem::path& path) {
  std::FILE* f = std::fopen(path.string().c_str(), "wb");
  if (!f) throw MeshError(path.string() + ": cannot open for writing");
  bool ok = true;
  if (!mesh.name.empty()) ok &= std::fprintf(f, "o %s\n", mesh.name.c_str()) > 0;
  for (const auto& v : mesh.vertices) ok &= std::fprintf(f, "v %.17g %.17g %.17g\n", v.x(), v.y(), v.z()) > 0;
  for (const auto& t : mesh.triangles) ok &= std::fprintf(f, "f %u %u %u\n", t[0] + 1, t[1] + 1, t[2] + 1) > 0;
  ok &= std::fclose(f) == 0;
  if (!ok) throw MeshError(path.string() + ": write failed");
}

}  // namespace gfield
