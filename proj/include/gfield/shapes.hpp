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

// Procedural meshes used as fixtures by the tests, the acceptance suite and
// the demo manifest generator. All are outward oriented.

#include <cmath>
#include <map>
#include <numbers>

#include "gfield/mesh.hpp"

namespace gfield::shapes {

// Axis-aligned box [lo, hi] with 12 triangles.
inline TriangleMesh box(const Vec3& lo = Vec3::Zero(), const Vec3& hi = Vec3::Ones()) {
  TriangleMesh m;
  m.name = "box";
  for (int i = 0; i < 8; ++i)
    m.vertices.emplace_back(i & 1 ? hi.x() : lo.x(), i & 2 ? hi.y() : lo.y(), i & 4 ? hi.z() : lo.z());
  m.triangles = {{0, 2, 1}, {1, 2, 3},   // z = lo
                 {4, 5, 6}, {5, 7, 6},   // z = hi
                 {0, 1, 4}, {1, 5, 4},   // y = lo
                 {2, 6, 3}, {3, 6, 7},   // y = hi
                 {0, 4, 2}, {2, 4, 6},   // x = lo
                 {1, 3, 5}, {3, 7, 5}};  // x = hi
  return m;
}

// Icosahedron refined `levels` times, vertices projected onto the sphere.
inline TriangleMesh icosphere(double radius, int levels, const Vec3& center = Vec3::Zero()) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> v = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                         {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (auto& p : v) p.normalize();
  std::vector<Triangle> f = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                             {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                             {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                             {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int l = 0; l < levels; ++l) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> mid;
    auto midpoint = [&](std::uint32_t a, std::uint32_t b) {
      auto key = std::minmax(a, b);
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      v.push_back((v[a] + v[b]).normalized());
      auto id = static_cast<std::uint32_t>(v.size() - 1);
      mid.emplace(key, id);
      return id;
    };
    std::vector<Triangle> next;
    next.reserve(f.size() * 4);
    for (auto [a, b, c] : f) {
      auto ab = midpoint(a, b), bc = midpoint(b, c), ca = midpoint(c, a);
      next.push_back({a, ab, ca});
      next.push_back({b, bc, ab});
      next.push_back({c, ca, bc});
      next.push_back({ab, bc, ca});
    }
    f = std::move(next);
  }
  TriangleMesh m;
  m.name = "sphere";
  for (const auto& p : v) m.vertices.push_back(center + radius * p);
  m.triangles = std::move(f);
  return m;
}

// Side wall of a z-aligned cylinder: `segments` around, `rows` bands along
// the axis, spanning z in [center.z - height/2, center.z + height/2].
inline TriangleMesh open_cylinder(double radius, double height, int segments, int rows,
                                  const Vec3& center = Vec3::Zero()) {
  TriangleMesh m;
  m.name = "cylinder";
  for (int r = 0; r <= rows; ++r) {
    double z = center.z() - height / 2 + height * r / rows;
    for (int s = 0; s < segments; ++s) {
      double a = 2.0 * std::numbers::pi * s / segments;
      m.vertices.emplace_back(center.x() + radius * std::cos(a), center.y() + radius * std::sin(a), z);
    }
  }
  auto id = [&](int r, int s) { return static_cast<std::uint32_t>(r * segments + (s % segments)); };
  for (int r = 0; r < rows; ++r)
    for (int s = 0; s < segments; ++s) {
      m.triangles.push_back({id(r, s), id(r, s + 1), id(r + 1, s + 1)});
      m.triangles.push_back({id(r, s), id(r + 1, s + 1), id(r + 1, s)});
    }
  return m;
}

// Cylinder wall closed by flat caps made of `cap_rings` concentric rings.
inline TriangleMesh capped_cylinder(double radius, double height, int segments, int rows, int cap_rings,
                                    const Vec3& center = Vec3::Zero()) {
  TriangleMesh m = open_cylinder(radius, height, segments, rows, center);
  m.name = "capped_cylinder";
  for (int side = 0; side < 2; ++side) {
    double z = center.z() + (side == 0 ? -height / 2 : height / 2);
    // ring index k = cap_rings is the wall rim; k = 0 is the center point.
    std::vector<std::vector<std::uint32_t>> ring(cap_rings + 1);
    ring[cap_rings].resize(segments);
    for (int s = 0; s < segments; ++s)
      ring[cap_rings][s] = static_cast<std::uint32_t>((side == 0 ? 0 : rows * segments) + s);
    for (int k = 1; k < cap_rings; ++k) {
      double rr = radius * k / cap_rings;
      for (int s = 0; s < segments; ++s) {
        double a = 2.0 * std::numbers::pi * s / segments;
        ring[k].push_back(static_cast<std::uint32_t>(m.vertices.size()));
        m.vertices.emplace_back(center.x() + rr * std::cos(a), center.y() + rr * std::sin(a), z);
      }
    }
    auto hub = static_cast<std::uint32_t>(m.vertices.size());
    m.vertices.emplace_back(center.x(), center.y(), z);
    auto emit = [&](std::uint32_t a, std::uint32_t b, std::uint32_t c) {
      // Bottom cap faces -z, top cap faces +z.
      if (side == 0)
        m.triangles.push_back({a, c, b});
      else
        m.triangles.push_back({a, b, c});
    };
    for (int s = 0; s < segments; ++s) {
      int s1 = (s + 1) % segments;
      if (cap_rings == 1) {
        emit(hub, ring[1][s], ring[1][s1]);
        continue;
      }
      emit(hub, ring[1][s], ring[1][s1]);
      for (int k = 1; k < cap_rings; ++k) {
        emit(ring[k][s], ring[k + 1][s], ring[k + 1][s1]);
        emit(ring[k][s], ring[k + 1][s1], ring[k][s1]);
      }
    }
  }
  return m;
}

}  // namespace gfield::shapes
