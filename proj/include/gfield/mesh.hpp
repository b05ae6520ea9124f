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

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <cstdint>
#include <limits>
#include <unordered_map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gfield {

using Vec3 = Eigen::Vector3d;
using Triangle = std::array<std::uint32_t, 3>;

// Triangles below this area (m^2) are degenerate.
inline constexpr double kDegenerateArea = 1e-12;

class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Aabb {
  Vec3 min = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 max = Vec3::Constant(-std::numeric_limits<double>::infinity());

  bool is_empty() const { return (min.array() > max.array()).any(); }

  void extend(const Vec3& p) {
    min = min.cwiseMin(p);
    max = max.cwiseMax(p);
  }
  void extend(const Aabb& b) {
    min = min.cwiseMin(b.min);
    max = max.cwiseMax(b.max);
  }

  Vec3 extent() const { return max - min; }
  Vec3 center() const { return 0.5 * (min + max); }

  bool contains(const Vec3& p, double tol = 0.0) const {
    return (p.array() >= min.array() - tol).all() && (p.array() <= max.array() + tol).all();
  }

  // Squared distance from p to the box (0 inside).
  double squared_distance(const Vec3& p) const {
    Vec3 d = (min - p).cwiseMax(p - max).cwiseMax(0.0);
    return d.squaredNorm();
  }

  // Grows every side by `fraction` of the extent along that axis.
  Aabb expanded(double fraction) const {
    Vec3 pad = extent() * fraction;
    return {min - pad, max + pad};
  }
};

struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<Triangle> triangles;
  std::string name;

  bool empty() const { return triangles.empty(); }

  Vec3 corner(std::size_t tri, int k) const { return vertices[triangles[tri][k]]; }

  // Area-weighted normal: half the cross product of two edges.
  Vec3 area_normal(std::size_t tri) const {
    const Vec3& a = vertices[triangles[tri][0]];
    const Vec3& b = vertices[triangles[tri][1]];
    const Vec3& c = vertices[triangles[tri][2]];
    return 0.5 * (b - a).cross(c - a);
  }

  double area(std::size_t tri) const { return area_normal(tri).norm(); }

  double total_area() const {
    double sum = 0.0;
    for (std::size_t t = 0; t < triangles.size(); ++t) sum += area(t);
    return sum;
  }

  bool is_degenerate(std::size_t tri) const { return area(tri) < kDegenerateArea; }

  Aabb bounds() const {
    Aabb box;
    for (const auto& tri : triangles)
      for (auto v : tri) box.extend(vertices[v]);
    return box;
  }

  // Throws MeshError if any triangle references a missing vertex.
  void check_indices() const {
    for (std::size_t t = 0; t < triangles.size(); ++t)
      for (auto v : triangles[t])
        if (v >= vertices.size())
          throw MeshError("triangle " + std::to_string(t) + " references vertex " +
                          std::to_string(v) + " of " + std::to_string(vertices.size()));
  }

  TriangleMesh flipped() const {
    TriangleMesh out = *this;
    for (auto& tri : out.triangles) std::swap(tri[1], tri[2]);
    return out;
  }
};

struct ValidationReport {
  std::size_t boundary_edge_count = 0;
  std::size_t nonmanifold_edge_count = 0;
  std::size_t degenerate_triangle_count = 0;
  bool is_watertight = false;

  bool operator==(const ValidationReport&) const = default;
};

// Undirected edge packed as (low << 32) | high.
using EdgeKey = std::uint64_t;

inline EdgeKey undirected(std::uint32_t a, std::uint32_t b) {
  if (a > b) std::swap(a, b);
  return (static_cast<EdgeKey>(a) << 32) | b;
}
inline std::uint32_t edge_low(EdgeKey e) { return static_cast<std::uint32_t>(e >> 32); }
inline std::uint32_t edge_high(EdgeKey e) { return static_cast<std::uint32_t>(e & 0xffffffffu); }

// Number of incident triangles for every undirected edge.
inline std::unordered_map<EdgeKey, int> edge_incidence(const TriangleMesh& mesh) {
  std::unordered_map<EdgeKey, int> count;
  count.reserve(mesh.triangles.size() * 2);
  for (const auto& tri : mesh.triangles)
    for (int k = 0; k < 3; ++k) ++count[undirected(tri[k], tri[(k + 1) % 3])];
  return count;
}

inline ValidationReport validate(const TriangleMesh& mesh) {
  ValidationReport report;
  for (const auto& [edge, n] : edge_incidence(mesh)) {
    if (n == 1) ++report.boundary_edge_count;
    if (n > 2) ++report.nonmanifold_edge_count;
  }
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
    if (mesh.is_degenerate(t)) ++report.degenerate_triangle_count;
  report.is_watertight = report.boundary_edge_count == 0 && report.nonmanifold_edge_count == 0;
  return report;
}

// V - E + F over the referenced vertices.
inline long euler_characteristic(const TriangleMesh& mesh) {
  std::vector<char> used(mesh.vertices.size(), 0);
  for (const auto& tri : mesh.triangles)
    for (auto v : tri) used[v] = 1;
  long v = 0;
  for (char u : used) v += u;
  long e = static_cast<long>(edge_incidence(mesh).size());
  return v - e + static_cast<long>(mesh.triangles.size());
}

// Concatenates meshes, offsetting indices.
inline TriangleMesh merge(std::span<const TriangleMesh> parts) {
  TriangleMesh out;
  for (const auto& part : parts) {
    auto base = static_cast<std::uint32_t>(out.vertices.size());
    out.vertices.insert(out.vertices.end(), part.vertices.begin(), part.vertices.end());
    for (auto tri : part.triangles) out.triangles.push_back({tri[0] + base, tri[1] + base, tri[2] + base});
  }
  return out;
}

}  // namespace gfield
