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

// Marching cubes over a ScalarGrid.
//
// The 256-entry case table is generated once from first principles rather
// than transcribed: on each cube face the iso-contour segments are fixed by
// the face's corner signs alone (ambiguous faces always separate the inside
// corners), segments are chained into loops around the cube, and each loop
// is fan-triangulated. Two cells sharing a face therefore always agree on
// that face's contour, which makes the output closed wherever the level set
// stays away from the grid boundary.

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "gfield/lattice.hpp"
#include "gfield/mesh.hpp"
#include "gfield/parallel.hpp"

namespace gfield {

namespace mc {

// Corner c sits at offset (c & 1, (c >> 1) & 1, (c >> 2) & 1).
// Edge e = axis * 4 + m joins corner kEdgeCorners[e][0] to the corner one
// step further along `axis`.
struct CubeEdges {
  std::array<std::array<int, 2>, 12> corners{};
  std::array<int, 12> axis{};
};

inline const CubeEdges& cube_edges() {
  static const CubeEdges edges = [] {
    CubeEdges e;
    for (int axis = 0; axis < 3; ++axis) {
      int u = (axis + 1) % 3, v = (axis + 2) % 3;
      for (int m = 0; m < 4; ++m) {
        int a = ((m & 1) << u) | (((m >> 1) & 1) << v);
        e.corners[axis * 4 + m] = {a, a | (1 << axis)};
        e.axis[axis * 4 + m] = axis;
      }
    }
    return e;
  }();
  return edges;
}

inline int edge_between(int a, int b) {
  const auto& e = cube_edges();
  for (int k = 0; k < 12; ++k)
    if ((e.corners[k][0] == a && e.corners[k][1] == b) || (e.corners[k][0] == b && e.corners[k][1] == a)) return k;
  return -1;
}

using CaseTriangles = std::vector<std::array<int, 3>>;  // cube edge ids

inline bool share_face(const std::array<std::array<int, 4>, 6>& faces, int e1, int e2) {
  const auto& e = cube_edges();
  auto on = [](const std::array<int, 4>& face, int c) {
    for (int f : face)
      if (f == c) return true;
    return false;
  };
  for (const auto& face : faces)
    if (on(face, e.corners[e1][0]) && on(face, e.corners[e1][1]) && on(face, e.corners[e2][0]) &&
        on(face, e.corners[e2][1]))
      return true;
  return false;
}

inline std::array<CaseTriangles, 256> generate_table() {
  // Faces as corner cycles, counter-clockwise about the outward normal.
  std::array<std::array<int, 4>, 6> faces{};
  for (int axis = 0; axis < 3; ++axis) {
    int u = (axis + 1) % 3, v = (axis + 2) % 3;
    for (int side = 0; side < 2; ++side) {
      int base = side << axis;
      std::array<int, 4> cyc{base, base | (1 << u), base | (1 << u) | (1 << v), base | (1 << v)};
      if (side == 0) std::swap(cyc[1], cyc[3]);
      faces[axis * 2 + side] = cyc;
    }
  }

  std::array<CaseTriangles, 256> table;
  for (int config = 0; config < 256; ++config) {
    auto inside = [&](int c) { return (config >> c) & 1; };
    std::array<int, 12> next;
    next.fill(-1);
    for (const auto& face : faces) {
      // Crossings in counter-clockwise order: (edge, is_exit).
      std::array<std::pair<int, bool>, 4> cross{};
      int n = 0;
      for (int m = 0; m < 4; ++m) {
        int a = face[m], b = face[(m + 1) % 4];
        if (inside(a) != inside(b)) cross[n++] = {edge_between(a, b), inside(a) == 1};
      }
      // Each exit joins the entry just before it, cutting off the inside
      // corners between them.
      for (int m = 0; m < n; ++m) {
        if (!cross[m].second) continue;
        int prev = (m + n - 1) % n;
        next[cross[m].first] = cross[prev].first;
      }
    }
    std::array<bool, 12> seen{};
    for (int start = 0; start < 12; ++start) {
      if (next[start] < 0 || seen[start]) continue;
      std::vector<int> loop;
      for (int e = start; !seen[e]; e = next[e]) {
        seen[e] = true;
        loop.push_back(e);
      }
      // Fan from an apex whose diagonals never run along a cube face; such a
      // diagonal could coincide with one from the neighbouring cell.
      std::size_t n = loop.size(), apex = 0;
      for (std::size_t r = 0; r < n; ++r) {
        bool clean = true;
        for (std::size_t k = 2; k + 1 < n && clean; ++k)
          clean = !share_face(faces, loop[r], loop[(r + k) % n]);
        if (clean) {
          apex = r;
          break;
        }
        if (r + 1 == n) throw std::logic_error("marching cubes: no face-free fan for case " + std::to_string(config));
      }
      for (std::size_t k = 1; k + 1 < n; ++k)
        table[config].push_back({loop[apex], loop[(apex + k) % n], loop[(apex + k + 1) % n]});
    }
  }

  // Orient so normals point toward increasing field: with only corner 0
  // below iso, the single triangle must face away from corner 0.
  const auto& e = cube_edges();
  auto mid = [&](int edge) {
    Vec3 p = Vec3::Zero();
    for (int c : e.corners[edge]) p += Vec3(c & 1, (c >> 1) & 1, (c >> 2) & 1);
    return Vec3(p / 2);
  };
  const auto& probe = table[1].front();
  Vec3 a = mid(probe[0]), b = mid(probe[1]), c = mid(probe[2]);
  if ((b - a).cross(c - a).dot((a + b + c) / 3.0) < 0.0)
    for (auto& tris : table)
      for (auto& t : tris) std::swap(t[1], t[2]);
  return table;
}

inline const std::array<CaseTriangles, 256>& case_table() {
  static const auto table = generate_table();
  return table;
}

}  // namespace mc

// Lattice edge a marching-cubes vertex lies on: the lower node and the axis.
struct LatticeEdge {
  std::size_t node = 0;
  int axis = 0;
};

struct IsoSurface {
  TriangleMesh mesh;
  std::vector<LatticeEdge> vertex_edges;  // one per mesh vertex
};

// Extracts the `iso` level set. Samples strictly below iso count as inside;
// triangle normals point toward increasing values. Vertices on shared cell
// edges are welded, and numbered in cell order, so output is deterministic.
inline IsoSurface extract_isosurface(const ScalarGrid& grid, double iso) {
  const auto& table = mc::case_table();
  const auto& edges = mc::cube_edges();
  const int nx = grid.dims[0], ny = grid.dims[1], nz = grid.dims[2];

  // Global edge id: 3 * node index + axis.
  auto edge_id = [&](int i, int j, int k, int cube_edge) -> std::uint64_t {
    int c = edges.corners[cube_edge][0];
    std::size_t node = grid.index(i + (c & 1), j + ((c >> 1) & 1), k + ((c >> 2) & 1));
    return 3 * static_cast<std::uint64_t>(node) + edges.axis[cube_edge];
  };

  std::vector<std::vector<std::array<std::uint64_t, 3>>> slabs(nz - 1);
  parallel_for(static_cast<std::size_t>(nz - 1), [&](std::size_t ks) {
    int k = static_cast<int>(ks);
    auto& out = slabs[ks];
    for (int j = 0; j < ny - 1; ++j)
      for (int i = 0; i < nx - 1; ++i) {
        int config = 0;
        for (int c = 0; c < 8; ++c)
          if (grid.at(i + (c & 1), j + ((c >> 1) & 1), k + ((c >> 2) & 1)) < iso) config |= 1 << c;
        for (const auto& t : table[config])
          out.push_back({edge_id(i, j, k, t[0]), edge_id(i, j, k, t[1]), edge_id(i, j, k, t[2])});
      }
  });

  IsoSurface result;
  TriangleMesh& mesh = result.mesh;
  std::unordered_map<std::uint64_t, std::uint32_t> vertex_of;
  auto vertex = [&](std::uint64_t id) {
    auto [it, fresh] = vertex_of.try_emplace(id, static_cast<std::uint32_t>(mesh.vertices.size()));
    if (fresh) {
      auto axis = static_cast<int>(id % 3);
      auto node = static_cast<std::size_t>(id / 3);
      auto [i, j, k] = grid.coords(node);
      std::array<int, 3> far{i, j, k};
      ++far[axis];
      double v0 = grid.at(i, j, k), v1 = grid.at(far[0], far[1], far[2]);
      double t = (iso - v0) / (v1 - v0);
      Vec3 p = grid.point(i, j, k);
      p[axis] += t * grid.spacing[axis];
      mesh.vertices.push_back(p);
      result.vertex_edges.push_back({node, axis});
    }
    return it->second;
  };
  for (const auto& slab : slabs)
    for (const auto& t : slab) {
      std::uint32_t a = vertex(t[0]), b = vertex(t[1]), c = vertex(t[2]);
      mesh.triangles.push_back({a, b, c});
    }
  return result;
}

inline TriangleMesh marching_cubes(const ScalarGrid& grid, double iso) { return extract_isosurface(grid, iso).mesh; }

}  // namespace gfield
