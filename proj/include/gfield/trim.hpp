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

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "gfield/mesh.hpp"
#include "gfield/parallel.hpp"

namespace gfield {

inline constexpr double kTrimSnap = 1e-6;

using BoundaryLoop = std::vector<std::uint32_t>;

struct TrimmedMesh {
  TriangleMesh mesh;
  std::vector<BoundaryLoop> boundary_loops;
};

// Partitions the boundary edges into closed cycles. Each loop starts at its
// lowest vertex and follows the triangles' edge direction where it can.
inline std::vector<BoundaryLoop> boundary_loops(const TriangleMesh& mesh) {
  mesh.check_indices();
  std::unordered_map<EdgeKey, int> count;
  std::unordered_map<EdgeKey, std::pair<std::uint32_t, std::uint32_t>> directed;
  for (const auto& t : mesh.triangles) {
    for (int e = 0; e < 3; ++e) {
      const std::uint32_t a = t[e], b = t[(e + 1) % 3];
      const EdgeKey key = undirected(a, b);
      if (++count[key] > 2)
        throw MeshError("non-manifold edge (" + std::to_string(edge_low(key)) + ", " + std::to_string(edge_high(key)) +
                        ") shared by more than two triangles");
      directed[key] = {a, b};
    }
  }

  struct Half {
    std::uint32_t from, to;
  };
  std::vector<Half> edges;
  for (const auto& [key, c] : count)
    if (c == 1) edges.push_back({directed[key].first, directed[key].second});
  std::sort(edges.begin(), edges.end(),
            [](const Half& x, const Half& y) { return std::tie(x.from, x.to) < std::tie(y.from, y.to); });

  std::map<std::uint32_t, std::vector<std::size_t>> incident;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    incident[edges[e].from].push_back(e);
    incident[edges[e].to].push_back(e);
  }

  std::vector<char> used(edges.size(), 0);
  std::vector<BoundaryLoop> loops;
  for (const auto& [start, list] : incident) {
    for (;;) {
      bool open = std::any_of(list.begin(), list.end(), [&](std::size_t e) { return !used[e]; });
      if (!open) break;
      BoundaryLoop loop{start};
      std::uint32_t cur = start;
      for (;;) {
        // Prefer an unused edge leaving cur; fall back to one entering it.
        std::size_t pick = edges.size();
        bool forward = false;
        for (std::size_t e : incident[cur]) {
          if (used[e]) continue;
          const bool out = edges[e].from == cur;
          if (pick == edges.size() || (out && !forward)) {
            pick = e;
            forward = out;
          }
          if (forward) break;
        }
        if (pick == edges.size()) throw MeshError("boundary edges do not form closed loops");
        used[pick] = 1;
        cur = forward ? edges[pick].to : edges[pick].from;
        if (cur == start) break;
        loop.push_back(cur);
      }
      loops.push_back(std::move(loop));
    }
  }
  return loops;
}

// Keeps the region where the per-vertex values are positive. Mixed triangles
// are cut along the linear zero crossing of each sign-changing edge.
inline TrimmedMesh trim_by_values(const TriangleMesh& mesh, std::span<const double> g) {
  mesh.check_indices();
  if (g.size() != mesh.vertices.size()) throw std::invalid_argument("one value per vertex is required");

  TrimmedMesh out;
  out.mesh.name = mesh.name;
  constexpr std::uint32_t kNone = 0xffffffffu;
  std::vector<std::uint32_t> remap(mesh.vertices.size(), kNone);
  std::unordered_map<EdgeKey, std::uint32_t> crossings;
  std::vector<Vec3> cut_points;

  // Zero crossing of a sign-changing edge, measured from its lower index so
  // both triangles sharing the edge agree. Near-endpoint crossings snap.
  auto param = [&](EdgeKey key) {
    const std::uint32_t lo = edge_low(key), hi = edge_high(key);
    return g[lo] / (g[lo] - g[hi]);
  };
  auto snap_target = [&](EdgeKey key) -> std::uint32_t {
    const double t = param(key);
    if (t < kTrimSnap) return edge_low(key);
    if (t > 1.0 - kTrimSnap) return edge_high(key);
    return kNone;
  };

  // Original vertices first, in index order, then crossings in creation order.
  for (const auto& t : mesh.triangles) {
    const bool pos[3] = {g[t[0]] > 0.0, g[t[1]] > 0.0, g[t[2]] > 0.0};
    if (!pos[0] && !pos[1] && !pos[2]) continue;
    for (int e = 0; e < 3; ++e) {
      if (pos[e]) remap[t[e]] = 0;
      if (pos[e] != pos[(e + 1) % 3]) {
        const std::uint32_t s = snap_target(undirected(t[e], t[(e + 1) % 3]));
        if (s != kNone) remap[s] = 0;
      }
    }
  }
  std::uint32_t next = 0;
  for (std::size_t v = 0; v < remap.size(); ++v)
    if (remap[v] != kNone) {
      remap[v] = next++;
      out.mesh.vertices.push_back(mesh.vertices[v]);
    }
  const std::uint32_t kept_vertices = next;

  auto crossing = [&](std::uint32_t a, std::uint32_t b) -> std::uint32_t {
    const EdgeKey key = undirected(a, b);
    if (const std::uint32_t s = snap_target(key); s != kNone) return remap[s];
    auto it = crossings.find(key);
    if (it != crossings.end()) return it->second;
    const std::uint32_t lo = edge_low(key), hi = edge_high(key);
    const Vec3 p = mesh.vertices[lo] + param(key) * (mesh.vertices[hi] - mesh.vertices[lo]);
    const std::uint32_t id = kept_vertices + static_cast<std::uint32_t>(cut_points.size());
    cut_points.push_back(p);
    crossings.emplace(key, id);
    return id;
  };
  auto emit = [&](std::uint32_t a, std::uint32_t b, std::uint32_t c) {
    if (a == b || b == c || c == a) return;
    out.mesh.triangles.push_back({a, b, c});
  };

  for (const auto& t : mesh.triangles) {
    const bool pos[3] = {g[t[0]] > 0.0, g[t[1]] > 0.0, g[t[2]] > 0.0};
    const int n = pos[0] + pos[1] + pos[2];
    if (n == 0) continue;
    if (n == 3) {
      emit(remap[t[0]], remap[t[1]], remap[t[2]]);
      continue;
    }
    // Rotate so corner 0 is the odd one out, keeping orientation.
    int r = 0;
    for (int c = 0; c < 3; ++c)
      if (pos[c] == (n == 1)) r = c;
    const std::uint32_t a = t[r], b = t[(r + 1) % 3], c = t[(r + 2) % 3];
    if (n == 1) {
      emit(remap[a], crossing(a, b), crossing(a, c));
    } else {
      const std::uint32_t xb = crossing(b, a), xc = crossing(c, a);
      emit(remap[b], remap[c], xc);
      emit(remap[b], xc, xb);
    }
  }

  out.mesh.vertices.insert(out.mesh.vertices.end(), cut_points.begin(), cut_points.end());
  out.boundary_loops = boundary_loops(out.mesh);
  return out;
}

template <class Field>
TrimmedMesh trim_by_gif(const TriangleMesh& mesh, Field&& g) {
  std::vector<double> values(mesh.vertices.size());
  parallel_for(values.size(), [&](std::size_t v) { values[v] = g(mesh.vertices[v]); });
  return trim_by_values(mesh, values);
}

}  // namespace gfield
