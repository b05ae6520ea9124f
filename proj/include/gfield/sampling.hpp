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
#include <cmath>
#include <random>
#include <vector>

#include "gfield/mesh.hpp"

namespace gfield {

struct SurfaceSample {
  Vec3 position;
  std::uint32_t triangle = 0;
  Vec3 barycentric;  // weights of the triangle's three corners
};

// Draws n points uniformly by area. The same seed yields bitwise identical
// output.
inline std::vector<SurfaceSample> surface_sample(const TriangleMesh& mesh, std::size_t n, std::uint64_t seed) {
  std::vector<double> cdf(mesh.triangles.size());
  double total = 0.0;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    total += mesh.area(t);
    cdf[t] = total;
  }
  if (!(total > 0.0)) throw MeshError("surface_sample: mesh has zero total area");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<SurfaceSample> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double pick = unit(rng) * total;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), pick);
    auto tri = static_cast<std::uint32_t>(std::min<std::size_t>(it - cdf.begin(), cdf.size() - 1));
    // Skip zero-area triangles that share a cdf value with their successor.
    while (mesh.area(tri) == 0.0 && tri + 1 < cdf.size()) ++tri;

    double s = std::sqrt(unit(rng));
    double r = unit(rng);
    Vec3 bary(1.0 - s, s * (1.0 - r), s * r);
    const Vec3& a = mesh.vertices[mesh.triangles[tri][0]];
    const Vec3& b = mesh.vertices[mesh.triangles[tri][1]];
    const Vec3& c = mesh.vertices[mesh.triangles[tri][2]];
    out.push_back({bary[0] * a + bary[1] * b + bary[2] * c, tri, bary});
  }
  return out;
}

}  // namespace gfield
