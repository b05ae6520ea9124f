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

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "gfield/fields.hpp"
#include "gfield/shapes.hpp"
#include "gfield/trim.hpp"
#include "oracles.hpp"

using namespace gfield;

namespace {

double area(const TriangleMesh& m) {
  double a = 0.0;
  for (std::size_t t = 0; t < m.triangles.size(); ++t) a += m.area(t);
  return a;
}

// Every boundary edge, as a directed-agnostic pair, appears in exactly one
// loop, and consecutive loop vertices are boundary edges.
void expect_loops_partition_boundary(const TriangleMesh& m, const std::vector<BoundaryLoop>& loops) {
  std::set<std::pair<std::uint32_t, std::uint32_t>> boundary;
  for (const auto& [e, c] : oracle::edge_counts(m))
    if (c == 1) boundary.insert(e);
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  for (const auto& loop : loops) {
    ASSERT_GE(loop.size(), 3u);
    for (std::size_t k = 0; k < loop.size(); ++k) {
      auto a = loop[k], b = loop[(k + 1) % loop.size()];
      auto e = std::make_pair(std::min(a, b), std::max(a, b));
      EXPECT_TRUE(boundary.count(e)) << a << "-" << b;
      EXPECT_TRUE(seen.insert(e).second) << "edge used twice";
    }
  }
  EXPECT_EQ(seen, boundary);
}

}  // namespace

TEST(BoundaryLoops, CubeTriangleAndCylinder) {
  EXPECT_TRUE(boundary_loops(shapes::box()).empty());
  auto tri = boundary_loops(oracle::single_triangle());
  ASSERT_EQ(tri.size(), 1u);
  EXPECT_EQ(tri[0], (BoundaryLoop{0, 1, 2}));
  for (int n : {5, 16, 40}) {
    TriangleMesh m = shapes::open_cylinder(0.2, 0.3, n, 3);
    auto loops = boundary_loops(m);
    ASSERT_EQ(loops.size(), 2u);
    EXPECT_EQ(loops[0].size(), static_cast<std::size_t>(n));
    EXPECT_EQ(loops[1].size(), static_cast<std::size_t>(n));
    EXPECT_EQ(loops[0][0], 0u);
    expect_loops_partition_boundary(m, loops);
  }
}

TEST(BoundaryLoops, FollowsTriangleOrientation) {
  TriangleMesh m = oracle::single_triangle();
  m.triangles[0] = {2, 1, 0};
  auto loops = boundary_loops(m);
  ASSERT_EQ(loops.size(), 1u);
  EXPECT_EQ(loops[0], (BoundaryLoop{0, 2, 1}));
}

TEST(BoundaryLoops, PinchedVertexGivesTwoLoops) {
  TriangleMesh m;
  m.vertices = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(-1, 0, 0), Vec3(0, -1, 0)};
  m.triangles = {{0, 1, 2}, {0, 3, 4}};
  auto loops = boundary_loops(m);
  EXPECT_EQ(loops.size(), 2u);
  expect_loops_partition_boundary(m, loops);
}

TEST(BoundaryLoops, NonManifoldEdgeIsReported) {
  TriangleMesh m;
  m.vertices = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, -1, 0), Vec3(0, 0, 1)};
  m.triangles = {{0, 1, 2}, {1, 0, 3}, {0, 1, 4}};
  try {
    boundary_loops(m);
    FAIL() << "expected an error";
  } catch (const MeshError& e) {
    EXPECT_NE(std::string(e.what()).find("non-manifold"), std::string::npos);
  }
}

TEST(Trim, PositiveEverywhereIsIdentity) {
  TriangleMesh m = shapes::open_cylinder(0.2, 0.3, 12, 4);
  TrimmedMesh t = trim_by_gif(m, [](const Vec3&) { return 1.0; });
  EXPECT_EQ(t.mesh.vertices, m.vertices);
  EXPECT_EQ(t.mesh.triangles, m.triangles);
  EXPECT_EQ(t.boundary_loops.size(), 2u);
}

TEST(Trim, NonPositiveEverywhereIsEmpty) {
  TriangleMesh m = shapes::box();
  EXPECT_TRUE(trim_by_gif(m, [](const Vec3&) { return 0.0; }).mesh.triangles.empty());
  EXPECT_TRUE(trim_by_gif(m, [](const Vec3& p) { return -1.0 - p.x(); }).mesh.triangles.empty());
}

TEST(Trim, SplitTrianglesKeepPositiveSide) {
  TriangleMesh m = oracle::single_triangle();
  TrimmedMesh one = trim_by_gif(m, [](const Vec3& p) { return p.x() - 0.5; });  // one corner positive
  EXPECT_EQ(one.mesh.triangles.size(), 1u);
  TrimmedMesh two = trim_by_gif(m, [](const Vec3& p) { return 0.5 - p.x(); });  // two corners positive
  EXPECT_EQ(two.mesh.triangles.size(), 2u);
  EXPECT_NEAR(area(one.mesh) + area(two.mesh), area(m), 1e-15);
  for (const TrimmedMesh* t : {&one, &two})
    for (std::size_t k = 0; k < t->mesh.triangles.size(); ++k)
      EXPECT_GT(t->mesh.area_normal(k).dot(m.area_normal(0)), 0.0);
}

TEST(Trim, CutVerticesInterpolateToZeroOnOriginalEdges) {
  TriangleMesh m = shapes::icosphere(0.5, 2);
  auto g = [](const Vec3& p) { return p.x() + 0.3 * p.y() - 0.1 * p.z() - 0.0731; };
  TrimmedMesh t = trim_by_gif(m, g);
  std::set<std::array<double, 3>> original;
  for (const Vec3& v : m.vertices) original.insert({v.x(), v.y(), v.z()});
  int cuts = 0;
  for (const Vec3& v : t.mesh.vertices) {
    if (original.count({v.x(), v.y(), v.z()})) continue;
    ++cuts;
    bool on_edge = false;
    for (const auto& [e, c] : oracle::edge_counts(m)) {
      const Vec3& a = m.vertices[e.first];
      const Vec3& b = m.vertices[e.second];
      if (oracle::segment_distance(v, a, b) > 1e-14) continue;
      double s = (v - a).norm() / (b - a).norm();
      double interp = (1 - s) * g(a) + s * g(b);
      EXPECT_NEAR(interp, 0.0, 1e-12);
      on_edge = true;
      break;
    }
    EXPECT_TRUE(on_edge);
  }
  EXPECT_GT(cuts, 10);
}

TEST(Trim, KeptPlusRemovedAreaIsOriginal) {
  TriangleMesh m = shapes::open_cylinder(0.3, 0.6, 48, 12);
  auto g = [](const Vec3& p) { return std::sin(7.1 * p.z() + 0.3) + 0.4 * p.x() - 0.0123; };
  TrimmedMesh kept = trim_by_gif(m, g);
  TrimmedMesh removed = trim_by_gif(m, [&](const Vec3& p) { return -g(p); });
  const double total = area(m);
  EXPECT_NEAR(area(kept.mesh) + area(removed.mesh), total, 1e-9 * total);
  expect_loops_partition_boundary(kept.mesh, kept.boundary_loops);
}

TEST(Trim, SnapsNearVertexCrossings) {
  TriangleMesh m = oracle::single_triangle();
  // Zero crossing 1e-8 of the way from the positive corner.
  auto g = [](const Vec3& p) { return p.x() > 0.5 ? 1e-8 : -1.0; };
  TrimmedMesh t = trim_by_gif(m, g);
  EXPECT_TRUE(t.mesh.triangles.empty());
  EXPECT_LE(t.mesh.vertices.size(), 1u);
}

TEST(Trim, Deterministic) {
  TriangleMesh m = shapes::icosphere(0.5, 3);
  auto g = [](const Vec3& p) { return p.z() - 0.2 * p.x() * p.x(); };
  TrimmedMesh a = trim_by_gif(m, g), b = trim_by_gif(m, g);
  EXPECT_EQ(a.mesh.vertices, b.mesh.vertices);
  EXPECT_EQ(a.mesh.triangles, b.mesh.triangles);
  EXPECT_EQ(a.boundary_loops, b.boundary_loops);
}

// A capped tube trimmed by the GIF argument of the same tube without caps
// loses its caps; the cut runs along the two rims.
TEST(Trim, CappedCylinderLosesItsCaps) {
  const double r = 0.15, h = 0.5;
  const int segments = 64, cap_rings = 8;
  TriangleMesh capped = shapes::capped_cylinder(r, h, segments, 32, cap_rings);
  TriangleMesh open = shapes::open_cylinder(r, h, segments, 32);
  BvhIndex garment(open);
  TrimmedMesh t = trim_by_gif(capped, [&](const Vec3& p) { return gif_argument(garment.winding(p).value); });
  ASSERT_EQ(t.boundary_loops.size(), 2u);
  const double spacing = r / cap_rings;
  for (const auto& loop : t.boundary_loops)
    for (auto v : loop) {
      const Vec3& p = t.mesh.vertices[v];
      double rho = std::hypot(p.x(), p.y());
      double dz = std::abs(std::abs(p.z()) - h / 2);
      EXPECT_LE(std::hypot(rho - r, dz), 1.5 * spacing) << p.transpose();
    }
}
