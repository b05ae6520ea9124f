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

#include <cmath>
#include <set>

#include "gfield/obj_io.hpp"
#include "gfield/sampling.hpp"
#include "gfield/shapes.hpp"
#include "oracles.hpp"

using namespace gfield;

class ObjFiles : public ::testing::Test {
 protected:
  std::filesystem::path dir = oracle::scratch_dir("mesh");
  void TearDown() override { std::filesystem::remove_all(dir); }
};

TEST_F(ObjFiles, LoadsMinimalTriangle) {
  oracle::write_text(dir / "t.obj", "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n");
  TriangleMesh m = load_obj(dir / "t.obj");
  EXPECT_EQ(m.vertices.size(), 3u);
  ASSERT_EQ(m.triangles.size(), 1u);
  EXPECT_EQ(m.triangles[0], (Triangle{0, 1, 2}));
}

TEST_F(ObjFiles, FanTriangulatesQuads) {
  oracle::write_text(dir / "q.obj", "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n");
  TriangleMesh m = load_obj(dir / "q.obj");
  ASSERT_EQ(m.triangles.size(), 2u);
  EXPECT_EQ(m.triangles[0], (Triangle{0, 1, 2}));
  EXPECT_EQ(m.triangles[1], (Triangle{0, 2, 3}));
}

TEST_F(ObjFiles, IgnoresNormalsUvsAndAcceptsNegativeIndices) {
  oracle::write_text(dir / "n.obj",
                     "# comment\nv 0 0 0\nv 1 0 0\nv 0 1 0\nvt 0 0\nvn 0 0 1\nf 1/1/1 2/1/1 3/1/1\nf -3 -2 -1\n");
  TriangleMesh m = load_obj(dir / "n.obj");
  ASSERT_EQ(m.triangles.size(), 2u);
  EXPECT_EQ(m.triangles[1], (Triangle{0, 1, 2}));
}

TEST_F(ObjFiles, OutOfRangeIndexReportsLine) {
  oracle::write_text(dir / "bad.obj", "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 9\n");
  try {
    load_obj(dir / "bad.obj");
    FAIL() << "expected an error";
  } catch (const MeshError& e) {
    EXPECT_NE(std::string(e.what()).find(":4:"), std::string::npos) << e.what();
  }
}

TEST_F(ObjFiles, MalformedFaceAndMissingFile) {
  oracle::write_text(dir / "bad.obj", "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 x 3\n");
  EXPECT_THROW(load_obj(dir / "bad.obj"), MeshError);
  oracle::write_text(dir / "short.obj", "v 0 0 0\nv 1 0 0\nf 1 2\n");
  EXPECT_THROW(load_obj(dir / "short.obj"), MeshError);
  EXPECT_THROW(load_obj(dir / "nope.obj"), MeshError);
}

TEST_F(ObjFiles, SaveWritesVerticesAndFaces) {
  save_obj(oracle::single_triangle(), dir / "one.obj");
  std::ifstream in(dir / "one.obj");
  int v = 0, f = 0;
  for (std::string line; std::getline(in, line);) {
    v += line.rfind("v ", 0) == 0;
    f += line.rfind("f ", 0) == 0;
  }
  EXPECT_EQ(v, 3);
  EXPECT_EQ(f, 1);
}

TEST_F(ObjFiles, CubeRoundTripIsExact) {
  TriangleMesh cube = shapes::box(Vec3(-0.1, 0.2, 0.3), Vec3(0.7, 1.1, 1.9));
  save_obj(cube, dir / "cube.obj");
  TriangleMesh back = load_obj(dir / "cube.obj");
  EXPECT_EQ(back.triangles, cube.triangles);
  ASSERT_EQ(back.vertices.size(), cube.vertices.size());
  for (std::size_t i = 0; i < cube.vertices.size(); ++i) EXPECT_EQ(back.vertices[i], cube.vertices[i]);
}

TEST_F(ObjFiles, EmptyMeshRoundTrip) {
  save_obj(TriangleMesh{}, dir / "empty.obj");
  TriangleMesh back = load_obj(dir / "empty.obj");
  EXPECT_TRUE(back.vertices.empty());
  EXPECT_TRUE(back.triangles.empty());
}

TEST(Validate, ClosedCubeIsWatertight) {
  auto r = validate(shapes::box());
  EXPECT_EQ(r.boundary_edge_count, 0u);
  EXPECT_EQ(r.nonmanifold_edge_count, 0u);
  EXPECT_TRUE(r.is_watertight);
}

TEST(Validate, SingleTriangleHasThreeBoundaryEdges) {
  auto r = validate(oracle::single_triangle());
  EXPECT_EQ(r.boundary_edge_count, 3u);
  EXPECT_FALSE(r.is_watertight);
}

TEST(Validate, OpenCylinderBoundaryMatchesEnumeration) {
  for (int n : {3, 8, 33}) {
    TriangleMesh m = shapes::open_cylinder(0.3, 0.6, n, 4);
    auto r = validate(m);
    EXPECT_EQ(r.boundary_edge_count, static_cast<std::size_t>(2 * n));
    EXPECT_EQ(r.boundary_edge_count, static_cast<std::size_t>(oracle::count_with(m, 1)));
    EXPECT_EQ(r.nonmanifold_edge_count, 0u);
  }
}

TEST(Validate, FlagsDegenerateAndNonManifold) {
  TriangleMesh m;
  m.vertices = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, -1, 0), Vec3(0, 0, 1), Vec3(2, 0, 0)};
  m.triangles = {{0, 1, 2}, {1, 0, 3}, {0, 1, 4}, {0, 1, 5}};
  auto r = validate(m);
  EXPECT_EQ(r.degenerate_triangle_count, 1u);
  EXPECT_EQ(r.nonmanifold_edge_count, 1u);
  EXPECT_FALSE(r.is_watertight);
  EXPECT_EQ(validate(m), r);
  EXPECT_EQ(m.triangles.size(), 4u);
}

TEST(SurfaceSample, CountAndDeterminism) {
  TriangleMesh m = shapes::open_cylinder(0.3, 0.6, 64, 16);
  auto a = surface_sample(m, 20480, 7);
  auto b = surface_sample(m, 20480, 7);
  ASSERT_EQ(a.size(), 20480u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    ASSERT_EQ(a[i].position, b[i].position);
    ASSERT_EQ(a[i].triangle, b[i].triangle);
  }
  auto c = surface_sample(m, 100, 8);
  EXPECT_NE(a[0].position, c[0].position);
}

TEST(SurfaceSample, EqualAreaTrianglesSplitBinomially) {
  TriangleMesh m = oracle::unit_square();
  const std::size_t n = 100000;
  auto s = surface_sample(m, n, 3);
  std::size_t first = 0;
  for (const auto& p : s) first += p.triangle == 0;
  const double sigma = std::sqrt(n * 0.25);
  EXPECT_NEAR(static_cast<double>(first), n / 2.0, 3 * sigma);
}

TEST(SurfaceSample, PointsLieInTheirTriangles) {
  TriangleMesh m = shapes::icosphere(0.4, 2);
  for (const auto& s : surface_sample(m, 5000, 11)) {
    for (int k = 0; k < 3; ++k) {
      EXPECT_GE(s.barycentric[k], 0.0);
      EXPECT_LE(s.barycentric[k], 1.0);
    }
    EXPECT_NEAR(s.barycentric.sum(), 1.0, 1e-12);
    Vec3 q = s.barycentric[0] * m.corner(s.triangle, 0) + s.barycentric[1] * m.corner(s.triangle, 1) +
             s.barycentric[2] * m.corner(s.triangle, 2);
    EXPECT_LT((q - s.position).norm(), 1e-15);
  }
}

TEST(SurfaceSample, ZeroAreaThrows) {
  TriangleMesh m;
  m.vertices = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(2, 0, 0)};
  m.triangles = {{0, 1, 2}};
  EXPECT_THROW(surface_sample(m, 10, 0), MeshError);
}
