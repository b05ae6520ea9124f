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

#include "gfield/fields.hpp"
#include "gfield/shapes.hpp"
#include "oracles.hpp"

using namespace gfield;

TEST(Occupancy, Substitution) {
  EXPECT_EQ(occupancy(0.5), 0.0);
  EXPECT_EQ(occupancy(1.0), 0.5);
  EXPECT_EQ(occupancy(0.0), -0.5);
}

TEST(GifArgument, Substitution) {
  EXPECT_NEAR(gif_argument(1.0), 0.24, 1e-15);
  EXPECT_NEAR(gif_argument(0.5), -0.135, 1e-15);
  EXPECT_NEAR(gif_argument(-0.1), 0.075, 1e-15);
}

TEST(GifBinary, Substitution) {
  EXPECT_EQ(gif_binary(1.0), 1);
  EXPECT_EQ(gif_binary(0.5), 0);
  EXPECT_EQ(gif_binary(-0.1), 1);
  EXPECT_EQ(gif_binary(0.0), 0);
}

TEST(GifBinary, ZeroArgumentMapsToZero) {
  FieldParams p{0.5, 0.5};  // w = 1 gives exactly 0
  ASSERT_EQ(gif_argument(1.0, p), 0.0);
  EXPECT_EQ(gif_binary(1.0, p), 0);
}

TEST(GifBinary, TransitionsAtQuadraticRoots) {
  auto [lo, hi] = oracle::gif_roots(0.75, 0.01);
  EXPECT_NEAR(lo, -0.01310437, 1e-7);
  EXPECT_NEAR(hi, 0.76310437, 1e-7);
  auto h = [](double w) { return gif_binary(w) == 1; };
  EXPECT_NEAR(oracle::bisect(h, -0.5, 0.2), lo, 1e-9);
  EXPECT_NEAR(oracle::bisect(h, 0.5, 1.5), hi, 1e-9);
}

TEST(GifBinary, AgreesWithArgumentSign) {
  for (int k = 0; k <= 30000; ++k) {
    double w = -1.0 + 3.0 * k / 30000;
    ASSERT_EQ(gif_binary(w) == 1, gif_argument(w) > 0.0) << w;
  }
}

TEST(FieldParams, RejectsOutOfRange) {
  EXPECT_NO_THROW(FieldParams{}.check());
  EXPECT_THROW((FieldParams{0.5, 0.01}.check()), std::invalid_argument);
  EXPECT_THROW((FieldParams{1.0, 0.01}.check()), std::invalid_argument);
  EXPECT_THROW((FieldParams{0.75, 0.0}.check()), std::invalid_argument);
}

TEST(Gif, ShellAroundFabricAndZeroFarAway) {
  // Slim tube: interior winding stays above the upper root mid-height.
  TriangleMesh m = shapes::open_cylinder(0.1, 0.6, 64, 48);
  int checked = 0;
  for (std::size_t t = 0; t < m.triangles.size(); t += 37) {
    Vec3 c = (m.corner(t, 0) + m.corner(t, 1) + m.corner(t, 2)) / 3.0;
    if (std::abs(c.z()) > 0.15) continue;
    Vec3 n = m.area_normal(t).normalized();
    EXPECT_EQ(gif_binary(winding_exact(m, c + 1e-3 * n).value), 1);
    EXPECT_EQ(gif_binary(winding_exact(m, c - 1e-3 * n).value), 1);
    ++checked;
  }
  EXPECT_GT(checked, 10);
  const double radius = (m.bounds().max - m.bounds().center()).norm();
  for (const Vec3& d : {Vec3(1, 0, 0), Vec3(0, 0, 1), Vec3(-0.6, 0.64, 0.48)})
    EXPECT_EQ(gif_binary(winding_exact(m, 10.5 * radius * d).value), 0);
}

TEST(FieldSample, ConsistentSymbols) {
  TriangleMesh m = shapes::open_cylinder(0.3, 0.6, 48, 12);
  GridSpec spec = GridSpec::cubic(m.bounds(), 40);
  TriangleMesh closed = watertight_from_occupancy(m, spec);
  BvhIndex g(m), w(closed);
  for (const Vec3& p : {Vec3(0, 0, 0), Vec3(0.31, 0, 0.1), Vec3(0.2, 0.1, 0.35), Vec3(0.5, 0.5, 0.5)}) {
    FieldSample s = sample_fields(g, w, p);
    EXPECT_EQ(s.o, s.w - 0.5);
    EXPECT_EQ(s.h == 1, s.g > 0.0);
    EXPECT_GE(s.d, 0.0);
  }
}

TEST(Watertight, OpenCylinderClosesWithSphereTopology) {
  TriangleMesh m = shapes::open_cylinder(0.3, 0.6, 96, 24);
  GridSpec spec = GridSpec::cubic(m.bounds(), 64);
  TriangleMesh closed = watertight_from_occupancy(m, spec);
  ValidationReport r = validate(closed);
  EXPECT_EQ(r.boundary_edge_count, 0u);
  EXPECT_EQ(r.nonmanifold_edge_count, 0u);
  EXPECT_EQ(oracle::count_with(closed, 1), 0);
  EXPECT_EQ(euler_characteristic(closed), 2);
}

TEST(Watertight, SphereStaysWithinSpacing) {
  const double r = 0.3;
  TriangleMesh s = shapes::icosphere(r, 4);
  GridSpec spec = GridSpec::cubic(s.bounds(), 48);
  const double h = spec.spacing().x();
  TriangleMesh closed = watertight_from_occupancy(s, spec);
  double worst = 0.0;
  for (const Vec3& v : closed.vertices) worst = std::max(worst, oracle::brute_distance(s, v));
  BvhIndex cb(closed);
  for (const Vec3& v : s.vertices) worst = std::max(worst, cb.closest_point(v).distance);
  EXPECT_LE(worst, 1.5 * h);
}

TEST(Watertight, EmptyMeshThrows) {
  GridSpec spec{{Vec3::Zero(), Vec3::Ones()}, {8, 8, 8}};
  EXPECT_THROW(watertight_from_occupancy(TriangleMesh{}, spec), MeshError);
}

TEST(Watertight, GridMustCoverMesh) {
  TriangleMesh m = shapes::open_cylinder(0.3, 0.6, 16, 4);
  GridSpec spec{{Vec3::Constant(-0.1), Vec3::Constant(0.1)}, {8, 8, 8}};
  EXPECT_THROW(watertight_from_occupancy(m, spec), GridError);
}

class SphereSdf : public ::testing::Test {
 protected:
  static constexpr double r = 0.3;
  GridSpec spec{{Vec3::Constant(-0.6), Vec3::Constant(0.6)}, {49, 49, 49}};  // h = 0.025
  TriangleMesh sphere = shapes::icosphere(r, 4);
  GroundTruthSdf gt = ground_truth_sdf_with_surface(sphere, spec);
  double h = spec.spacing().x();
};

TEST_F(SphereSdf, AnalyticValues) {
  ScalarGrid& s = gt.sdf;
  EXPECT_NEAR(s.at(24, 24, 24), -r, 1.5 * h);
  ASSERT_LT((s.point(44, 24, 24) - Vec3(0.5, 0, 0)).norm(), 1e-12);
  EXPECT_NEAR(s.at(44, 24, 24), 0.2, 1.5 * h);
}

TEST_F(SphereSdf, SurfaceVerticesNearZero) {
  for (const Vec3& v : gt.watertight.vertices) EXPECT_LE(std::abs(trilinear(gt.sdf, v)), 0.5 * h);
}

TEST_F(SphereSdf, SignMatchesOccupancyAwayFromSurface) {
  const TriangleMesh& w = gt.watertight;
  BvhIndex wb(w);
  for (std::size_t idx = 0; idx < gt.sdf.size(); idx += 7) {
    Vec3 p = gt.sdf.point(idx);
    if (wb.closest_point(p).distance <= h) continue;
    double o = occupancy(winding_exact(w, p).value);
    EXPECT_EQ(gt.sdf.values[idx] < 0.0, o > 0.0);
  }
}

TEST_F(SphereSdf, EikonalHolds) {
  EikonalReport e = eikonal_check(gt.sdf, BvhIndex(gt.watertight));
  EXPECT_GT(e.qualifying, 1000u);
  EXPECT_GE(e.fraction(), 0.9);
}

TEST(MedialAxis, CenterOfSphereIsFlagged) {
  BvhIndex s(shapes::icosphere(0.3, 3));
  EXPECT_TRUE(near_medial_axis(s, Vec3(0.001, 0, 0), 0.01));
  EXPECT_FALSE(near_medial_axis(s, Vec3(0.2, 0, 0), 0.01));
  EXPECT_FALSE(near_medial_axis(s, Vec3(0.6, 0.1, 0), 0.01));
}
