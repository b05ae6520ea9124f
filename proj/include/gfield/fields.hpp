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

// Scalar fields of an open garment mesh derived from its winding number W:
//   occupancy      o = W - 0.5
//   GIF argument   g = W (W - w_h) - delta
//   binary GIF     h = 1 if g > 0 else 0
// and the ground-truth signed distance to the watertight surface extracted
// from o = 0. Signed distances are negative inside.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gfield/lattice.hpp"
#include "gfield/marching_cubes.hpp"
#include "gfield/mesh.hpp"
#include "gfield/parallel.hpp"
#include "gfield/winding.hpp"

namespace gfield {

struct FieldParams {
  double w_h = 0.75;
  double delta = 0.01;

  void check() const {
    if (!(w_h > 0.5 && w_h < 1.0)) throw std::invalid_argument("w_h must lie in (0.5, 1)");
    if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  }
};

inline double occupancy(double w) { return w - 0.5; }

inline double gif_argument(double w, const FieldParams& params = {}) { return w * (w - params.w_h) - params.delta; }

// A zero argument maps to 0.
inline int gif_binary(double w, const FieldParams& params = {}) { return gif_argument(w, params) > 0.0 ? 1 : 0; }

struct FieldSample {
  Vec3 point = Vec3::Zero();
  double w = 0.0;  // winding number
  double o = 0.0;  // occupancy
  double g = 0.0;  // GIF argument
  int h = 0;       // binary GIF
  double d = 0.0;  // unsigned distance to the garment (m)
  double s = 0.0;  // signed distance to the watertight surface (m)
};

inline FieldSample sample_fields(const BvhIndex& garment, const BvhIndex& watertight, const Vec3& p,
                                 const FieldParams& params = {}, double beta = kDefaultBeta) {
  FieldSample out;
  out.point = p;
  out.w = garment.winding(p, beta).value;
  out.o = occupancy(out.w);
  out.g = gif_argument(out.w, params);
  out.h = out.g > 0.0 ? 1 : 0;
  out.d = garment.closest_point(p).distance;
  double ds = watertight.closest_point(p).distance;
  out.s = watertight.winding(p, beta).value > 0.5 ? -ds : ds;
  return out;
}

inline ScalarGrid winding_grid(const BvhIndex& bvh, const GridSpec& spec, double beta = kDefaultBeta) {
  return fill([&](const Vec3& p) { return bvh.winding(p, beta).value; }, spec);
}

template <class Fn>
ScalarGrid map_grid(const ScalarGrid& src, Fn&& fn) {
  ScalarGrid out = src;
  for (auto& v : out.values) v = fn(v);
  return out;
}

inline ScalarGrid occupancy_grid(const ScalarGrid& winding) {
  return map_grid(winding, [](double w) { return occupancy(w); });
}
inline ScalarGrid gif_argument_grid(const ScalarGrid& winding, const FieldParams& params = {}) {
  return map_grid(winding, [&](double w) { return gif_argument(w, params); });
}
inline ScalarGrid gif_binary_grid(const ScalarGrid& winding, const FieldParams& params = {}) {
  return map_grid(winding, [&](double w) { return static_cast<double>(gif_binary(w, params)); });
}

struct WatertightOptions {
  double beta = kDefaultBeta;
  // Move each vertex along its lattice edge onto the o = 0 crossing of the
  // exact-topology winding field, by bisection down to `refine_tolerance`.
  bool refine = true;
  double refine_tolerance = 1e-6;  // m
};

// Closed surface of the o = 0 level set, given the garment hierarchy and its
// winding grid. Normals point outward (o decreases along them).
inline TriangleMesh watertight_from_winding(const BvhIndex& garment, const ScalarGrid& winding,
                                            const WatertightOptions& opts = {}) {
  // Extract from -o so that "inside" (o > 0) is below the iso value.
  ScalarGrid field = map_grid(winding, [](double w) { return -occupancy(w); });
  IsoSurface iso = extract_isosurface(field, 0.0);
  if (iso.mesh.triangles.empty())
    throw GridError("occupancy level set not resolved by the grid (no cell crosses o = 0)");

  if (opts.refine) {
    parallel_for(iso.mesh.vertices.size(), [&](std::size_t v) {
      const LatticeEdge& e = iso.vertex_edges[v];
      Vec3 a = field.point(e.node);
      Vec3 b = a;
      b[e.axis] += field.spacing[e.axis];
      // Orient the bracket as [inside, outside].
      if (!(field.values[e.node] < 0.0)) std::swap(a, b);
      while ((b - a).norm() > opts.refine_tolerance) {
        Vec3 m = 0.5 * (a + b);
        if (occupancy(garment.winding(m, opts.beta).value) > 0.0)
          a = m;
        else
          b = m;
      }
      iso.mesh.vertices[v] = b;
    });
  }

  ValidationReport report = validate(iso.mesh);
  if (!report.is_watertight)
    throw GridError("extracted occupancy surface is not closed (" + std::to_string(report.boundary_edge_count) +
                    " boundary edges); enlarge the grid margin");
  iso.mesh.name = garment.mesh().name.empty() ? "watertight" : garment.mesh().name + "_watertight";
  return iso.mesh;
}

inline void require_covers(const GridSpec& spec, const TriangleMesh& mesh) {
  spec.check();
  Aabb box = mesh.bounds();
  if (box.is_empty()) throw MeshError("mesh has no triangles");
  if (!spec.bounds.contains(box.min) || !spec.bounds.contains(box.max))
    throw GridError("grid bounds do not contain the mesh");
}

inline TriangleMesh watertight_from_occupancy(const TriangleMesh& mesh, const GridSpec& spec,
                                              const WatertightOptions& opts = {}) {
  if (mesh.triangles.empty()) throw MeshError("watertight_from_occupancy: empty mesh");
  require_covers(spec, mesh);
  BvhIndex bvh(mesh);
  return watertight_from_winding(bvh, winding_grid(bvh, spec, opts.beta), opts);
}

// Signed distance to a closed surface on the lattice of `spec`: negative
// where the surface's winding number exceeds 0.5.
inline ScalarGrid signed_distance_grid(const BvhIndex& closed, const GridSpec& spec, double beta = kDefaultBeta) {
  return fill(
      [&](const Vec3& p) {
        double d = closed.closest_point(p).distance;
        return closed.winding(p, beta).value > 0.5 ? -d : d;
      },
      spec);
}

struct GroundTruthSdf {
  TriangleMesh watertight;
  ScalarGrid sdf;
};

inline GroundTruthSdf ground_truth_sdf_with_surface(const TriangleMesh& mesh, const GridSpec& spec,
                                                    const WatertightOptions& opts = {}) {
  GroundTruthSdf out;
  out.watertight = watertight_from_occupancy(mesh, spec, opts);
  out.sdf = signed_distance_grid(BvhIndex(out.watertight), spec, opts.beta);
  return out;
}

inline ScalarGrid ground_truth_sdf(const TriangleMesh& mesh, const GridSpec& spec, const WatertightOptions& opts = {}) {
  return ground_truth_sdf_with_surface(mesh, spec, opts).sdf;
}

// Zero level set of an SDF grid, normals pointing toward positive values.
inline TriangleMesh surface_from_sdf(const ScalarGrid& sdf) { return marching_cubes(sdf, 0.0); }

// True when p has two nearly equidistant closest surface points in clearly
// different directions: some triangle within (d + tolerance) of p is seen
// more than 60 degrees away from the nearest point.
inline bool near_medial_axis(const BvhIndex& surface, const Vec3& p, double tolerance) {
  ClosestPoint nearest = surface.closest_point(p);
  if (nearest.distance == 0.0) return false;
  const Vec3 dir = (p - nearest.point) / nearest.distance;
  const double cone = std::numbers::pi / 3.0;
  // Boxes whose bounding sphere lies inside the 60-degree cone around the
  // nearest direction cannot contribute.
  auto keep_box = [&](const Aabb& box) {
    Vec3 v = p - box.center();
    double len = v.norm();
    double r = 0.5 * box.extent().norm();
    if (len <= r) return true;
    double angle = std::acos(std::clamp(dir.dot(v) / len, -1.0, 1.0));
    return angle + std::asin(r / len) >= cone;
  };
  bool found = false;
  surface.for_each_within(
      p, nearest.distance + tolerance,
      [&](std::uint32_t, const Vec3& q, double d2) {
        if (d2 == 0.0) return true;
        if (dir.dot((p - q) / std::sqrt(d2)) < 0.5) {
          found = true;
          return false;
        }
        return true;
      },
      keep_box);
  return found;
}

struct EikonalReport {
  std::size_t qualifying = 0;  // interior nodes away from surface and medial axis
  std::size_t passing = 0;     // of those, | |grad s| - 1 | <= tolerance
  double fraction() const { return qualifying ? static_cast<double>(passing) / qualifying : 0.0; }
};

// Central-difference gradient norms of an SDF grid at interior nodes
// farther than 2 spacings from the surface and from its medial axis.
inline EikonalReport eikonal_check(const ScalarGrid& sdf, const BvhIndex& surface, double tolerance = 0.02) {
  const double h = sdf.min_spacing();
  std::vector<char> qualifies(sdf.size(), 0), passes(sdf.size(), 0);
  parallel_for(sdf.size(), [&](std::size_t idx) {
    auto [i, j, k] = sdf.coords(idx);
    if (i == 0 || j == 0 || k == 0 || i == sdf.dims[0] - 1 || j == sdf.dims[1] - 1 || k == sdf.dims[2] - 1) return;
    if (std::abs(sdf.values[idx]) <= 2.0 * h) return;
    Vec3 p = sdf.point(idx);
    if (near_medial_axis(surface, p, h)) return;
    qualifies[idx] = 1;
    passes[idx] = std::abs(node_gradient(sdf, i, j, k).norm() - 1.0) <= tolerance;
  });
  EikonalReport report;
  for (std::size_t idx = 0; idx < sdf.size(); ++idx) {
    report.qualifying += qualifies[idx];
    report.passing += passes[idx];
  }
  return report;
}

}  // namespace gfield
