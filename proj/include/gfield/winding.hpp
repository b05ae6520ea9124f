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

// Generalized winding numbers over (possibly open) triangle meshes, exact
// and BVH-accelerated, plus closest-point queries on the same hierarchy.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "gfield/geometry.hpp"
#include "gfield/mesh.hpp"

namespace gfield {

// Queries closer than this to the surface are on-surface; they are answered
// at a point pushed kOnSurfaceOffset along the nearest triangle's normal.
inline constexpr double kOnSurfaceDistance = 1e-9;
inline constexpr double kOnSurfaceOffset = 1e-8;
inline constexpr double kDefaultBeta = 2.0;

struct SolidAngle {
  double steradians = 0.0;
  bool on_surface = false;
};

struct WindingValue {
  double value = 0.0;
  bool on_surface = false;
};

// Signed solid angle of the oriented triangle (a, b, c) seen from p, via
//   tan(omega / 2) = a.(b x c) / (|a||b||c| + (a.b)|c| + (a.c)|b| + (b.c)|a|)
// with a, b, c taken relative to p. The denominator is evaluated in a
// permutation-independent order, so reversing the orientation negates the
// result bitwise.
inline SolidAngle triangle_solid_angle(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& p) {
  Vec3 n = (b - a).cross(c - a);
  if (0.5 * n.norm() < kDegenerateArea) return {};
  Vec3 ra = a - p, rb = b - p, rc = c - p;
  double la = ra.norm(), lb = rb.norm(), lc = rc.norm();
  if (la < kOnSurfaceDistance || lb < kOnSurfaceDistance || lc < kOnSurfaceDistance) return {0.0, true};

  double numer = ra.dot(rb.cross(rc));
  std::array<double, 3> lens{la, lb, lc};
  std::sort(lens.begin(), lens.end());
  std::array<double, 3> terms{ra.dot(rb) * lc, ra.dot(rc) * lb, rb.dot(rc) * la};
  std::sort(terms.begin(), terms.end());
  double denom = lens[0] * lens[1] * lens[2] + terms[0] + terms[1] + terms[2];
  return {2.0 * std::atan2(numer, denom), false};
}

namespace detail {

inline Vec3 unit_normal(const TriangleMesh& mesh, std::size_t tri) {
  Vec3 n = mesh.area_normal(tri);
  double len = n.norm();
  return len > 0.0 ? Vec3(n / len) : Vec3(0, 0, 1);
}

// Tracks the nearest non-degenerate triangle closer than kOnSurfaceDistance.
struct SurfaceProbe {
  double best_sq = kOnSurfaceDistance * kOnSurfaceDistance;
  std::int64_t triangle = -1;

  void visit(const TriangleMesh& mesh, std::uint32_t t, const Vec3& p) {
    const Vec3& a = mesh.corner(t, 0);
    const Vec3& b = mesh.corner(t, 1);
    const Vec3& c = mesh.corner(t, 2);
    Vec3 lo = a.cwiseMin(b).cwiseMin(c).array() - kOnSurfaceDistance;
    Vec3 hi = a.cwiseMax(b).cwiseMax(c).array() + kOnSurfaceDistance;
    if ((p.array() < lo.array()).any() || (p.array() > hi.array()).any()) return;
    if (mesh.is_degenerate(t)) return;
    double d2 = (closest_point_on_triangle(p, a, b, c) - p).squaredNorm();
    if (d2 < best_sq || (d2 == best_sq && triangle >= 0 && t < triangle)) {
      best_sq = d2;
      triangle = t;
    }
  }
};

inline double raw_solid_angle_sum(const TriangleMesh& mesh, const Vec3& p, SurfaceProbe* probe) {
  double sum = 0.0;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    if (probe) probe->visit(mesh, static_cast<std::uint32_t>(t), p);
    sum += triangle_solid_angle(mesh.corner(t, 0), mesh.corner(t, 1), mesh.corner(t, 2), p).steradians;
  }
  return sum;
}

}  // namespace detail

// W(p) = (1 / 4pi) * sum of triangle solid angles, summed in triangle order.
inline WindingValue winding_exact(const TriangleMesh& mesh, const Vec3& p) {
  detail::SurfaceProbe probe;
  double sum = detail::raw_solid_angle_sum(mesh, p, &probe);
  if (probe.triangle < 0) return {sum / (4.0 * std::numbers::pi), false};
  Vec3 q = p + kOnSurfaceOffset * detail::unit_normal(mesh, static_cast<std::size_t>(probe.triangle));
  return {detail::raw_solid_angle_sum(mesh, q, nullptr) / (4.0 * std::numbers::pi), true};
}

struct BvhNode {
  Aabb box;
  std::uint32_t left = 0, right = 0;  // children, internal nodes only
  std::uint32_t first = 0, count = 0;  // slice of BvhIndex::order, leaves only
  Vec3 normal_sum = Vec3::Zero();      // sum of area-weighted normals (m^2)
  Vec3 centroid = Vec3::Zero();        // area-weighted centroid (m)
  double area = 0.0;                   // m^2
  double radius = 0.0;                 // max distance from centroid to a vertex (m)

  bool is_leaf() const { return count > 0; }
};

struct ClosestPoint {
  Vec3 point = Vec3::Zero();
  double distance = std::numeric_limits<double>::infinity();
  std::uint32_t triangle = 0;
};

class BvhIndex {
 public:
  static constexpr std::uint32_t kLeafSize = 8;

  explicit BvhIndex(TriangleMesh mesh) : mesh_(std::move(mesh)) {
    if (mesh_.triangles.empty()) throw MeshError("build_bvh: mesh has no triangles");
    mesh_.check_indices();
    const std::size_t n = mesh_.triangles.size();
    order_.resize(n);
    centers_.resize(n);
    unit_normals_.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
      order_[t] = static_cast<std::uint32_t>(t);
      unit_normals_[t] = mesh_.is_degenerate(t) ? Vec3::Zero() : detail::unit_normal(mesh_, t);
      centers_[t] = (mesh_.corner(t, 0) + mesh_.corner(t, 1) + mesh_.corner(t, 2)) / 3.0;
    }
    nodes_.reserve(2 * n / kLeafSize + 2);
    build(0, static_cast<std::uint32_t>(n));
  }

  const TriangleMesh& mesh() const { return mesh_; }
  const std::vector<BvhNode>& nodes() const { return nodes_; }
  const std::vector<std::uint32_t>& order() const { return order_; }

  // Sum of solid angles, with far clusters replaced by their dipole term.
  // beta == 0 falls back to the exact per-triangle sum.
  WindingValue winding(const Vec3& p, double beta = kDefaultBeta) const {
    if (beta == 0.0) return winding_exact(mesh_, p);
    detail::SurfaceProbe probe;
    double sum = traverse(p, beta, &probe);
    if (probe.triangle < 0) return {sum / (4.0 * std::numbers::pi), false};
    Vec3 q = p + kOnSurfaceOffset * detail::unit_normal(mesh_, static_cast<std::size_t>(probe.triangle));
    return {traverse(q, beta, nullptr) / (4.0 * std::numbers::pi), true};
  }

  // Globally nearest surface point; ties resolve to the lowest triangle id.
  ClosestPoint closest_point(const Vec3& p) const {
    ClosestPoint best;
    double best_sq = std::numeric_limits<double>::infinity();
    std::uint32_t stack[128];
    double stack_d2[128];
    int top = 0;
    stack[top] = 0;
    stack_d2[top++] = nodes_[0].box.squared_distance(p);
    while (top > 0) {
      --top;
      if (stack_d2[top] > best_sq) continue;
      const BvhNode& node = nodes_[stack[top]];
      if (node.is_leaf()) {
        for (std::uint32_t k = node.first; k < node.first + node.count; ++k) {
          std::uint32_t t = order_[k];
          const Vec3& a = mesh_.corner(t, 0);
          double plane = unit_normals_[t].dot(p - a);
          if (plane * plane > best_sq) continue;
          Vec3 q = closest_point_on_triangle(p, a, mesh_.corner(t, 1), mesh_.corner(t, 2));
          double d2 = (q - p).squaredNorm();
          if (d2 < best_sq || (d2 == best_sq && t < best.triangle)) {
            best_sq = d2;
            best.point = q;
            best.triangle = t;
          }
        }
        continue;
      }
      double dl = nodes_[node.left].box.squared_distance(p);
      double dr = nodes_[node.right].box.squared_distance(p);
      // Push the farther child first so the nearer one is visited next.
      auto push = [&](std::uint32_t child, double d2) {
        if (d2 <= best_sq) {
          stack[top] = child;
          stack_d2[top++] = d2;
        }
      };
      if (dl <= dr) {
        push(node.right, dr);
        push(node.left, dl);
      } else {
        push(node.left, dl);
        push(node.right, dr);
      }
    }
    best.distance = std::sqrt(best_sq);
    return best;
  }

  // Calls fn(triangle, closest point, squared distance) for every triangle
  // within `radius` of p whose node boxes pass `keep_box`. fn returns false
  // to stop the traversal.
  template <class Fn, class BoxFilter>
  void for_each_within(const Vec3& p, double radius, Fn&& fn, BoxFilter&& keep_box) const {
    const double r2 = radius * radius;
    std::uint32_t stack[128];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
      const BvhNode& node = nodes_[stack[--top]];
      if (node.box.squared_distance(p) > r2 || !keep_box(node.box)) continue;
      if (node.is_leaf()) {
        for (std::uint32_t k = node.first; k < node.first + node.count; ++k) {
          std::uint32_t t = order_[k];
          Vec3 q = closest_point_on_triangle(p, mesh_.corner(t, 0), mesh_.corner(t, 1), mesh_.corner(t, 2));
          double d2 = (q - p).squaredNorm();
          if (d2 <= r2 && !fn(t, q, d2)) return;
        }
        continue;
      }
      stack[top++] = node.right;
      stack[top++] = node.left;
    }
  }

  template <class Fn>
  void for_each_within(const Vec3& p, double radius, Fn&& fn) const {
    for_each_within(p, radius, std::forward<Fn>(fn), [](const Aabb&) { return true; });
  }

 private:
  std::uint32_t build(std::uint32_t first, std::uint32_t count) {
    auto index = static_cast<std::uint32_t>(nodes_.size());
    nodes_.emplace_back();
    BvhNode node;
    for (std::uint32_t k = first; k < first + count; ++k)
      for (int c = 0; c < 3; ++c) node.box.extend(mesh_.corner(order_[k], c));

    if (count <= kLeafSize) {
      node.first = first;
      node.count = count;
      Vec3 weighted = Vec3::Zero();
      for (std::uint32_t k = first; k < first + count; ++k) {
        std::uint32_t t = order_[k];
        if (mesh_.is_degenerate(t)) continue;
        Vec3 an = mesh_.area_normal(t);
        double a = an.norm();
        node.normal_sum += an;
        node.area += a;
        weighted += a * centers_[t];
      }
      node.centroid = node.area > 0.0 ? Vec3(weighted / node.area) : node.box.center();
    } else {
      int axis = 0;
      node.box.extent().maxCoeff(&axis);
      std::uint32_t half = count / 2;
      auto begin = order_.begin() + first;
      std::nth_element(begin, begin + half, begin + count, [&](std::uint32_t x, std::uint32_t y) {
        double cx = centers_[x][axis], cy = centers_[y][axis];
        return cx < cy || (cx == cy && x < y);
      });
      node.left = build(first, half);
      node.right = build(first + half, count - half);
      const BvhNode& l = nodes_[node.left];
      const BvhNode& r = nodes_[node.right];
      node.normal_sum = l.normal_sum + r.normal_sum;
      node.area = l.area + r.area;
      node.centroid = node.area > 0.0 ? Vec3((l.area * l.centroid + r.area * r.centroid) / node.area)
                                       : node.box.center();
    }
    double r2 = 0.0;
    for (std::uint32_t k = first; k < first + count; ++k)
      for (int c = 0; c < 3; ++c) r2 = std::max(r2, (mesh_.corner(order_[k], c) - node.centroid).squaredNorm());
    node.radius = std::sqrt(r2);
    nodes_[index] = node;
    return index;
  }

  double traverse(const Vec3& p, double beta, detail::SurfaceProbe* probe) const {
    double sum = 0.0;
    std::uint32_t stack[128];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
      const BvhNode& node = nodes_[stack[--top]];
      Vec3 to_centroid = node.centroid - p;
      double dist = to_centroid.norm();
      if (!node.box.contains(p, kOnSurfaceDistance) && dist > beta * node.radius) {
        sum += node.normal_sum.dot(to_centroid) / (dist * dist * dist);
        continue;
      }
      if (node.is_leaf()) {
        for (std::uint32_t k = node.first; k < node.first + node.count; ++k) {
          std::uint32_t t = order_[k];
          if (probe) probe->visit(mesh_, t, p);
          sum += triangle_solid_angle(mesh_.corner(t, 0), mesh_.corner(t, 1), mesh_.corner(t, 2), p).steradians;
        }
        continue;
      }
      stack[top++] = node.right;
      stack[top++] = node.left;
    }
    return sum;
  }

  TriangleMesh mesh_;
  std::vector<BvhNode> nodes_;
  std::vector<std::uint32_t> order_;
  std::vector<Vec3> centers_;
  std::vector<Vec3> unit_normals_;  // zero for degenerate triangles
};

inline BvhIndex build_bvh(const TriangleMesh& mesh) { return BvhIndex(mesh); }

inline WindingValue winding_fast(const BvhIndex& bvh, const Vec3& p, double beta = kDefaultBeta) {
  return bvh.winding(p, beta);
}

inline ClosestPoint closest_point(const BvhIndex& bvh, const Vec3& p) { return bvh.closest_point(p); }

}  // namespace gfield
