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

// Reference computations for tests, written independently of the library
// code paths they check.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <unistd.h>
#include <utility>
#include <vector>

#include "gfield/mesh.hpp"

namespace oracle {

using gfield::TriangleMesh;
using gfield::Vec3;

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto d = std::filesystem::temp_directory_path() / ("gfield_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(d);
  std::filesystem::create_directories(d);
  return d;
}

inline void write_text(const std::filesystem::path& p, const std::string& text) { std::ofstream(p) << text; }

// Distance from p to segment ab by clamped projection.
inline double segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
  Vec3 ab = b - a;
  double len2 = ab.squaredNorm();
  double t = len2 > 0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  return (p - (a + t * ab)).norm();
}

// Plane projection if it lands inside (sub-area signs), else nearest edge.
inline double triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  Vec3 n = (b - a).cross(c - a);
  double nn = n.squaredNorm();
  if (nn > 0) {
    Vec3 q = p - n * ((p - a).dot(n) / nn);
    double s0 = (b - a).cross(q - a).dot(n), s1 = (c - b).cross(q - b).dot(n), s2 = (a - c).cross(q - c).dot(n);
    if (s0 >= 0 && s1 >= 0 && s2 >= 0) return (p - q).norm();
  }
  return std::min({segment_distance(p, a, b), segment_distance(p, b, c), segment_distance(p, c, a)});
}

inline double brute_distance(const TriangleMesh& m, const Vec3& p) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < m.triangles.size(); ++t)
    best = std::min(best, triangle_distance(p, m.corner(t, 0), m.corner(t, 1), m.corner(t, 2)));
  return best;
}

// Ray/triangle hit test (two-sided).
inline bool ray_hits(const Vec3& o, const Vec3& d, const Vec3& a, const Vec3& b, const Vec3& c) {
  Vec3 e1 = b - a, e2 = c - a, h = d.cross(e2);
  double det = e1.dot(h);
  if (std::abs(det) < 1e-15) return false;
  Vec3 s = o - a;
  double u = s.dot(h) / det;
  if (u < 0 || u > 1) return false;
  Vec3 q = s.cross(e1);
  double v = d.dot(q) / det;
  if (v < 0 || u + v > 1) return false;
  return e2.dot(q) / det > 0;
}

struct Estimate {
  double value, sigma;
};

// Unsigned solid angle from the fraction of uniform random rays that hit.
inline Estimate ray_solid_angle(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& p, int rays,
                                std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0, 1);
  int hits = 0;
  for (int k = 0; k < rays; ++k) {
    Vec3 d(n(rng), n(rng), n(rng));
    if (ray_hits(p, d.normalized(), a, b, c)) ++hits;
  }
  double q = static_cast<double>(hits) / rays;
  return {4 * std::numbers::pi * q, 4 * std::numbers::pi * std::sqrt(q * (1 - q) / rays)};
}

// Edge -> incident triangle count, by enumerating sorted vertex pairs.
inline std::map<std::pair<std::uint32_t, std::uint32_t>, int> edge_counts(const TriangleMesh& m) {
  std::map<std::pair<std::uint32_t, std::uint32_t>, int> c;
  for (const auto& t : m.triangles)
    for (int e = 0; e < 3; ++e) {
      auto a = t[e], b = t[(e + 1) % 3];
      c[{std::min(a, b), std::max(a, b)}]++;
    }
  return c;
}

inline int count_with(const TriangleMesh& m, int incidence) {
  int n = 0;
  for (const auto& [e, k] : edge_counts(m)) n += k == incidence;
  return n;
}

// Roots of w^2 - w_h w - delta = 0.
inline std::pair<double, double> gif_roots(double w_h, double delta) {
  double disc = std::sqrt(w_h * w_h + 4 * delta);
  return {(w_h - disc) / 2, (w_h + disc) / 2};
}

// Sign-change bisection of f on [lo, hi].
template <class F>
double bisect(F&& f, double lo, double hi, double tol = 1e-14) {
  bool flo = f(lo);
  while (hi - lo > tol) {
    double m = 0.5 * (lo + hi);
    if (f(m) == flo)
      lo = m;
    else
      hi = m;
  }
  return 0.5 * (lo + hi);
}

inline TriangleMesh unit_square(double z = 0.0) {
  TriangleMesh m;
  m.vertices = {Vec3(0, 0, z), Vec3(1, 0, z), Vec3(1, 1, z), Vec3(0, 1, z)};
  m.triangles = {{0, 1, 2}, {0, 2, 3}};
  return m;
}

inline TriangleMesh single_triangle() {
  TriangleMesh m;
  m.vertices = {Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)};
  m.triangles = {{0, 1, 2}};
  return m;
}

// Sphere SDF relative to a center.
inline double sphere_sdf(const Vec3& p, const Vec3& c, double r) { return (p - c).norm() - r; }

}  // namespace oracle
