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

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "gfield/mesh.hpp"
#include "gfield/parallel.hpp"

namespace gfield {

class GridError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Dims = std::array<int, 3>;

// Lattice covering `bounds` with dims[k] samples along axis k, corners
// included.
struct GridSpec {
  Aabb bounds;
  Dims dims{2, 2, 2};

  Vec3 spacing() const {
    Vec3 e = bounds.extent();
    return {e.x() / (dims[0] - 1), e.y() / (dims[1] - 1), e.z() / (dims[2] - 1)};
  }

  void check() const {
    for (int k = 0; k < 3; ++k) {
      if (dims[k] < 2) throw GridError("grid needs at least 2 samples per axis");
      if (!(bounds.max[k] > bounds.min[k])) throw GridError("grid bounds must have positive extent");
    }
  }

  // A res^3 lattice over a cube that contains `box` grown by `margin` (a
  // fraction of its extent, per side). Spacing is uniform.
  static GridSpec cubic(const Aabb& box, int res, double margin = 0.1) {
    if (res < 2) throw GridError("resolution must be at least 2");
    Aabb grown = box.expanded(margin);
    double side = grown.extent().maxCoeff();
    if (!(side > 0.0)) throw GridError("cannot build a grid around an empty box");
    Vec3 half = Vec3::Constant(side / 2);
    return {{grown.center() - half, grown.center() + half}, {res, res, res}};
  }
};

// Dense samples in x-fastest order.
struct ScalarGrid {
  Vec3 origin = Vec3::Zero();
  Vec3 spacing = Vec3::Ones();
  Dims dims{2, 2, 2};
  std::vector<double> values;

  ScalarGrid() = default;
  ScalarGrid(const Vec3& origin_, const Vec3& spacing_, Dims dims_, double fill_value = 0.0)
      : origin(origin_), spacing(spacing_), dims(dims_) {
    check_shape();
    values.assign(size(), fill_value);
  }
  explicit ScalarGrid(const GridSpec& spec, double fill_value = 0.0)
      : ScalarGrid((spec.check(), spec.bounds.min), spec.spacing(), spec.dims, fill_value) {}

  void check_shape() const {
    for (int k = 0; k < 3; ++k) {
      if (dims[k] < 2) throw GridError("grid needs at least 2 samples per axis");
      if (!(spacing[k] > 0.0)) throw GridError("grid spacing must be positive");
    }
  }

  std::size_t size() const {
    return static_cast<std::size_t>(dims[0]) * static_cast<std::size_t>(dims[1]) * static_cast<std::size_t>(dims[2]);
  }

  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(dims[0]) * (static_cast<std::size_t>(j) + static_cast<std::size_t>(dims[1]) * k);
  }

  std::array<int, 3> coords(std::size_t idx) const {
    int i = static_cast<int>(idx % dims[0]);
    idx /= dims[0];
    int j = static_cast<int>(idx % dims[1]);
    return {i, j, static_cast<int>(idx / dims[1])};
  }

  Vec3 point(int i, int j, int k) const {
    return {origin.x() + i * spacing.x(), origin.y() + j * spacing.y(), origin.z() + k * spacing.z()};
  }
  Vec3 point(std::size_t idx) const {
    auto [i, j, k] = coords(idx);
    return point(i, j, k);
  }

  double& at(int i, int j, int k) { return values[index(i, j, k)]; }
  double at(int i, int j, int k) const { return values[index(i, j, k)]; }

  Aabb bounds() const { return {origin, point(dims[0] - 1, dims[1] - 1, dims[2] - 1)}; }

  double min_spacing() const { return spacing.minCoeff(); }

  bool same_shape(const ScalarGrid& o) const { return origin == o.origin && spacing == o.spacing && dims == o.dims; }
};

inline void require_same_shape(const ScalarGrid& a, const ScalarGrid& b, const char* what) {
  if (!a.same_shape(b)) throw GridError(std::string(what) + ": grid shape mismatch");
}

// Samples `field` at every lattice point.
template <class Field>
ScalarGrid fill(Field&& field, const GridSpec& spec) {
  ScalarGrid grid(spec);
  parallel_for(grid.size(), [&](std::size_t idx) { grid.values[idx] = field(grid.point(idx)); });
  return grid;
}

namespace detail {

// Cell index and fractional offset along one axis. Coordinates within 1e-9
// cells of a node snap onto it.
inline bool locate(double coord, double origin, double h, int n, int& cell, double& t) {
  double u = (coord - origin) / h;
  double r = std::round(u);
  if (std::abs(u - r) < 1e-9) u = r;
  if (u < 0.0 || u > n - 1) return false;
  cell = std::min(static_cast<int>(std::floor(u)), n - 2);
  t = u - cell;
  return true;
}

}  // namespace detail

inline double trilinear(const ScalarGrid& g, const Vec3& p) {
  int c[3];
  double t[3];
  for (int k = 0; k < 3; ++k)
    if (!detail::locate(p[k], g.origin[k], g.spacing[k], g.dims[k], c[k], t[k]))
      throw GridError("trilinear: point outside grid bounds");
  auto v = [&](int di, int dj, int dk) { return g.at(c[0] + di, c[1] + dj, c[2] + dk); };
  auto lerp = [](double a, double b, double s) { return s == 0.0 ? a : s == 1.0 ? b : a + s * (b - a); };
  double x00 = lerp(v(0, 0, 0), v(1, 0, 0), t[0]);
  double x10 = lerp(v(0, 1, 0), v(1, 1, 0), t[0]);
  double x01 = lerp(v(0, 0, 1), v(1, 0, 1), t[0]);
  double x11 = lerp(v(0, 1, 1), v(1, 1, 1), t[0]);
  double y0 = lerp(x00, x10, t[1]);
  double y1 = lerp(x01, x11, t[1]);
  return lerp(y0, y1, t[2]);
}

// Central differences of the trilinear interpolant with step = spacing.
inline Vec3 gradient(const ScalarGrid& g, const Vec3& p) {
  Vec3 out;
  for (int k = 0; k < 3; ++k) {
    Vec3 step = Vec3::Zero();
    step[k] = g.spacing[k];
    out[k] = (trilinear(g, p + step) - trilinear(g, p - step)) / (2.0 * g.spacing[k]);
  }
  return out;
}

// Central difference at an interior lattice node, without interpolation.
inline Vec3 node_gradient(const ScalarGrid& g, int i, int j, int k) {
  return {(g.at(i + 1, j, k) - g.at(i - 1, j, k)) / (2.0 * g.spacing.x()),
          (g.at(i, j + 1, k) - g.at(i, j - 1, k)) / (2.0 * g.spacing.y()),
          (g.at(i, j, k + 1) - g.at(i, j, k - 1)) / (2.0 * g.spacing.z())};
}

}  // namespace gfield
