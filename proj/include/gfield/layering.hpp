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
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gfield/lattice.hpp"
#include "gfield/manifest.hpp"
#include "gfield/parallel.hpp"
#include "gfield/sampling.hpp"

namespace gfield {

using PointField = std::function<double(const Vec3&)>;
using LayerFields = std::map<int, PointField>;
using LayerGrids = std::map<int, ScalarGrid>;

struct PairReport {
  int outer = 0;  // j
  int inner = 0;  // i, in covers(j)
  std::size_t overlap_count = 0;
  std::size_t violation_count = 0;  // overlap points with s_j > s_i
  double max_violation = 0.0;       // m
  double hinge_sum = 0.0;
  double quadratic_sum = 0.0;  // lambda already applied
  double total = 0.0;
};

struct CoveringReport {
  std::vector<PairReport> pairs;
  double total = 0.0;
  double hinge_total = 0.0;
  double max_penetration_cm = 0.0;
  std::size_t point_count = 0;
};

inline nlohmann::json to_json(const CoveringReport& r) {
  nlohmann::json j;
  j["total"] = r.total;
  j["hinge_total"] = r.hinge_total;
  j["max_penetration_cm"] = r.max_penetration_cm;
  j["point_count"] = r.point_count;
  j["pairs"] = nlohmann::json::array();
  for (const auto& p : r.pairs)
    j["pairs"].push_back({{"outer", p.outer},
                          {"inner", p.inner},
                          {"overlap_count", p.overlap_count},
                          {"violation_count", p.violation_count},
                          {"max_violation_m", p.max_violation},
                          {"hinge_sum", p.hinge_sum},
                          {"quadratic_sum", p.quadratic_sum},
                          {"total", p.total}});
  return j;
}

namespace detail {

// Per-point pair terms; reduced in a fixed order.
struct PairTerms {
  std::vector<double> weight, diff;
};

inline PairReport reduce_pair(int outer, int inner, const PairTerms& t, double lambda) {
  PairReport r;
  r.outer = outer;
  r.inner = inner;
  const std::size_t n = t.diff.size();
  std::vector<double> hinge(n), quad(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double w = t.weight[k], d = t.diff[k];
    hinge[k] = w * std::max(d, 0.0);
    quad[k] = w * lambda * d * d;
    if (w > 0.0) {
      ++r.overlap_count;
      if (d > 0.0) {
        ++r.violation_count;
        r.max_violation = std::max(r.max_violation, d);
      }
    }
  }
  r.hinge_sum = pairwise_sum(hinge);
  r.quadratic_sum = pairwise_sum(quad);
  r.total = r.hinge_sum + r.quadratic_sum;
  return r;
}

inline CoveringReport finish_report(std::vector<PairReport> pairs, std::size_t points) {
  CoveringReport rep;
  rep.point_count = points;
  std::vector<double> totals, hinges;
  double max_violation = 0.0;
  for (const auto& p : pairs) {
    totals.push_back(p.total);
    hinges.push_back(p.hinge_sum);
    max_violation = std::max(max_violation, p.max_violation);
  }
  rep.total = pairwise_sum(totals);
  rep.hinge_total = pairwise_sum(hinges);
  rep.max_penetration_cm = max_violation * 100.0;
  rep.pairs = std::move(pairs);
  return rep;
}

inline const PointField& require_field(const LayerFields& fields, int id, const char* what) {
  auto it = fields.find(id);
  if (it == fields.end() || !it->second)
    throw std::invalid_argument(std::string("missing ") + what + " evaluator for layer " + std::to_string(id));
  return it->second;
}

}  // namespace detail

// Sum over covering pairs (j, i) and points of
//   h_j h_i [max(s_j - s_i, 0) + lambda (s_j - s_i)^2].
// The body layer's GIF is 1 regardless of what `gif` holds for it.
inline CoveringReport covering_loss(std::span<const Vec3> points, const LayerFields& sdf, const LayerFields& gif,
                                    const LayerManifest& manifest, const CoveringParams& params) {
  params.check();
  const auto pairs = manifest.covering_pairs();
  for (const auto& l : manifest.layers) {
    detail::require_field(sdf, l.id, "sdf");
    if (l.id != kBodyLayer) detail::require_field(gif, l.id, "gif");
  }
  auto gif_at = [&](int id, const Vec3& p) { return id == kBodyLayer ? 1.0 : gif.at(id)(p); };

  std::vector<PairReport> reports;
  for (auto [j, i] : pairs) {
    detail::PairTerms t;
    t.weight.resize(points.size());
    t.diff.resize(points.size());
    parallel_for(points.size(), [&](std::size_t k) {
      const Vec3& p = points[k];
      t.weight[k] = gif_at(j, p) * gif_at(i, p);
      t.diff[k] = sdf.at(j)(p) - sdf.at(i)(p);
    });
    reports.push_back(detail::reduce_pair(j, i, t, params.lambda));
  }
  return detail::finish_report(std::move(reports), points.size());
}

namespace detail {

inline void require_grids(const LayerGrids& sdf, const LayerGrids& gif, const LayerManifest& manifest) {
  const ScalarGrid* ref = nullptr;
  auto check = [&](const LayerGrids& grids, int id, const char* what) {
    auto it = grids.find(id);
    if (it == grids.end()) throw std::invalid_argument(std::string("missing ") + what + " grid for layer " + std::to_string(id));
    if (!ref) ref = &it->second;
    require_same_shape(*ref, it->second, what);
  };
  for (const auto& l : manifest.layers) {
    check(sdf, l.id, "sdf");
    if (l.id != kBodyLayer) check(gif, l.id, "gif");
  }
}

inline bool gif_on(const LayerGrids& gif, int id, std::size_t idx) {
  return id == kBodyLayer || gif.at(id).values[idx] > 0.5;
}

}  // namespace detail

// Covering loss evaluated at every lattice point, GIF grids thresholded at 0.5.
inline CoveringReport covering_loss(const LayerGrids& sdf, const LayerGrids& gif, const LayerManifest& manifest,
                                    const CoveringParams& params) {
  params.check();
  detail::require_grids(sdf, gif, manifest);
  const auto pairs = manifest.covering_pairs();
  std::vector<PairReport> reports;
  std::size_t n = 0;
  for (auto [j, i] : pairs) {
    const auto& sj = sdf.at(j).values;
    const auto& si = sdf.at(i).values;
    n = sj.size();
    detail::PairTerms t;
    t.weight.resize(n);
    t.diff.resize(n);
    parallel_for(n, [&](std::size_t k) {
      t.weight[k] = detail::gif_on(gif, j, k) && detail::gif_on(gif, i, k) ? 1.0 : 0.0;
      t.diff[k] = sj[k] - si[k];
    });
    reports.push_back(detail::reduce_pair(j, i, t, params.lambda));
  }
  if (n == 0 && !sdf.empty()) n = sdf.begin()->second.size();
  return detail::finish_report(std::move(reports), n);
}

// Clamp s_j := s_i - epsilon where both GIFs are on and s_j > s_i - epsilon,
// outer layers visited after everything they cover.
inline LayerGrids enforce_covering(const LayerGrids& sdf, const LayerGrids& gif, const LayerManifest& manifest,
                                   const CoveringParams& params) {
  params.check();
  detail::require_grids(sdf, gif, manifest);
  LayerGrids out = sdf;
  for (auto [j, i] : manifest.covering_pairs()) {
    auto& sj = out.at(j).values;
    const auto& si = out.at(i).values;
    const double eps = params.epsilon;
    parallel_for(sj.size(), [&](std::size_t k) {
      if (!detail::gif_on(gif, j, k) || !detail::gif_on(gif, i, k)) return;
      const double bound = si[k] - eps;
      if (sj[k] > bound) sj[k] = bound;
    });
  }
  return out;
}

inline ScalarGrid overlap_mask(const ScalarGrid& gif_i, const ScalarGrid& gif_j) {
  require_same_shape(gif_i, gif_j, "overlap mask");
  ScalarGrid out = gif_i;
  for (std::size_t k = 0; k < out.values.size(); ++k)
    out.values[k] = gif_i.values[k] > 0.5 && gif_j.values[k] > 0.5 ? 1.0 : 0.0;
  return out;
}

// 1 when every corner of the cell holding p is on; 0 outside the grid.
inline double cell_mask(const ScalarGrid& mask, const Vec3& p) {
  int cell[3];
  for (int a = 0; a < 3; ++a) {
    const double u = (p[a] - mask.origin[a]) / mask.spacing[a];
    if (!(u >= -1e-9 && u <= mask.dims[a] - 1 + 1e-9)) return 0.0;
    cell[a] = std::clamp(static_cast<int>(std::floor(u)), 0, mask.dims[a] - 2);
  }
  for (int c = 0; c < 8; ++c)
    if (mask.at(cell[0] + (c & 1), cell[1] + ((c >> 1) & 1), cell[2] + ((c >> 2) & 1)) <= 0.5) return 0.0;
  return 1.0;
}

struct SamplePointSet {
  std::vector<Vec3> surface_points;  // perturbed
  std::vector<Vec3> surface_origins;  // before perturbation
  std::vector<Vec3> random_points;
  double sigma = 0.05;
  double ratio = 1.0 / 16.0;
};

inline constexpr std::size_t kTrainingSurfacePoints = 20480;

inline SamplePointSet sample_training_points(const TriangleMesh& mesh, const Aabb& box,
                                             std::size_t n_surface = kTrainingSurfacePoints, double sigma = 0.05,
                                             double ratio = 1.0 / 16.0, std::uint64_t seed = 0) {
  if (mesh.triangles.empty()) throw MeshError("cannot sample an empty mesh");
  if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be non-negative");
  if (!(ratio >= 0.0)) throw std::invalid_argument("ratio must be non-negative");
  const Aabb mb = mesh.bounds();
  if (!box.contains(mb.min, 1e-12) || !box.contains(mb.max, 1e-12))
    throw std::invalid_argument("sampling box does not contain the mesh");

  SamplePointSet out;
  out.sigma = sigma;
  out.ratio = ratio;
  const auto base = surface_sample(mesh, n_surface, seed);

  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0x5eedu};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  out.surface_origins.reserve(base.size());
  out.surface_points.reserve(base.size());
  for (const auto& s : base) {
    Vec3 offset(normal(rng), normal(rng), normal(rng));
    out.surface_origins.push_back(s.position);
    out.surface_points.push_back(s.position + sigma * offset);
  }

  const auto n_random = static_cast<std::size_t>(std::llround(static_cast<double>(n_surface) * ratio));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  out.random_points.reserve(n_random);
  const Vec3 ext = box.extent();
  for (std::size_t k = 0; k < n_random; ++k) {
    Vec3 u;
    for (int a = 0; a < 3; ++a) u[a] = unit(rng);
    out.random_points.push_back(box.min + u.cwiseProduct(ext));
  }
  return out;
}

}  // namespace gfield
