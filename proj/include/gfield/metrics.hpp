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
#include <string>
#include <vector>

#include "json.hpp"

#include "gfield/lattice.hpp"
#include "gfield/parallel.hpp"
#include "gfield/sampling.hpp"
#include "gfield/winding.hpp"

namespace gfield {

inline constexpr std::size_t kDistanceSamples = 100000;
inline constexpr std::size_t kPenetrationSamples = 200000;

namespace detail {
inline void require_nonempty(const TriangleMesh& m, const char* what) {
  if (m.triangles.empty() || !(m.total_area() > 0.0)) throw MeshError(std::string(what) + " mesh is empty");
}
}  // namespace detail

// Mean unsigned distance (cm) from n area-uniform samples of source to target.
inline double p2s(const TriangleMesh& source, const BvhIndex& target, std::size_t n = kDistanceSamples,
                  std::uint64_t seed = 0) {
  detail::require_nonempty(source, "source");
  detail::require_nonempty(target.mesh(), "target");
  if (n == 0) return 0.0;
  const auto samples = surface_sample(source, n, seed);
  std::vector<double> d(n);
  parallel_for(n, [&](std::size_t k) { d[k] = target.closest_point(samples[k].position).distance; });
  return pairwise_sum(d) / static_cast<double>(n) * 100.0;
}

inline double p2s(const TriangleMesh& source, const TriangleMesh& target, std::size_t n = kDistanceSamples,
                  std::uint64_t seed = 0) {
  detail::require_nonempty(target, "target");
  return p2s(source, BvhIndex(target), n, seed);
}

// Same seed in both directions, so swapping the arguments is exact.
inline double chamfer(const TriangleMesh& a, const TriangleMesh& b, std::size_t n = kDistanceSamples,
                      std::uint64_t seed = 0) {
  detail::require_nonempty(a, "first");
  detail::require_nonempty(b, "second");
  return (p2s(a, b, n, seed) + p2s(b, a, n, seed)) / 2.0;
}

// Largest positive outer SDF (cm) over inner-surface samples in the overlap.
template <class Sdf, class Overlap>
double max_penetration(const TriangleMesh& inner, Sdf&& outer_sdf, Overlap&& overlap,
                       std::size_t n = kPenetrationSamples, std::uint64_t seed = 0) {
  detail::require_nonempty(inner, "inner");
  const auto samples = surface_sample(inner, n, seed);
  std::vector<double> depth(n, 0.0);
  parallel_for(n, [&](std::size_t k) {
    const Vec3& p = samples[k].position;
    if (overlap(p) > 0.5) depth[k] = std::max(static_cast<double>(outer_sdf(p)), 0.0);
  });
  double best = 0.0;
  for (double v : depth) best = std::max(best, v);
  return best * 100.0;
}

inline double field_l1(const ScalarGrid& a, const ScalarGrid& b) {
  require_same_shape(a, b, "field_l1");
  std::vector<double> diff(a.values.size());
  for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = std::abs(a.values[k] - b.values[k]);
  return diff.empty() ? 0.0 : pairwise_sum(diff) / static_cast<double>(diff.size());
}

struct MetricsReport {
  double chamfer_cm = 0.0;
  double p2s_cm = 0.0;  // source -> target
  double max_penetration_cm = 0.0;
  std::size_t distance_samples = kDistanceSamples;
  std::size_t penetration_samples = 0;
  std::uint64_t seed = 0;
  std::string source, target;
};

inline nlohmann::json to_json(const MetricsReport& r) {
  return {{"chamfer_cm", r.chamfer_cm},
          {"p2s_cm", r.p2s_cm},
          {"p2s_direction", "source->target"},
          {"max_penetration_cm", r.max_penetration_cm},
          {"distance_samples", r.distance_samples},
          {"penetration_samples", r.penetration_samples},
          {"seed", r.seed},
          {"source", r.source},
          {"target", r.target}};
}

inline MetricsReport compare_meshes(const TriangleMesh& recon, const TriangleMesh& truth,
                                    std::size_t n = kDistanceSamples, std::uint64_t seed = 0) {
  MetricsReport r;
  r.distance_samples = n;
  r.seed = seed;
  const BvhIndex truth_bvh(truth), recon_bvh(recon);
  const double forward = p2s(recon, truth_bvh, n, seed);
  const double backward = p2s(truth, recon_bvh, n, seed);
  r.p2s_cm = forward;
  r.chamfer_cm = (forward + backward) / 2.0;
  return r;
}

}  // namespace gfield
