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

// Manifest -> per-layer fields, SDF grids, enforced grids, closed and
// trimmed meshes, covering and metrics reports.
//
// Output layout under config.out:
//   <layer>/occupancy.{json,raw}  <layer>/gif_argument.{json,raw}
//   <layer>/sdf.{json,raw}        <layer>/sdf_enforced.{json,raw}
//   <layer>/closed.obj            <layer>/trimmed.obj
//   covering_report.json          metrics.json
// A `.partial` file marks a directory whose run did not finish.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "gfield/fields.hpp"
#include "gfield/grid_io.hpp"
#include "gfield/layering.hpp"
#include "gfield/manifest.hpp"
#include "gfield/metrics.hpp"
#include "gfield/obj_io.hpp"
#include "gfield/parallel.hpp"
#include "gfield/trim.hpp"

namespace gfield {

enum class Stage { fields, sdf, enforce, extract, trim, metrics };

inline const std::vector<std::pair<Stage, std::string>>& stage_names() {
  static const std::vector<std::pair<Stage, std::string>> names = {
      {Stage::fields, "fields"},   {Stage::sdf, "sdf"},   {Stage::enforce, "enforce"},
      {Stage::extract, "extract"}, {Stage::trim, "trim"}, {Stage::metrics, "metrics"}};
  return names;
}

inline std::string to_string(Stage s) {
  for (const auto& [k, v] : stage_names())
    if (k == s) return v;
  return "?";
}

inline std::set<Stage> all_stages() {
  std::set<Stage> s;
  for (const auto& [k, v] : stage_names()) s.insert(k);
  return s;
}

// "fields,sdf" or "all".
inline std::set<Stage> parse_stages(const std::string& list) {
  if (list.empty() || list == "all") return all_stages();
  std::set<Stage> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    bool found = false;
    for (const auto& [k, v] : stage_names())
      if (v == item) {
        out.insert(k);
        found = true;
      }
    if (!found) throw std::invalid_argument("unknown stage '" + item + "'");
  }
  return out;
}

class PipelineError : public std::runtime_error {
 public:
  PipelineError(Stage stage, const std::string& cause)
      : std::runtime_error("stage " + to_string(stage) + " failed: " + cause), stage_(stage) {}
  Stage stage() const { return stage_; }

 private:
  Stage stage_;
};

struct PipelineConfig {
  std::filesystem::path manifest;
  std::filesystem::path out;
  std::optional<int> resolution;  // overrides the manifest
  double beta = kDefaultBeta;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0: hardware concurrency
  std::set<Stage> stages = all_stages();
  std::size_t distance_samples = kDistanceSamples;
  std::size_t penetration_samples = kPenetrationSamples;
  std::function<void(const std::string&)> log;

  void check() const {
    if (resolution && *resolution < 32) throw std::invalid_argument("grid resolution must be at least 32");
    if (!(beta >= 0.0)) throw std::invalid_argument("beta must be non-negative");
    if (out.empty()) throw std::invalid_argument("an output directory is required");
  }
};

struct PenetrationEntry {
  int outer = 0, inner = 0;
  double before_cm = 0.0, after_cm = 0.0;
};

struct LayerMetrics {
  int id = 0;
  std::string name;
  double chamfer_cm = 0.0;
  double p2s_cm = 0.0;  // trimmed reconstruction -> input garment
};

struct PipelineResult {
  GridSpec grid;
  std::optional<CoveringReport> covering_before, covering_after;
  std::vector<LayerMetrics> layers;
  std::vector<PenetrationEntry> penetration;
  std::map<std::string, double> stage_seconds;
};

// Stages needed to produce `wanted`, in execution order.
inline std::set<Stage> stage_closure(const std::set<Stage>& wanted) {
  std::set<Stage> s = wanted;
  if (s.count(Stage::metrics)) s.insert(Stage::trim);
  if (s.count(Stage::trim)) s.insert(Stage::extract);
  if (s.count(Stage::extract) || s.count(Stage::enforce)) s.insert(Stage::sdf);
  if (s.count(Stage::sdf)) s.insert(Stage::fields);
  return s;
}

namespace detail {

inline std::string layer_dir_name(const LayerSpec& l) {
  return l.name.empty() ? "layer" + std::to_string(l.id) : l.name;
}

inline void write_json(const nlohmann::json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  out << j.dump(2) << '\n';
}

}  // namespace detail

inline nlohmann::json to_json(const PipelineResult& r) {
  nlohmann::json j;
  j["grid"] = {{"dims", {r.grid.dims[0], r.grid.dims[1], r.grid.dims[2]}},
               {"spacing", r.grid.spacing().x()}};
  j["layers"] = nlohmann::json::array();
  for (const auto& l : r.layers)
    j["layers"].push_back({{"id", l.id},
                           {"name", l.name},
                           {"chamfer_cm", l.chamfer_cm},
                           {"p2s_cm", l.p2s_cm},
                           {"p2s_direction", "reconstruction->input"}});
  j["penetration"] = nlohmann::json::array();
  double worst = 0.0;
  for (const auto& p : r.penetration) {
    j["penetration"].push_back(
        {{"outer", p.outer}, {"inner", p.inner}, {"before_cm", p.before_cm}, {"after_cm", p.after_cm}});
    worst = std::max(worst, p.after_cm);
  }
  j["max_penetration_cm"] = worst;
  return j;
}

inline PipelineResult run_pipeline(const PipelineConfig& config) {
  namespace fs = std::filesystem;
  using clock = std::chrono::steady_clock;
  config.check();
  auto log = [&](const std::string& line) {
    if (config.log) config.log(line);
  };

  const LayerManifest manifest = load_manifest(config.manifest);
  const std::set<Stage> run = stage_closure(config.stages);
  auto writes = [&](Stage s) { return config.stages.count(s) > 0; };

  fs::create_directories(config.out);
  const fs::path marker = config.out / ".partial";
  { std::ofstream(marker) << "incomplete\n"; }

  struct Restore {
    unsigned n;
    ~Restore() { set_max_threads(n); }
  } restore{detail::thread_cap().load()};
  if (config.threads) set_max_threads(config.threads);

  PipelineResult result;
  const int res = config.resolution.value_or(manifest.grid.resolution);
  if (res < 32) throw std::invalid_argument("grid resolution must be at least 32");
  const auto& layers = manifest.layers;

  std::vector<TriangleMesh> meshes;
  std::vector<BvhIndex> garment_bvh;
  std::vector<ScalarGrid> winding;
  LayerGrids sdf, gif, enforced;
  std::vector<TriangleMesh> closed, trimmed;

  auto stage = [&](Stage s, auto&& body) {
    if (!run.count(s)) return;
    const auto t0 = clock::now();
    try {
      body();
    } catch (const PipelineError&) {
      throw;
    } catch (const std::exception& e) {
      log("stage=" + to_string(s) + " status=failed cause=\"" + e.what() + "\"");
      throw PipelineError(s, e.what());
    }
    const double secs = std::chrono::duration<double>(clock::now() - t0).count();
    result.stage_seconds[to_string(s)] = secs;
    std::ostringstream line;
    line << "stage=" << to_string(s) << " status=ok seconds=" << secs << (writes(s) ? "" : " (dependency)");
    log(line.str());
  };
  auto dir = [&](std::size_t k) {
    fs::path d = config.out / detail::layer_dir_name(layers[k]);
    fs::create_directories(d);
    return d;
  };

  stage(Stage::fields, [&] {
    Aabb box;
    for (const auto& l : layers) {
      meshes.push_back(load_obj(l.mesh));
      meshes.back().name = l.name;
      if (meshes.back().triangles.empty()) throw MeshError(l.mesh.string() + ": no triangles");
      const Aabb b = meshes.back().bounds();
      box.extend(b.min);
      box.extend(b.max);
    }
    result.grid = GridSpec::cubic(box, res, manifest.grid.margin);
    for (std::size_t k = 0; k < layers.size(); ++k) {
      garment_bvh.emplace_back(meshes[k]);
      winding.push_back(winding_grid(garment_bvh[k], result.grid, config.beta));
      gif[layers[k].id] = gif_binary_grid(winding[k], manifest.fields);
      if (writes(Stage::fields)) {
        save_grid(occupancy_grid(winding[k]), dir(k) / "occupancy.json");
        save_grid(gif_argument_grid(winding[k], manifest.fields), dir(k) / "gif_argument.json");
      }
      log("layer=" + layers[k].name + " triangles=" + std::to_string(meshes[k].triangles.size()));
    }
  });

  stage(Stage::sdf, [&] {
    for (std::size_t k = 0; k < layers.size(); ++k) {
      WatertightOptions opts;
      opts.beta = config.beta;
      const TriangleMesh surface = watertight_from_winding(garment_bvh[k], winding[k], opts);
      sdf[layers[k].id] = signed_distance_grid(BvhIndex(surface), result.grid, config.beta);
      if (writes(Stage::sdf)) save_grid(sdf[layers[k].id], dir(k) / "sdf.json");
    }
  });

  stage(Stage::enforce, [&] {
    result.covering_before = covering_loss(sdf, gif, manifest, manifest.covering);
    enforced = enforce_covering(sdf, gif, manifest, manifest.covering);
    result.covering_after = covering_loss(enforced, gif, manifest, manifest.covering);
    if (writes(Stage::enforce)) {
      for (std::size_t k = 0; k < layers.size(); ++k)
        save_grid(enforced[layers[k].id], dir(k) / "sdf_enforced.json");
      detail::write_json({{"before", to_json(*result.covering_before)}, {"after", to_json(*result.covering_after)}},
                         config.out / "covering_report.json");
    }
  });
  const LayerGrids& final_sdf = run.count(Stage::enforce) ? enforced : sdf;

  stage(Stage::extract, [&] {
    for (std::size_t k = 0; k < layers.size(); ++k) {
      closed.push_back(surface_from_sdf(final_sdf.at(layers[k].id)));
      closed.back().name = layers[k].name + "_closed";
      if (writes(Stage::extract)) save_obj(closed.back(), dir(k) / "closed.obj");
    }
  });

  stage(Stage::trim, [&] {
    for (std::size_t k = 0; k < layers.size(); ++k) {
      if (layers[k].id == kBodyLayer) {
        trimmed.push_back(closed[k]);
      } else {
        const BvhIndex& g = garment_bvh[k];
        const double beta = config.beta;
        trimmed.push_back(trim_by_gif(closed[k], [&](const Vec3& p) {
                            return gif_argument(g.winding(p, beta).value, manifest.fields);
                          }).mesh);
      }
      trimmed.back().name = layers[k].name;
      if (writes(Stage::trim)) save_obj(trimmed.back(), dir(k) / "trimmed.obj");
    }
  });

  stage(Stage::metrics, [&] {
    for (std::size_t k = 0; k < layers.size(); ++k) {
      LayerMetrics m;
      m.id = layers[k].id;
      m.name = layers[k].name;
      if (!trimmed[k].triangles.empty()) {
        m.p2s_cm = p2s(trimmed[k], garment_bvh[k], config.distance_samples, config.seed);
        const double back = p2s(meshes[k], BvhIndex(trimmed[k]), config.distance_samples, config.seed);
        m.chamfer_cm = (m.p2s_cm + back) / 2.0;
      }
      result.layers.push_back(m);
    }
    auto index_of = [&](int id) {
      for (std::size_t k = 0; k < layers.size(); ++k)
        if (layers[k].id == id) return k;
      throw ManifestError("unknown layer id " + std::to_string(id));
    };
    for (auto [j, i] : manifest.covering_pairs()) {
      const std::size_t ki = index_of(i);
      if (trimmed[ki].triangles.empty()) continue;
      const ScalarGrid mask =
          i == kBodyLayer ? gif.at(j) : overlap_mask(gif.at(i), gif.at(j));
      auto overlap = [&](const Vec3& p) { return cell_mask(mask, p); };
      PenetrationEntry e{j, i};
      const ScalarGrid& before = sdf.at(j);
      const ScalarGrid& after = final_sdf.at(j);
      e.before_cm = max_penetration(trimmed[ki], [&](const Vec3& p) { return trilinear(before, p); }, overlap,
                                    config.penetration_samples, config.seed);
      e.after_cm = max_penetration(trimmed[ki], [&](const Vec3& p) { return trilinear(after, p); }, overlap,
                                   config.penetration_samples, config.seed);
      result.penetration.push_back(e);
    }
    if (writes(Stage::metrics)) {
      nlohmann::json j = to_json(result);
      j["seed"] = config.seed;
      j["distance_samples"] = config.distance_samples;
      j["penetration_samples"] = config.penetration_samples;
      detail::write_json(j, config.out / "metrics.json");
    }
  });

  fs::remove(marker);
  return result;
}

}  // namespace gfield
