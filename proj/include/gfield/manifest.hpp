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

// Layer manifest: the garment layers of a stack and which layers each one
// covers. JSON form:
//   {"layers": [{"id": 0, "name": "body", "mesh": "body.obj", "covers": []},
//               {"id": 1, "name": "shirt", "mesh": "shirt.obj", "covers": [0]}],
//    "params": {"w_h": 0.75, "delta": 0.01, "epsilon": 0.001, "lambda": 0.2},
//    "grid": {"resolution": 128, "margin": 0.1}}
// Mesh paths are relative to the manifest's directory. Layer 0, when
// present, is the body: it covers nothing and its GIF is identically 1.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "gfield/fields.hpp"

namespace gfield {

inline constexpr int kBodyLayer = 0;

class ManifestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CoveringParams {
  double lambda = 0.2;
  double epsilon = 1e-3;  // m

  void check() const {
    if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be non-negative");
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  }
};

struct GridConfig {
  int resolution = 128;
  double margin = 0.1;
};

struct LayerSpec {
  int id = 0;
  std::string name;
  std::filesystem::path mesh;
  std::vector<int> covers;  // layers partially covered by this one
};

struct LayerManifest {
  std::vector<LayerSpec> layers;
  FieldParams fields;
  CoveringParams covering;
  GridConfig grid;

  const LayerSpec* find(int id) const {
    for (const auto& l : layers)
      if (l.id == id) return &l;
    return nullptr;
  }

  const LayerSpec& layer(int id) const {
    if (const LayerSpec* l = find(id)) return *l;
    throw ManifestError("unknown layer id " + std::to_string(id));
  }

  // Layer ids ordered so every layer comes after all layers it covers;
  // ties keep manifest order. Throws on cycles.
  std::vector<int> topological_order() const {
    std::vector<int> order;
    std::set<int> placed;
    while (order.size() < layers.size()) {
      bool progressed = false;
      for (const auto& l : layers) {
        if (placed.count(l.id)) continue;
        bool ready = std::all_of(l.covers.begin(), l.covers.end(), [&](int c) { return placed.count(c) > 0; });
        if (!ready) continue;
        order.push_back(l.id);
        placed.insert(l.id);
        progressed = true;
        break;
      }
      if (!progressed) throw ManifestError("covering relation has a cycle");
    }
    return order;
  }

  void validate() const {
    std::set<int> ids;
    for (const auto& l : layers)
      if (!ids.insert(l.id).second) throw ManifestError("duplicate layer id " + std::to_string(l.id));
    for (const auto& l : layers) {
      for (int c : l.covers) {
        if (!ids.count(c))
          throw ManifestError("layer " + std::to_string(l.id) + " covers unknown layer " + std::to_string(c));
        if (c == l.id) throw ManifestError("layer " + std::to_string(l.id) + " covers itself");
      }
      if (l.id == kBodyLayer && !l.covers.empty()) throw ManifestError("the body layer (id 0) cannot cover layers");
    }
    topological_order();
    fields.check();
    covering.check();
    if (grid.resolution < 2) throw ManifestError("grid resolution must be at least 2");
    if (!(grid.margin >= 0.0)) throw ManifestError("grid margin must be non-negative");
  }

  // Every (outer, inner) pair with inner in covers(outer), outer layers in
  // topological order and inner ids ascending.
  std::vector<std::pair<int, int>> covering_pairs() const {
    std::vector<std::pair<int, int>> pairs;
    for (int j : topological_order()) {
      auto covers = layer(j).covers;
      std::sort(covers.begin(), covers.end());
      for (int i : covers) pairs.emplace_back(j, i);
    }
    return pairs;
  }
};

inline LayerManifest parse_manifest(const nlohmann::json& j, const std::filesystem::path& base_dir = {}) {
  LayerManifest m;
  try {
    for (const auto& jl : j.at("layers")) {
      LayerSpec l;
      l.id = jl.at("id").get<int>();
      l.name = jl.value("name", "layer" + std::to_string(l.id));
      std::filesystem::path mesh = jl.at("mesh").get<std::string>();
      l.mesh = mesh.is_absolute() || base_dir.empty() ? mesh : base_dir / mesh;
      if (jl.contains("covers")) l.covers = jl.at("covers").get<std::vector<int>>();
      m.layers.push_back(std::move(l));
    }
    if (j.contains("params")) {
      const auto& p = j.at("params");
      m.fields.w_h = p.value("w_h", m.fields.w_h);
      m.fields.delta = p.value("delta", m.fields.delta);
      m.covering.epsilon = p.value("epsilon", m.covering.epsilon);
      m.covering.lambda = p.value("lambda", m.covering.lambda);
    }
    if (j.contains("grid")) {
      const auto& g = j.at("grid");
      m.grid.resolution = g.value("resolution", m.grid.resolution);
      m.grid.margin = g.value("margin", m.grid.margin);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ManifestError(std::string("malformed manifest: ") + e.what());
  }
  try {
    m.validate();
  } catch (const std::invalid_argument& e) {
    throw ManifestError(e.what());
  }
  return m;
}

inline LayerManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ManifestError(path.string() + ": cannot open file");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ManifestError(path.string() + ": " + e.what());
  }
  return parse_manifest(j, path.parent_path());
}

inline nlohmann::json to_json(const LayerManifest& m) {
  nlohmann::json j;
  j["layers"] = nlohmann::json::array();
  for (const auto& l : m.layers)
    j["layers"].push_back({{"id", l.id}, {"name", l.name}, {"mesh", l.mesh.string()}, {"covers", l.covers}});
  j["params"] = {{"w_h", m.fields.w_h},
                 {"delta", m.fields.delta},
                 {"epsilon", m.covering.epsilon},
                 {"lambda", m.covering.lambda}};
  j["grid"] = {{"resolution", m.grid.resolution}, {"margin", m.grid.margin}};
  return j;
}

inline void save_manifest(const LayerManifest& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ManifestError(path.string() + ": cannot open for writing");
  out << to_json(m).dump(2) << '\n';
}

}  // namespace gfield
