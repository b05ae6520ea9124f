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

// Synthetic layer stacks built from cylinders, for tests and demos.

#include <cmath>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include "gfield/manifest.hpp"
#include "gfield/obj_io.hpp"
#include "gfield/shapes.hpp"

namespace gfield::fixtures {

struct Fixture {
  LayerManifest manifest;
  std::vector<TriangleMesh> meshes;  // parallel to manifest.layers
};

inline int rows_for(double radius, double height, int segments) {
  const double edge = 2.0 * std::numbers::pi * radius / segments;
  return std::max(1, static_cast<int>(std::lround(height / edge)));
}

inline TriangleMesh garment_tube(const std::string& name, double radius, double height, int segments = 128) {
  TriangleMesh m = shapes::open_cylinder(radius, height, segments, rows_for(radius, height, segments));
  m.name = name;
  return m;
}

inline void add_layer(Fixture& f, int id, const std::string& name, TriangleMesh mesh, std::vector<int> covers) {
  mesh.name = name;
  f.manifest.layers.push_back({id, name, name + ".obj", std::move(covers)});
  f.meshes.push_back(std::move(mesh));
}

// "pant": r 0.15 m, 0.5 m tall. "shirt" covers it: 0.9 m tall with radius
// 0.15 - penetration, so the pant wall pokes out by `penetration` over its
// whole height. Tubes are slim enough that their interiors carry GIF 1.
inline Fixture nested_cylinders(double penetration = 0.05) {
  Fixture f;
  add_layer(f, 1, "pant", garment_tube("pant", 0.15, 0.5), {});
  add_layer(f, 2, "shirt", garment_tube("shirt", 0.15 - penetration, 0.9), {1});
  return f;
}

// Closed body with a shirt and a coat, each poking 2 cm into the layer
// that covers it.
inline Fixture layered_chain() {
  Fixture f;
  add_layer(f, kBodyLayer, "body",
            shapes::capped_cylinder(0.20, 0.9, 128, rows_for(0.20, 0.9, 128), 12), {});
  add_layer(f, 1, "shirt", garment_tube("shirt", 0.18, 0.7), {kBodyLayer});
  add_layer(f, 2, "coat", garment_tube("coat", 0.16, 0.5), {1});
  return f;
}

inline std::vector<TriangleMesh> load_layers(const LayerManifest& m) {
  std::vector<TriangleMesh> meshes;
  for (const auto& l : m.layers) {
    meshes.push_back(load_obj(l.mesh));
    meshes.back().name = l.name;
  }
  return meshes;
}

// Writes the meshes and manifest.json into dir; returns the manifest path.
inline std::filesystem::path write_fixture(const Fixture& f, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (std::size_t k = 0; k < f.meshes.size(); ++k) save_obj(f.meshes[k], dir / f.manifest.layers[k].mesh);
  const auto path = dir / "manifest.json";
  save_manifest(f.manifest, path);
  return path;
}

}  // namespace gfield::fixtures
