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

// Grid files: a JSON header
//   {"origin": [x, y, z], "spacing": [hx, hy, hz], "dims": [nx, ny, nz],
//    "order": "x-fastest"}
// next to a raw payload of little-endian float32 samples with the same stem
// and a ".raw" extension.

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "json.hpp"

#include "gfield/lattice.hpp"

namespace gfield {

inline std::filesystem::path grid_payload_path(const std::filesystem::path& header) {
  auto raw = header;
  raw.replace_extension(".raw");
  return raw;
}

inline void save_grid(const ScalarGrid& grid, const std::filesystem::path& header) {
  nlohmann::json j;
  j["origin"] = {grid.origin.x(), grid.origin.y(), grid.origin.z()};
  j["spacing"] = {grid.spacing.x(), grid.spacing.y(), grid.spacing.z()};
  j["dims"] = {grid.dims[0], grid.dims[1], grid.dims[2]};
  j["order"] = "x-fastest";
  {
    std::ofstream out(header);
    if (!out) throw GridError(header.string() + ": cannot open for writing");
    out << j.dump(2) << '\n';
    if (!out) throw GridError(header.string() + ": write failed");
  }

  std::vector<std::uint32_t> words(grid.values.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    auto f = static_cast<float>(grid.values[i]);
    std::uint32_t w;
    std::memcpy(&w, &f, sizeof w);
    if constexpr (std::endian::native == std::endian::big) w = __builtin_bswap32(w);
    words[i] = w;
  }
  auto raw = grid_payload_path(header);
  std::ofstream out(raw, std::ios::binary);
  if (!out) throw GridError(raw.string() + ": cannot open for writing");
  out.write(reinterpret_cast<const char*>(words.data()), static_cast<std::streamsize>(words.size() * 4));
  if (!out) throw GridError(raw.string() + ": write failed");
}

inline ScalarGrid load_grid(const std::filesystem::path& header) {
  std::ifstream in(header);
  if (!in) throw GridError(header.string() + ": cannot open file");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw GridError(header.string() + ": " + e.what());
  }
  if (j.value("order", "") != "x-fastest") throw GridError(header.string() + ": unsupported sample order");
  ScalarGrid grid;
  try {
    for (int k = 0; k < 3; ++k) {
      grid.origin[k] = j.at("origin").at(k).get<double>();
      grid.spacing[k] = j.at("spacing").at(k).get<double>();
      grid.dims[k] = j.at("dims").at(k).get<int>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw GridError(header.string() + ": " + e.what());
  }
  grid.check_shape();

  auto raw = grid_payload_path(header);
  std::ifstream data(raw, std::ios::binary | std::ios::ate);
  if (!data) throw GridError(raw.string() + ": cannot open file");
  auto bytes = static_cast<std::size_t>(data.tellg());
  if (bytes != grid.size() * 4)
    throw GridError(raw.string() + ": expected " + std::to_string(grid.size() * 4) + " bytes, found " +
                    std::to_string(bytes));
  data.seekg(0);
  std::vector<std::uint32_t> words(grid.size());
  data.read(reinterpret_cast<char*>(words.data()), static_cast<std::streamsize>(bytes));
  grid.values.resize(grid.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    std::uint32_t w = words[i];
    if constexpr (std::endian::native == std::endian::big) w = __builtin_bswap32(w);
    float f;
    std::memcpy(&f, &w, sizeof f);
    grid.values[i] = f;
  }
  return grid;
}

}  // namespace gfield
