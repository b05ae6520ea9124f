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

// gfield command line: pipeline, fields, extract, trim, enforce, metrics,
// sample-points, and fixture (writes a synthetic layer stack).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "gfield/fixtures.hpp"
#include "gfield/grid_io.hpp"
#include "gfield/layering.hpp"
#include "gfield/metrics.hpp"
#include "gfield/obj_io.hpp"
#include "gfield/pipeline.hpp"
#include "gfield/trim.hpp"

namespace fs = std::filesystem;
using namespace gfield;

namespace {

void log_line(const std::string& line) { std::cerr << "[gfield] " << line << '\n'; }

struct PipelineArgs {
  std::string manifest, out, stages = "all";
  int res = 0;
  double beta = kDefaultBeta;
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

void add_pipeline_flags(CLI::App* cmd, PipelineArgs& a, bool with_stages) {
  cmd->add_option("--manifest", a.manifest, "layer manifest JSON")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", a.out, "output directory")->required();
  cmd->add_option("--res", a.res, "grid resolution per axis (default: manifest)");
  cmd->add_option("--beta", a.beta, "far-field acceptance ratio; 0 is exact");
  cmd->add_option("--seed", a.seed, "seed for sampled metrics");
  cmd->add_option("--threads", a.threads, "worker cap; 0 uses all cores");
  if (with_stages) cmd->add_option("--stages", a.stages, "comma list of fields,sdf,enforce,extract,trim,metrics");
}

int run_pipeline_cmd(const PipelineArgs& a, const std::string& stages) {
  PipelineConfig c;
  c.manifest = a.manifest;
  c.out = a.out;
  if (a.res > 0) c.resolution = a.res;
  c.beta = a.beta;
  c.seed = a.seed;
  c.threads = a.threads;
  c.stages = parse_stages(stages);
  c.log = log_line;
  PipelineResult r = run_pipeline(c);
  if (r.covering_after)
    log_line("covering hinge before=" + std::to_string(r.covering_before->hinge_total) +
             " after=" + std::to_string(r.covering_after->hinge_total));
  for (const auto& p : r.penetration)
    log_line("penetration outer=" + std::to_string(p.outer) + " inner=" + std::to_string(p.inner) +
             " before_cm=" + std::to_string(p.before_cm) + " after_cm=" + std::to_string(p.after_cm));
  return 0;
}

nlohmann::json points_json(const std::vector<Vec3>& pts) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& p : pts) a.push_back({p.x(), p.y(), p.z()});
  return a;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Layered garment fields: winding occupancy, GIF, layered SDFs, trimming, metrics"};
  app.require_subcommand(1);

  PipelineArgs pipe_args, fields_args, enforce_args;
  auto* pipeline = app.add_subcommand("pipeline", "run the full manifest pipeline");
  add_pipeline_flags(pipeline, pipe_args, true);
  auto* fields = app.add_subcommand("fields", "occupancy and GIF-argument grids per layer");
  add_pipeline_flags(fields, fields_args, false);
  auto* enforce = app.add_subcommand("enforce", "SDF grids per layer, before and after covering enforcement");
  add_pipeline_flags(enforce, enforce_args, false);

  std::string grid_path, extract_out;
  double iso = 0.0;
  auto* extract = app.add_subcommand("extract", "marching-cubes surface of a grid");
  extract->add_option("--grid", grid_path, "grid header JSON")->required()->check(CLI::ExistingFile);
  extract->add_option("--out", extract_out, "output OBJ")->required();
  extract->add_option("--iso", iso, "iso value");

  std::string trim_mesh, trim_garment, trim_out;
  double trim_beta = kDefaultBeta;
  FieldParams trim_params;
  auto* trim = app.add_subcommand("trim", "cut a closed mesh to the GIF of an open garment");
  trim->add_option("--mesh", trim_mesh, "closed OBJ")->required()->check(CLI::ExistingFile);
  trim->add_option("--garment", trim_garment, "open garment OBJ")->required()->check(CLI::ExistingFile);
  trim->add_option("--out", trim_out, "trimmed OBJ")->required();
  trim->add_option("--beta", trim_beta, "far-field acceptance ratio");
  trim->add_option("--w-h", trim_params.w_h, "GIF hole threshold");
  trim->add_option("--delta", trim_params.delta, "GIF offset");

  std::string recon, truth, metrics_out;
  std::size_t metric_n = kDistanceSamples;
  std::uint64_t metric_seed = 0;
  auto* metrics = app.add_subcommand("metrics", "Chamfer and P2S between two meshes");
  metrics->add_option("--recon", recon, "reconstructed OBJ")->required();
  metrics->add_option("--truth", truth, "reference OBJ")->required();
  metrics->add_option("--n", metric_n, "samples per direction");
  metrics->add_option("--seed", metric_seed, "sampling seed");
  metrics->add_option("--out", metrics_out, "report path (default: stdout)");

  std::string sample_mesh, sample_out;
  std::size_t sample_n = kTrainingSurfacePoints;
  double sigma = 0.05, ratio = 1.0 / 16.0, box_margin = 0.1;
  std::uint64_t sample_seed = 0;
  auto* sample = app.add_subcommand("sample-points", "perturbed surface samples plus uniform box samples");
  sample->add_option("--mesh", sample_mesh, "OBJ to sample")->required()->check(CLI::ExistingFile);
  sample->add_option("--out", sample_out, "output JSON")->required();
  sample->add_option("--n", sample_n, "surface samples");
  sample->add_option("--sigma", sigma, "perturbation std-dev (m)");
  sample->add_option("--ratio", ratio, "random : surface ratio");
  sample->add_option("--margin", box_margin, "box growth per side, fraction of extent");
  sample->add_option("--seed", sample_seed, "seed");

  std::string fixture_kind = "nested", fixture_out;
  double penetration = 0.05;
  auto* fixture = app.add_subcommand("fixture", "write a synthetic layer stack and manifest");
  fixture->add_option("--kind", fixture_kind, "nested or chain")->check(CLI::IsMember({"nested", "chain"}));
  fixture->add_option("--out", fixture_out, "directory")->required();
  fixture->add_option("--penetration", penetration, "nested: how far the inner tube pokes out (m)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*pipeline) return run_pipeline_cmd(pipe_args, pipe_args.stages);
    if (*fields) return run_pipeline_cmd(fields_args, "fields");
    if (*enforce) return run_pipeline_cmd(enforce_args, "sdf,enforce");

    if (*extract) {
      TriangleMesh m = marching_cubes(load_grid(grid_path), iso);
      save_obj(m, extract_out);
      log_line("extract triangles=" + std::to_string(m.triangles.size()));
      return 0;
    }
    if (*trim) {
      trim_params.check();
      const TriangleMesh closed = load_obj(trim_mesh);
      const BvhIndex garment(load_obj(trim_garment));
      TrimmedMesh t = trim_by_gif(
          closed, [&](const Vec3& p) { return gif_argument(garment.winding(p, trim_beta).value, trim_params); });
      save_obj(t.mesh, trim_out);
      log_line("trim triangles=" + std::to_string(t.mesh.triangles.size()) +
               " loops=" + std::to_string(t.boundary_loops.size()));
      return 0;
    }
    if (*metrics) {
      MetricsReport r = compare_meshes(load_obj(recon), load_obj(truth), metric_n, metric_seed);
      r.source = recon;
      r.target = truth;
      const std::string text = to_json(r).dump(2);
      if (metrics_out.empty()) {
        std::cout << text << '\n';
      } else {
        std::ofstream out(metrics_out);
        if (!out) throw std::runtime_error(metrics_out + ": cannot open for writing");
        out << text << '\n';
      }
      return 0;
    }
    if (*sample) {
      const TriangleMesh m = load_obj(sample_mesh);
      SamplePointSet s = sample_training_points(m, m.bounds().expanded(box_margin), sample_n, sigma, ratio, sample_seed);
      nlohmann::json j = {{"sigma", s.sigma},
                          {"ratio", s.ratio},
                          {"seed", sample_seed},
                          {"surface_points", points_json(s.surface_points)},
                          {"random_points", points_json(s.random_points)}};
      std::ofstream out(sample_out);
      if (!out) throw std::runtime_error(sample_out + ": cannot open for writing");
      out << j.dump() << '\n';
      log_line("sample-points surface=" + std::to_string(s.surface_points.size()) +
               " random=" + std::to_string(s.random_points.size()));
      return 0;
    }
    if (*fixture) {
      auto f = fixture_kind == "chain" ? fixtures::layered_chain() : fixtures::nested_cylinders(penetration);
      std::cout << fixtures::write_fixture(f, fixture_out).string() << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "gfield: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
