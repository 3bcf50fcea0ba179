// Copyright 2026 The criticality-toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "criticality/io/pipeline.hpp"
#include "criticality/suitability/suitability.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace
{

void write_output(const std::string & text, const std::string & path)
{
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write output file: " + path);
  out << text;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"surrogate-safety metric computation for trajectory data"};
  app.require_subcommand(1);

  std::string config_path, data_path, output_path;
  std::optional<std::uint64_t> seed_override;
  std::optional<int> jobs_override;
  app.add_option("--seed", seed_override, "override the config seed");
  app.add_option("--jobs", jobs_override, "bound worker parallelism");

  auto * compute = app.add_subcommand("compute", "evaluate configured metrics over a dataset");
  compute->add_option("config", config_path, "run config (JSON)")->required();
  compute->add_option("data", data_path, "trajectory CSV")->required();
  compute->add_option("-o,--output", output_path, "output CSV (default stdout)");

  auto * filter = app.add_subcommand("filter", "extract critical intervals from a dataset");
  filter->add_option("config", config_path, "run config (JSON)")->required();
  filter->add_option("data", data_path, "trajectory CSV")->required();
  filter->add_option("-o,--output", output_path, "output CSV (default stdout)");

  std::string kb_path, req_path;
  auto * suit = app.add_subcommand("suitability", "run the metric suitability analysis");
  suit->add_option("knowledge_base", kb_path, "metric property records")->required();
  suit->add_option("requirements", req_path, "requirement set with importance order")->required();
  suit->add_option("-o,--output", output_path, "report file (default stdout)");

  std::string sim_path;
  auto * sim = app.add_subcommand("simulate", "evolve configured actors under a motion model");
  sim->add_option("model_config", sim_path, "simulation config (JSON)")->required();
  sim->add_option("-o,--output", output_path, "trajectory CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    // Usage problems exit 1 regardless of CLI11's default codes.
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (compute->parsed() || filter->parsed()) {
      criticality::io::RunConfig cfg = criticality::io::load_run_config(config_path);
      if (seed_override) cfg.seed = *seed_override;
      if (jobs_override) cfg.jobs = *jobs_override;
      const auto recordings = criticality::io::parse_trajectories(data_path);
      const std::string text = compute->parsed()
                                 ? criticality::io::compute_csv(cfg, recordings)
                                 : criticality::io::filter_csv(cfg, recordings);
      write_output(text, output_path);
    } else if (suit->parsed()) {
      const auto kb = criticality::suitability::load_knowledge_base_file(kb_path);
      const auto reqs = criticality::suitability::load_requirements_file(req_path);
      const auto result = criticality::suitability::run_suitability(kb, reqs);
      write_output(criticality::suitability::explain(result, kb, reqs), output_path);
    } else if (sim->parsed()) {
      const auto cfg = criticality::io::load_sim_config(sim_path);
      write_output(criticality::io::simulate_csv(cfg), output_path);
    }
  } catch (const std::exception & e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
