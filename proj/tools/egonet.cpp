// Copyright 2026 The egonet Authors.
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

// Command-line entry point: ingest, layers, diffusion, all and synth.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "egonet/error.hpp"
#include "egonet/keyvalue.hpp"
#include "egonet/pipeline.hpp"
#include "egonet/synthgen.hpp"

namespace {

using egonet::Error;
using egonet::ErrorCode;
using egonet::pipeline::PipelineConfig;
using egonet::pipeline::Stage;

struct Flags {
  std::string format;
  std::string input;
  std::string accounts;
  std::string social_graph;
  std::string calibration;
  std::string config;
  std::string output;
  std::size_t k_max = 0;
  std::size_t fixed_k = 0;
  std::size_t rings = 0;
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

void add_pipeline_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--format", f.format, "Input format")->check(CLI::IsMember({"events", "windowed"}));
  cmd->add_option("-i,--input", f.input, "Event log or window-count CSV");
  cmd->add_option("--accounts", f.accounts, "Account statistics CSV");
  cmd->add_option("--social-graph", f.social_graph, "Social graph CSV for windowed input");
  cmd->add_option("--calibration", f.calibration, "Calibration key=value file");
  cmd->add_option("--config", f.config, "Pipeline key=value file; flags override it");
  cmd->add_option("-o,--output", f.output, "Output directory");
  cmd->add_option("--k-max", f.k_max, "Largest k tried when choosing k*")->check(CLI::PositiveNumber);
  cmd->add_option("--fixed-k", f.fixed_k, "Circle count for the circle table")->check(CLI::PositiveNumber);
  cmd->add_option("--rings", f.rings, "Ring count for the diffusion reports")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", f.seed, "Seed");
  cmd->add_option("--threads", f.threads, "Worker threads")->check(CLI::PositiveNumber);
}

PipelineConfig build_config(const CLI::App* cmd, const Flags& f) {
  PipelineConfig cfg;
  if (!f.config.empty()) {
    const std::filesystem::path path(f.config);
    cfg.apply(egonet::KeyValueFile::load(path), path.parent_path());
  }
  if (cmd->count("--format")) cfg.format = *egonet::pipeline::parse_format(f.format);
  if (cmd->count("--input")) cfg.input = f.input;
  if (cmd->count("--accounts")) cfg.accounts = f.accounts;
  if (cmd->count("--social-graph")) cfg.social_graph = f.social_graph;
  if (cmd->count("--calibration")) cfg.calibration_file = f.calibration;
  if (cmd->count("--output")) cfg.output_dir = f.output;
  if (cmd->count("--k-max")) cfg.k_max = f.k_max;
  if (cmd->count("--fixed-k")) cfg.fixed_k = f.fixed_k;
  if (cmd->count("--rings")) cfg.rings = f.rings;
  if (cmd->count("--seed")) cfg.seed = f.seed;
  if (cmd->count("--threads")) cfg.threads = f.threads;
  return cfg;
}

struct SynthFlags {
  std::string spec;
  std::string output = "egonet-synth";
  std::size_t egos = 100;
  std::uint64_t seed = 1;
  std::size_t rings = 5;
  unsigned threads = 1;
  bool no_diffusion = false;
};

int run_synth(const SynthFlags& f) {
  egonet::synth::LayerSpec layer;
  egonet::synth::DiffusionSpec diffusion;
  if (!f.spec.empty()) {
    const auto file = egonet::KeyValueFile::load(f.spec);
    egonet::synth::reject_unknown_spec_keys(file);
    layer = egonet::synth::LayerSpec::from_file(file);
    diffusion = egonet::synth::DiffusionSpec::from_file(file);
  }
  if (f.egos == 0 || f.egos >= (1ULL << egonet::synth::kAlterBits)) {
    throw Error(ErrorCode::config, "egos must lie in 1..1048575");
  }
  egonet::synth::PopulationOptions opt;
  opt.egos = f.egos;
  opt.seed = f.seed;
  opt.rings = f.rings;
  opt.threads = f.threads;
  const auto population = egonet::synth::generate_population(layer, f.no_diffusion ? nullptr : &diffusion, opt);
  const auto data = egonet::synth::serialize(population, egonet::WindowConfig{}, f.seed);
  egonet::synth::write_population(f.output, data);
  std::cout << "wrote " << population.size() << " egos, " << data.events.size() << " events, "
            << data.windows.size() << " window rows to " << f.output << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ego-network layer and information-diffusion analysis"};
  app.require_subcommand(1);

  Flags flags;
  struct Sub {
    const char* name;
    Stage stage;
    const char* help;
  };
  const Sub subs[] = {{"ingest", Stage::ingest, "Estimate tie strength and write ties.csv"},
                      {"layers", Stage::layers, "Cluster ego networks into circles"},
                      {"diffusion", Stage::diffusion, "Per-ring retweet diffusion reports"},
                      {"all", Stage::all, "Every report"}};
  std::vector<std::pair<CLI::App*, Stage>> stages;
  for (const auto& s : subs) {
    CLI::App* cmd = app.add_subcommand(s.name, s.help);
    add_pipeline_flags(cmd, flags);
    stages.emplace_back(cmd, s.stage);
  }

  SynthFlags synth;
  CLI::App* synth_cmd = app.add_subcommand("synth", "Generate a planted synthetic population");
  synth_cmd->add_option("--spec", synth.spec, "Layer and diffusion key=value spec");
  synth_cmd->add_option("-o,--output", synth.output, "Output directory");
  synth_cmd->add_option("--egos", synth.egos, "Number of egos");
  synth_cmd->add_option("--seed", synth.seed, "Seed");
  synth_cmd->add_option("--rings", synth.rings, "Ring count used to plant diffusion")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--threads", synth.threads, "Worker threads")->check(CLI::PositiveNumber);
  synth_cmd->add_flag("--no-diffusion", synth.no_diffusion, "Skip retweet generation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (synth_cmd->parsed()) return run_synth(synth);
    for (const auto& [cmd, stage] : stages) {
      if (cmd->parsed()) return egonet::pipeline::run_pipeline(build_config(cmd, flags), stage);
    }
  } catch (const Error& e) {
    std::cerr << egonet::pipeline::error_record(e.code(), e.what()) << '\n';
    return egonet::pipeline::exit_status(e.code());
  }
  return 1;
}
