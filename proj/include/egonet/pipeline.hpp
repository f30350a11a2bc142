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

#ifndef EGONET_PIPELINE_HPP
#define EGONET_PIPELINE_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "egonet/diffusion.hpp"
#include "egonet/error.hpp"
#include "egonet/ingest.hpp"
#include "egonet/keyvalue.hpp"
#include "egonet/layering.hpp"
#include "egonet/model.hpp"
#include "egonet/tie_strength.hpp"

namespace egonet::pipeline {

enum class InputFormat { events, windowed };
enum class Stage { ingest, layers, diffusion, all };

std::string_view to_string(InputFormat f);
std::string_view to_string(Stage s);
std::optional<InputFormat> parse_format(std::string_view text);

struct PipelineConfig {
  InputFormat format = InputFormat::events;
  std::filesystem::path input;  // event log or window counts
  std::optional<std::filesystem::path> accounts;
  std::optional<std::filesystem::path> social_graph;
  std::optional<std::filesystem::path> calibration_file;
  WindowConfig windows;
  tie::CalibrationSettings calibration;
  ingest::EgoEligibilityRule eligibility;
  ingest::EventAssemblyOptions assembly;
  std::size_t k_max = 20;
  std::optional<std::size_t> fixed_k;  // 5 for events, 4 for windowed
  std::size_t rings = 5;
  std::filesystem::path output_dir = "egonet-out";
  std::uint64_t seed = 1;
  unsigned threads = 1;
  // Outermost circle size the mapping rescales to; 132.5 for windowed input
  // unless set.
  std::optional<double> reference_outer_size;
  layers::AicOptions aic;
  std::size_t ccdf_max_points = 10000;

  std::size_t effective_fixed_k() const;
  std::optional<double> effective_reference_size() const;

  // Applies a key=value config. Keys: format, input, accounts, social_graph,
  // calibration, w1..w4, k_max, fixed_k, rings, output, seed, threads,
  // min_account_age, min_monthly_interactions, other_reply_ratio_below,
  // other_follower_ratio_above, other_mention_ratio_below, min_tweets,
  // drop_other_egos, reference_outer_size, likelihood, variance_floor,
  // ccdf_max_points. Relative paths resolve against `base_dir`.
  void apply(const KeyValueFile& file, const std::filesystem::path& base_dir = {});

  // Throws Error(config) for k values below 1 or missing input files.
  void check() const;
};

struct IngestSummary {
  std::size_t input_rows = 0;
  std::size_t links_not_in_social_graph = 0;
  std::size_t dropped_other_egos = 0;
  std::size_t events_before_account_creation = 0;
  std::size_t zero_lifespan_links = 0;
  std::size_t egos_total = 0;
  std::size_t egos_eligible = 0;
  std::size_t ties = 0;
  std::size_t active_ties = 0;
  std::optional<tie::CalibrationConstants> calibration;  // windowed input only
};

struct IngestResult {
  std::vector<EgoNetwork> nets;  // eligible egos, ascending id
  IngestSummary summary;
};

// Reads the configured input, estimates tie strength and applies the
// eligibility rule. Throws Error(no_eligible_egos) when nothing survives.
IngestResult ingest_input(const PipelineConfig& cfg);

// Eligibility and normalization for already assembled networks.
IngestResult prepare_networks(std::vector<EgoNetwork> nets, const PipelineConfig& cfg);

struct AnalysisReports {
  std::optional<layers::PopulationSummary> layers;
  std::optional<layers::OfflineMapping> mapping;
  std::vector<std::pair<double, double>> ccdf;
  std::optional<diffusion::DiffusionReport> diffusion;
  std::vector<diffusion::VolumeRow> volumes;
  std::optional<diffusion::ActivityCorrelations> activity;
  double layers_ms = 0.0;
  double diffusion_ms = 0.0;
};

AnalysisReports analyze(std::span<const EgoNetwork> nets, const PipelineConfig& cfg, Stage stage);

// Thins a CCDF to at most `max_points` points, keeping the first and last.
std::vector<std::pair<double, double>> thin_curve(std::vector<std::pair<double, double>> curve,
                                                  std::size_t max_points);

void write_ties(const std::filesystem::path& path, std::span<const EgoNetwork> nets);
void write_reports(const std::filesystem::path& dir, const AnalysisReports& reports);

// Runs the stage end to end and writes every report plus summary.json into
// the output directory. Returns the process exit status; on failure writes
// error.json and prints the same record to stderr.
int run_pipeline(const PipelineConfig& cfg, Stage stage);

// Exit status for an error code: 1 config, 2 no eligible egos, 3 input,
// 4 anything else.
int exit_status(ErrorCode code);

// {"error":{"code":...,"message":...}} on one line.
std::string error_record(ErrorCode code, const std::string& message);

}  // namespace egonet::pipeline

#endif  // EGONET_PIPELINE_HPP
