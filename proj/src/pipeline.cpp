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

#include "egonet/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <iostream>

#include "egonet/csv.hpp"
#include "egonet/error.hpp"
#include "json.hpp"

namespace egonet::pipeline {

using Json = nlohmann::ordered_json;

std::string_view to_string(InputFormat f) { return f == InputFormat::events ? "events" : "windowed"; }

std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::ingest:
      return "ingest";
    case Stage::layers:
      return "layers";
    case Stage::diffusion:
      return "diffusion";
    case Stage::all:
      return "all";
  }
  return "all";
}

std::optional<InputFormat> parse_format(std::string_view text) {
  if (text == "events") return InputFormat::events;
  if (text == "windowed") return InputFormat::windowed;
  return std::nullopt;
}

std::size_t PipelineConfig::effective_fixed_k() const {
  return fixed_k.value_or(format == InputFormat::events ? 5 : 4);
}

std::optional<double> PipelineConfig::effective_reference_size() const {
  if (reference_outer_size) return reference_outer_size;
  if (format == InputFormat::windowed) return 132.5;
  return std::nullopt;
}

namespace {

std::size_t positive_count(const KeyValueFile& file, const std::string& key, std::size_t fallback) {
  const auto v = file.get_int(key);
  if (!v) return fallback;
  if (*v < 1) throw Error(ErrorCode::config, key + " must be at least 1");
  return static_cast<std::size_t>(*v);
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw Error(ErrorCode::config, key + " must be true or false");
}

}  // namespace

void PipelineConfig::apply(const KeyValueFile& file, const std::filesystem::path& base_dir) {
  file.reject_unknown({"format", "input", "accounts", "social_graph", "calibration", "w1", "w2", "w3", "w4",
                       "k_max", "fixed_k", "rings", "output", "seed", "threads", "min_account_age",
                       "min_monthly_interactions", "other_reply_ratio_below", "other_follower_ratio_above",
                       "other_mention_ratio_below", "min_tweets", "drop_other_egos", "reference_outer_size",
                       "likelihood", "variance_floor", "ccdf_max_points"});
  auto path = [&](const std::string& key) -> std::optional<std::filesystem::path> {
    const auto v = file.get(key);
    if (!v) return std::nullopt;
    std::filesystem::path p(*v);
    return p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  };
  if (const auto f = file.get("format")) {
    const auto parsed = parse_format(*f);
    if (!parsed) throw Error(ErrorCode::config, "format must be events or windowed");
    format = *parsed;
  }
  if (auto p = path("input")) input = *p;
  if (auto p = path("accounts")) accounts = *p;
  if (auto p = path("social_graph")) social_graph = *p;
  if (auto p = path("calibration")) calibration_file = *p;
  if (auto p = path("output")) output_dir = *p;
  windows.w1 = file.get_double("w1").value_or(windows.w1);
  windows.w2 = file.get_double("w2").value_or(windows.w2);
  windows.w3 = file.get_double("w3").value_or(windows.w3);
  windows.w4 = file.get_double("w4").value_or(windows.w4);
  k_max = positive_count(file, "k_max", k_max);
  if (file.contains("fixed_k")) fixed_k = positive_count(file, "fixed_k", 1);
  rings = positive_count(file, "rings", rings);
  threads = static_cast<unsigned>(positive_count(file, "threads", threads));
  ccdf_max_points = positive_count(file, "ccdf_max_points", ccdf_max_points);
  if (const auto s = file.get_int("seed")) seed = static_cast<std::uint64_t>(*s);
  eligibility.min_account_age = file.get_double("min_account_age").value_or(eligibility.min_account_age);
  eligibility.min_monthly_interactions =
      file.get_double("min_monthly_interactions").value_or(eligibility.min_monthly_interactions);
  auto& rule = assembly.alter_rule;
  rule.other_reply_ratio_below = file.get_double("other_reply_ratio_below").value_or(rule.other_reply_ratio_below);
  rule.other_follower_ratio_above =
      file.get_double("other_follower_ratio_above").value_or(rule.other_follower_ratio_above);
  rule.other_mention_ratio_below =
      file.get_double("other_mention_ratio_below").value_or(rule.other_mention_ratio_below);
  if (const auto t = file.get_int("min_tweets")) {
    if (*t < 0) throw Error(ErrorCode::config, "min_tweets must be >= 0");
    rule.min_tweets = static_cast<std::uint64_t>(*t);
  }
  if (const auto d = file.get("drop_other_egos")) assembly.drop_other_egos = parse_bool("drop_other_egos", *d);
  if (const auto r = file.get_double("reference_outer_size")) reference_outer_size = *r;
  if (const auto l = file.get("likelihood")) {
    if (*l == "gaussian_mixture") {
      aic.model = layers::LikelihoodModel::gaussian_mixture;
    } else if (*l == "classification") {
      aic.model = layers::LikelihoodModel::classification;
    } else {
      throw Error(ErrorCode::config, "likelihood must be gaussian_mixture or classification");
    }
  }
  aic.variance_floor = file.get_double("variance_floor").value_or(aic.variance_floor);
}

void PipelineConfig::check() const {
  if (k_max < 1 || rings < 1 || (fixed_k && *fixed_k < 1)) throw Error(ErrorCode::config, "k values must be >= 1");
  if (!(aic.variance_floor > 0.0)) throw Error(ErrorCode::config, "variance_floor must be positive");
  if (reference_outer_size && !(*reference_outer_size > 0.0)) {
    throw Error(ErrorCode::config, "reference_outer_size must be positive");
  }
  windows.check();
  auto exists = [](const std::filesystem::path& p, const char* what) {
    if (!std::filesystem::exists(p)) {
      throw Error(ErrorCode::io, std::string(what) + " '" + p.string() + "' does not exist");
    }
  };
  if (input.empty()) throw Error(ErrorCode::config, "no input file given");
  exists(input, "input");
  if (accounts) exists(*accounts, "accounts file");
  if (social_graph) exists(*social_graph, "social graph");
  if (calibration_file) exists(*calibration_file, "calibration file");
}

IngestResult prepare_networks(std::vector<EgoNetwork> nets, const PipelineConfig& cfg) {
  IngestResult out;
  out.summary.egos_total = nets.size();
  for (auto& net : nets) {
    if (!ingest::is_eligible(net, cfg.eligibility)) continue;
    if (net.active_ties() > 0) net = tie::normalize_ego_frequencies(std::move(net));
    out.summary.ties += net.ties.size();
    out.summary.active_ties += net.active_ties();
    out.nets.push_back(std::move(net));
  }
  out.summary.egos_eligible = out.nets.size();
  if (out.nets.empty()) throw Error(ErrorCode::no_eligible_egos, "no eligible egos");
  return out;
}

IngestResult ingest_input(const PipelineConfig& cfg) {
  cfg.check();
  if (cfg.format == InputFormat::events) {
    const auto events = ingest::parse_event_log(cfg.input);
    std::optional<ingest::AccountTable> accounts;
    if (cfg.accounts) accounts = ingest::parse_accounts(*cfg.accounts);
    auto assembled = ingest::assemble_event_networks(events, accounts ? &*accounts : nullptr, cfg.assembly);
    auto out = prepare_networks(std::move(assembled.nets), cfg);
    out.summary.input_rows = events.size();
    out.summary.dropped_other_egos = assembled.dropped_other_egos;
    out.summary.events_before_account_creation = assembled.events_before_account_creation;
    out.summary.zero_lifespan_links = assembled.zero_lifespan_links;
    return out;
  }
  std::optional<ingest::SocialGraph> social;
  if (cfg.social_graph) social = ingest::parse_social_graph(*cfg.social_graph);
  const auto graph = ingest::parse_window_graph(cfg.input, cfg.windows, social ? &*social : nullptr);
  tie::CalibrationSettings settings = cfg.calibration;
  if (cfg.calibration_file) settings = tie::CalibrationSettings::load(*cfg.calibration_file);
  std::vector<WindowCounts> counts;
  counts.reserve(graph.links.size());
  for (const auto& l : graph.links) counts.push_back(l.counts);
  const auto constants = tie::calibrate(counts, cfg.windows, settings);
  auto out = prepare_networks(ingest::assemble_window_networks(graph.links, cfg.windows, constants), cfg);
  out.summary.input_rows = graph.rows;
  out.summary.links_not_in_social_graph = graph.discarded;
  out.summary.calibration = constants;
  return out;
}

std::vector<std::pair<double, double>> thin_curve(std::vector<std::pair<double, double>> curve,
                                                  std::size_t max_points) {
  if (max_points < 2 || curve.size() <= max_points) return curve;
  const std::size_t stride = (curve.size() - 1 + max_points - 2) / (max_points - 1);
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i < curve.size() - 1; i += stride) out.push_back(curve[i]);
  out.push_back(curve.back());
  return out;
}

AnalysisReports analyze(std::span<const EgoNetwork> nets, const PipelineConfig& cfg, Stage stage) {
  AnalysisReports r;
  using Clock = std::chrono::steady_clock;
  auto ms = [](Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double, std::milli>(b - a).count();
  };
  if (stage == Stage::layers || stage == Stage::all) {
    const auto t0 = Clock::now();
    layers::PopulationOptions opt;
    opt.k_max = cfg.k_max;
    opt.fixed_k = cfg.effective_fixed_k();
    opt.aic = cfg.aic;
    opt.threads = cfg.threads;
    r.layers = layers::population_summary(nets, opt);
    std::vector<double> sizes, mins;
    for (const auto& c : r.layers->circles) {
      sizes.push_back(c.size.mean);
      mins.push_back(c.min_frequency.mean);
    }
    r.mapping = layers::map_to_offline(sizes, mins, sizes.empty() ? std::nullopt : cfg.effective_reference_size());
    std::vector<double> normalized;
    for (const auto& net : nets) {
      for (const auto& t : net.ties) {
        if (t.active() && t.normalized_frequency) normalized.push_back(*t.normalized_frequency);
      }
    }
    if (!normalized.empty()) {
      r.ccdf = thin_curve(layers::aggregate_ccdf(std::move(normalized)), cfg.ccdf_max_points);
    }
    r.layers_ms = ms(t0, Clock::now());
  }
  if (stage == Stage::diffusion || stage == Stage::all) {
    const auto t0 = Clock::now();
    diffusion::DiffusionOptions opt{cfg.rings, cfg.threads};
    r.diffusion = diffusion::ring_diffusion_report(nets, opt);
    r.volumes = diffusion::ring_volume_report(nets, opt);
    if (nets.size() >= 3) r.activity = diffusion::activity_correlations(nets);
    r.diffusion_ms = ms(t0, Clock::now());
  }
  return r;
}

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io, "cannot write '" + path.string() + "'");
  return out;
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json fit_json(const std::optional<diffusion::FitResult>& f) {
  if (!f) return nullptr;
  return Json{{"n", f->n}, {"r", optional_number(f->r)}, {"beta", f->beta}, {"alpha", f->alpha}};
}

}  // namespace

void write_ties(const std::filesystem::path& path, std::span<const EgoNetwork> nets) {
  auto out = open_output(path);
  csv::Writer w(out, {"ego", "alter", "frequency", "normalized_frequency", "link_lifespan", "reply_count",
                      "retweet_count", "retweet_lifespan", "alter_class"});
  for (const auto& net : nets) {
    for (const auto& t : net.ties) {
      w.cell(t.ego.value).cell(t.alter.value).cell(t.frequency).cell(t.normalized_frequency);
      w.cell(t.link_lifespan).cell(t.reply_count).cell(t.retweet_count).cell(t.retweet_lifespan);
      w.cell(to_string(t.alter_class));
      w.end_row();
    }
  }
}

void write_reports(const std::filesystem::path& dir, const AnalysisReports& r) {
  if (r.layers) {
    {
      auto out = open_output(dir / "kstar_density.csv");
      csv::Writer w(out, {"k", "egos", "density", "mean_network_size", "ci95_network_size"});
      for (const auto& row : r.layers->kstar) {
        w.cell(static_cast<std::uint64_t>(row.k)).cell(static_cast<std::uint64_t>(row.egos)).cell(row.density);
        w.cell(row.network_size.mean).cell(row.network_size.ci95);
        w.end_row();
      }
    }
    {
      auto out = open_output(dir / "circles.csv");
      csv::Writer w(out, {"circle", "min_freq", "mean_size", "scaling_factor", "ci95_min_freq", "ci95_mean_size",
                          "ci95_scaling_factor"});
      for (const auto& row : r.layers->circles) {
        w.cell(static_cast<std::uint64_t>(row.circle)).cell(row.min_frequency.mean).cell(row.size.mean);
        if (row.scaling_factor) {
          w.cell(row.scaling_factor->mean);
        } else {
          w.empty();
        }
        w.cell(row.min_frequency.ci95).cell(row.size.ci95);
        if (row.scaling_factor) {
          w.cell(row.scaling_factor->ci95);
        } else {
          w.empty();
        }
        w.end_row();
      }
    }
    {
      auto out = open_output(dir / "mapping.csv");
      csv::Writer w(out, {"circle", "name", "size", "min_freq", "rescaled_size"});
      if (r.mapping) {
        for (std::size_t i = 0; i < r.mapping->circles.size(); ++i) {
          const auto& c = r.mapping->circles[i];
          w.cell(static_cast<std::uint64_t>(i + 1)).cell(c.name).cell(c.size).cell(c.min_frequency);
          w.cell(c.rescaled_size);
          w.end_row();
        }
      }
    }
    {
      auto out = open_output(dir / "ccdf.csv");
      csv::Writer w(out, {"normalized_frequency", "ccdf"});
      for (const auto& [x, p] : r.ccdf) {
        w.cell(x).cell(p);
        w.end_row();
      }
    }
  }
  if (r.diffusion) {
    {
      auto out = open_output(dir / "rings_diffusion.csv");
      csv::Writer w(out, {"ring", "class", "n", "r", "beta", "alpha"});
      for (const auto& row : r.diffusion->rows) {
        w.cell(row.label).cell(diffusion::to_string(row.column)).cell(static_cast<std::uint64_t>(row.n));
        if (row.fit) {
          w.cell(row.fit->r).cell(row.fit->beta).cell(row.fit->alpha);
        } else {
          w.empty().empty().empty();
        }
        w.end_row();
      }
    }
    {
      auto out = open_output(dir / "ring_volumes.csv");
      csv::Writer w(out, {"ring", "mean_retweets_per_link", "mean_retweets_per_ego"});
      for (const auto& row : r.volumes) {
        w.cell("R" + std::to_string(row.ring)).cell(row.mean_retweets_per_link).cell(row.mean_retweets_per_ego);
        w.end_row();
      }
    }
  }
}

int exit_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::config:
      return 1;
    case ErrorCode::no_eligible_egos:
      return 2;
    case ErrorCode::parse:
    case ErrorCode::validation:
    case ErrorCode::io:
      return 3;
    default:
      return 4;
  }
}

std::string error_record(ErrorCode code, const std::string& message) {
  return Json{{"error", {{"code", to_string(code)}, {"message", message}}}}.dump();
}

namespace {

Json summary_json(const PipelineConfig& cfg, Stage stage, const IngestSummary& s, const AnalysisReports& r,
                  double ingest_ms, double write_ms) {
  Json j;
  j["stage"] = to_string(stage);
  j["format"] = to_string(cfg.format);
  j["counts"] = {{"input_rows", s.input_rows}, {"egos_total", s.egos_total},
                 {"egos_eligible", s.egos_eligible}, {"ties", s.ties},
                 {"active_ties", s.active_ties}};
  Json discards = {{"egos_ineligible", s.egos_total - s.egos_eligible},
                   {"links_not_in_social_graph", s.links_not_in_social_graph},
                   {"dropped_other_egos", s.dropped_other_egos},
                   {"events_before_account_creation", s.events_before_account_creation},
                   {"zero_lifespan_links", s.zero_lifespan_links}};
  if (r.layers) {
    discards["egos_without_active_ties"] = r.layers->egos_without_ties;
    discards["egos_below_fixed_k"] = r.layers->egos - r.layers->egos_in_circles;
  }
  if (r.diffusion) {
    discards["diffusion_egos_without_replies"] = r.diffusion->egos_without_replies;
    discards["diffusion_egos_without_retweets"] = r.diffusion->egos_without_retweets;
    discards["diffusion_egos_without_rings"] = r.diffusion->egos_without_rings;
  }
  j["discards"] = discards;
  if (s.calibration) {
    j["calibration"] = {{"a", s.calibration->a}, {"m", s.calibration->m},
                        {"zero_count_floor", s.calibration->zero_count_floor}};
  }
  if (r.layers) {
    j["layers"] = {{"k_max", cfg.k_max},
                   {"fixed_k", r.layers->fixed_k},
                   {"likelihood", cfg.aic.model == layers::LikelihoodModel::gaussian_mixture ? "gaussian_mixture"
                                                                                             : "classification"},
                   {"variance_floor", cfg.aic.variance_floor},
                   {"egos_clustered", r.layers->egos},
                   {"egos_in_circles", r.layers->egos_in_circles}};
  }
  if (r.mapping) {
    Json m = {{"mapped", r.mapping->mapped}};
    if (!r.mapping->mapped) m["reason"] = r.mapping->reason;
    m["rescale_factor"] = optional_number(r.mapping->rescale_factor);
    j["mapping"] = m;
  }
  if (r.diffusion) {
    j["diffusion"] = {{"rings", cfg.rings}, {"egos_used", r.diffusion->egos_used}};
    for (const auto& row : r.diffusion->rows) {
      if (row.ring == 0 && row.column == diffusion::ClassColumn::all) j["diffusion"]["whole_network"] = fit_json(row.fit);
    }
  }
  if (r.activity) {
    j["activity_correlations"] = {{"egos", r.activity->egos},
                                  {"activity_tweets", optional_number(r.activity->activity_tweets)},
                                  {"log_activity_tweets", optional_number(r.activity->log_activity_tweets)},
                                  {"log_activity_retweets", optional_number(r.activity->log_activity_retweets)},
                                  {"popularity", optional_number(r.activity->popularity)}};
  }
  j["timings_ms"] = {{"ingest", ingest_ms}, {"layers", r.layers_ms}, {"diffusion", r.diffusion_ms},
                     {"write", write_ms}};
  return j;
}

}  // namespace

int run_pipeline(const PipelineConfig& cfg, Stage stage) {
  auto fail = [&](ErrorCode code, const std::string& message) {
    const std::string record = error_record(code, message);
    std::cerr << record << '\n';
    std::error_code ec;
    std::filesystem::create_directories(cfg.output_dir, ec);
    if (!ec) {
      std::ofstream out(cfg.output_dir / "error.json", std::ios::binary);
      if (out) out << record << '\n';
    }
    return exit_status(code);
  };
  try {
    using Clock = std::chrono::steady_clock;
    const auto t0 = Clock::now();
    auto ingested = ingest_input(cfg);
    const auto t1 = Clock::now();
    const auto reports = analyze(ingested.nets, cfg, stage);
    const auto t2 = Clock::now();
    std::error_code ec;
    std::filesystem::create_directories(cfg.output_dir, ec);
    if (ec) throw Error(ErrorCode::io, "cannot create '" + cfg.output_dir.string() + "'");
    std::filesystem::remove(cfg.output_dir / "error.json", ec);
    if (stage == Stage::ingest) write_ties(cfg.output_dir / "ties.csv", ingested.nets);
    write_reports(cfg.output_dir, reports);
    const auto t3 = Clock::now();
    auto ms = [](Clock::time_point a, Clock::time_point b) {
      return std::chrono::duration<double, std::milli>(b - a).count();
    };
    auto out = open_output(cfg.output_dir / "summary.json");
    out << summary_json(cfg, stage, ingested.summary, reports, ms(t0, t1), ms(t2, t3)).dump(2) << '\n';
    return 0;
  } catch (const Error& e) {
    return fail(e.code(), e.what());
  } catch (const std::exception& e) {
    return fail(ErrorCode::range, e.what());
  }
}

}  // namespace egonet::pipeline
