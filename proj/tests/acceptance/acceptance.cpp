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

// Acceptance suite: prints one PASS or FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "egonet/diffusion.hpp"
#include "egonet/layering.hpp"
#include "egonet/pipeline.hpp"
#include "egonet/synthgen.hpp"
#include "egonet/tie_strength.hpp"

namespace {

namespace fs = std::filesystem;
using namespace egonet;
using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string fmt(double v, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string list(const std::vector<double>& v, int digits = 3) {
  std::string out = "{";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + fmt(v[i], digits);
  return out + "}";
}

int failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
  if (!pass) ++failures;
  std::cout << (pass ? "PASS" : "FAIL") << " criterion " << id << " (" << name << "): " << detail << std::endl;
}

std::vector<double> active_frequencies(const EgoNetwork& net) {
  std::vector<double> f;
  for (const auto& t : net.ties) {
    if (t.active()) f.push_back(t.frequency);
  }
  return f;
}

// 1. Exact clustering against the brute-force oracle.
void clustering_optimality() {
  synth::Rng rng(1);
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 1 + rng.bits() % 12;
    std::vector<double> v(n);
    for (auto& x : v) x = i % 4 == 0 ? static_cast<double>(rng.bits() % 5) : rng.uniform(-10.0, 10.0);
    const std::size_t k = 1 + rng.bits() % std::min<std::size_t>(5, n);
    const double dp = layers::ckmeans_1d(v, k).total_within_ss;
    const double bf = synth::brute_force_kmeans(v, k).total_within_ss;
    worst = std::max(worst, std::abs(dp - bf));
  }
  const double elapsed = ms_since(t0);
  report(1, "clustering optimality", worst <= 1e-9 && elapsed < 1000.0,
         "200 instances, max |ckmeans - brute force| = " + fmt(worst, 12) + ", " + fmt(elapsed, 1) +
             " ms (limits 1e-9, 1000 ms)");
}

// 2. Within-SS and explained variance are monotone in k.
void monotonicity() {
  synth::Rng rng(2);
  std::size_t violations = 0, checks = 0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 2 + rng.bits() % 60;
    std::vector<double> v(n);
    for (auto& x : v) x = i % 5 == 0 ? static_cast<double>(rng.bits() % 4) : std::exp(2.0 * rng.normal());
    const auto sweep = layers::ckmeans_1d_sweep(v, n);
    for (std::size_t k = 1; k < sweep.size(); ++k) {
      const double tol = 1e-12 * (1.0 + sweep[k].total_ss);
      ++checks;
      if (sweep[k].total_within_ss > sweep[k - 1].total_within_ss + tol) ++violations;
      if (layers::explained_variance(sweep[k]).value < layers::explained_variance(sweep[k - 1]).value - 1e-12) {
        ++violations;
      }
    }
  }
  report(2, "monotonicity", violations == 0,
         std::to_string(violations) + " violations over " + std::to_string(checks) + " adjacent-k pairs, k = 1..n");
}

std::vector<EgoNetwork> nets_of(std::vector<synth::PlantedEgo> pop) {
  std::vector<EgoNetwork> nets;
  nets.reserve(pop.size());
  for (auto& p : pop) nets.push_back(std::move(p.net));
  return nets;
}

std::vector<double> scaling_row(const layers::PopulationSummary& s) {
  std::vector<double> out;
  for (const auto& c : s.circles) {
    if (c.scaling_factor) out.push_back(c.scaling_factor->mean);
  }
  return out;
}

// 3 and 4 share one planted population.
void layer_recovery() {
  const synth::LayerSpec spec;
  synth::PopulationOptions opt;
  opt.egos = 1000;
  opt.seed = 3;
  const auto pop = synth::generate_population(spec, nullptr, opt);

  // Planted oracle: per-ego minimum frequency of each planted circle.
  std::vector<double> planted_min(5, 0.0);
  for (const auto& p : pop) {
    for (std::size_t c = 1; c <= 5; ++c) {
      double m = INFINITY;
      for (std::size_t i = 0; i < p.net.ties.size(); ++i) {
        if (p.planted_ring[i] <= c) m = std::min(m, p.net.ties[i].frequency);
      }
      planted_min[c - 1] += m / static_cast<double>(pop.size());
    }
  }

  std::vector<EgoNetwork> nets;
  for (const auto& p : pop) nets.push_back(p.net);
  layers::PopulationOptions lopt;
  const auto summary = layers::population_summary(nets, lopt);

  std::size_t near_five = 0;
  for (const auto& e : summary.per_ego) near_five += e.k_star >= 4 && e.k_star <= 6;
  const double share = static_cast<double>(near_five) / static_cast<double>(summary.per_ego.size());

  std::vector<double> recovered_min;
  for (const auto& c : summary.circles) recovered_min.push_back(c.min_frequency.mean);
  bool decreasing = recovered_min.size() == 5;
  bool within = recovered_min.size() == 5;
  for (std::size_t i = 0; i < recovered_min.size(); ++i) {
    if (i > 0 && !(recovered_min[i] < recovered_min[i - 1])) decreasing = false;
    if (std::abs(recovered_min[i] - planted_min[i]) > 0.15 * planted_min[i]) within = false;
  }
  report(3, "k* recovery", share >= 0.9 && decreasing && within,
         "k* in {4,5,6} for " + fmt(100.0 * share, 1) + "% of 1000 egos (need >= 90%); fixed-k min freq " +
             list(recovered_min) + (decreasing ? " strictly decreasing" : " NOT strictly decreasing") +
             ", planted minima " + list(planted_min) + (within ? " within" : " NOT within") + " +-15%");

  // 4. Scaling factors on the same population, then on a 50% tie subsample.
  const auto ratios = scaling_row(summary);
  const std::vector<double> target = {3.04, 2.55, 2.54, 2.98};
  bool ratios_ok = ratios.size() == 4;
  for (std::size_t i = 0; i < ratios.size() && i < 4; ++i) ratios_ok &= std::abs(ratios[i] - target[i]) <= 0.6;

  std::vector<EgoNetwork> half = nets;
  synth::Rng rng(4);
  for (auto& net : half) {
    std::vector<TieRecord> kept;
    for (const auto& t : net.ties) {
      if (rng.uniform() < 0.5) kept.push_back(t);
    }
    net.ties = std::move(kept);
  }
  const auto sub = scaling_row(layers::population_summary(half, lopt));
  double shift = 0.0;
  for (std::size_t i = 0; i < std::min(sub.size(), ratios.size()); ++i) shift = std::max(shift, std::abs(sub[i] - ratios[i]));
  const bool shift_ok = sub.size() == 4 && shift < 0.2;
  report(4, "scaling-factor recovery", ratios_ok && shift_ok,
         "ratios " + list(ratios, 2) + " vs " + list(target, 2) + (ratios_ok ? " within" : " NOT within") +
             " +-0.6; 50% subsample " + list(sub, 2) + ", max shift " + fmt(shift) + " (need < 0.2)");
}

// 5. Window-class estimation closes on synthetic links.
void window_closure() {
  const WindowConfig cfg;
  synth::Rng rng(5);
  struct Link {
    WindowCounts counts;
    double birth;
    bool determined;
  };
  std::vector<Link> links;
  std::size_t determined = 0, agree = 0;
  for (std::uint64_t i = 0; i < 10000; ++i) {
    const double birth = cfg.w4 * (1.0 - rng.uniform());  // (0, w4]
    const double rate = std::exp(rng.uniform(std::log(0.2), std::log(20.0)));
    const auto c = synth::generate_window_counts(birth, rate, cfg, synth::derive_seed(5, i));
    int k = 1;
    while (birth > cfg.edge(k)) ++k;
    if (c.n4 == 0) continue;
    // Counts pin the class when the birth window itself saw an interaction.
    const bool pinned = c.at(k) > c.at(k - 1);
    if (pinned) {
      ++determined;
      agree += tie::index(tie::classify_relationship(c)) == k;
    }
    links.push_back({c, birth, pinned});
  }

  tie::CalibrationSettings settings;
  std::array<double, 4> sum{}, count{};
  // Targets are true mean ages of pinned links; later-born links whose birth
  // window stayed silent would push a class mean past its window.
  for (const auto& l : links) {
    if (!l.determined) continue;
    const int k = tie::index(tie::classify_relationship(l.counts));
    sum[k - 1] += l.birth;
    count[k - 1] += 1;
  }
  for (int k = 0; k < 4; ++k) settings.targets[k] = sum[k] / count[k];
  std::vector<WindowCounts> counts;
  for (const auto& l : links) counts.push_back(l.counts);
  const auto cal = tie::calibrate(counts, cfg, settings);

  std::array<double, 4> est{};
  count = {};
  bool factors_exact = true;
  for (const auto& l : links) {
    const auto e = tie::estimate_link(l.counts, cfg, cal);
    est[tie::index(e.cls) - 1] += e.duration;
    count[tie::index(e.cls) - 1] += 1;
    const double m = e.cls == tie::RelationshipClass::c1   ? 0.18
                     : e.cls == tie::RelationshipClass::c2 ? 0.82
                                                           : 1.0;
    if (e.frequency.scaled != e.frequency.raw * m) factors_exact = false;
  }
  double worst = 0.0;
  std::vector<double> targets, realized;
  for (int k = 0; k < 4; ++k) {
    targets.push_back(*settings.targets[k]);
    realized.push_back(est[k] / count[k]);
    worst = std::max(worst, std::abs(realized.back() - targets.back()) / targets.back());
  }
  report(5, "window-class closure", agree == determined && worst <= 0.02 && factors_exact,
         std::to_string(agree) + "/" + std::to_string(determined) + " determined links in their birth window (" +
             std::to_string(links.size()) + " active of 10000); mean durations " + list(realized, 2) + " vs targets " +
             list(targets, 2) + ", worst " + fmt(100.0 * worst, 4) + "% (limit 2%); C1/C2 factors " +
             (factors_exact ? "exact" : "NOT exact"));
}

// Small rings of close bands, so planted fret stays within the per-ego budget.
synth::LayerSpec diffusion_layers() {
  synth::LayerSpec spec;
  spec.rings = {{1.0, 8.0, 0.4}, {1.0, 6.0, 0.4}, {1.0, 4.5, 0.4}, {1.0, 3.4, 0.4}, {1.0, 2.5, 0.4}};
  spec.link_fraction_min = 0.05;
  spec.link_fraction_max = 0.2;
  spec.classified_share = 1.0;
  spec.socially_relevant_share = 1.0;
  return spec;
}

const diffusion::DiffusionRow& row_of(const diffusion::DiffusionReport& r, std::size_t ring, diffusion::ClassColumn c) {
  for (const auto& row : r.rows) {
    if (row.ring == ring && row.column == c) return row;
  }
  throw std::runtime_error("missing report row");
}

// 6. Planted per-ring regression laws are recovered.
void diffusion_recovery() {
  const auto layer = diffusion_layers();
  const synth::DiffusionSpec spec;
  synth::PopulationOptions opt;
  opt.egos = 15000;
  opt.seed = 6;
  const auto nets = nets_of(synth::generate_population(layer, &spec, opt));
  const auto report6 = diffusion::ring_diffusion_report(nets);

  // Per-ring frep variance for the theoretical correlation.
  std::vector<std::vector<double>> xs(6);
  for (const auto& net : nets) {
    if (const auto pairs = diffusion::diffusion_pairs(net)) {
      for (const auto& p : *pairs) xs[p.ring].push_back(p.frep);
    }
  }
  bool ok = true;
  std::size_t links = 0;
  std::vector<double> betas, rs, r_theory;
  for (std::size_t ring = 1; ring <= 5; ++ring) {
    const auto& row = row_of(report6, ring, diffusion::ClassColumn::socially_relevant);
    links += row.n;
    double mean = 0.0, var = 0.0;
    for (double x : xs[ring]) mean += x;
    mean /= static_cast<double>(xs[ring].size());
    for (double x : xs[ring]) var += (x - mean) * (x - mean);
    var /= static_cast<double>(xs[ring].size() - 1);
    const double beta = spec.rings[ring - 1].beta;
    const double theory = beta * std::sqrt(var) / std::sqrt(beta * beta * var + spec.sigma * spec.sigma);
    betas.push_back(row.fit ? row.fit->beta : NAN);
    rs.push_back(row.fit && row.fit->r ? *row.fit->r : NAN);
    r_theory.push_back(theory);
    ok &= row.fit && std::abs(row.fit->beta - beta) <= 0.05 && row.fit->r && std::abs(*row.fit->r - theory) <= 0.05;
  }
  ok &= links >= 20000;

  // Two processes: socially relevant alters follow the planted law, the
  // rest a flat one with a large intercept.
  auto mixed_layer = layer;
  mixed_layer.socially_relevant_share = 0.5;
  auto mixed = spec;
  mixed.other_rings = std::vector<synth::RingLaw>(5, synth::RingLaw{0.5, 0.2});
  opt.seed = 66;
  const auto mixed_nets = nets_of(synth::generate_population(mixed_layer, &mixed, opt));
  const auto mixed_report = diffusion::ring_diffusion_report(mixed_nets);
  auto whole_r = [&](diffusion::ClassColumn c) {
    const auto& row = row_of(mixed_report, 0, c);
    return row.fit && row.fit->r ? *row.fit->r : NAN;
  };
  const double r_all = whole_r(diffusion::ClassColumn::all);
  const double r_sr = whole_r(diffusion::ClassColumn::socially_relevant);
  const double r_other = whole_r(diffusion::ClassColumn::other);
  const bool separated = r_all < std::min(r_sr, r_other);
  report(6, "diffusion regression recovery", ok && separated,
         std::to_string(links) + " links; beta " + list(betas) + " vs {0.74, 0.76, 0.80, 0.85, 0.99} (+-0.05); r " +
             list(rs) + " vs theory " + list(r_theory) + " (+-0.05); mixture r pooled " + fmt(r_all) +
             " vs classes " + fmt(r_sr) + "/" + fmt(r_other) + (separated ? " (below both)" : " (NOT below both)"));
}

// 7. Outer rings carry more total retweet volume than inner ones.
void volume_reports() {
  const synth::LayerSpec layer;
  const synth::DiffusionSpec spec;
  synth::PopulationOptions opt;
  opt.egos = 2000;
  opt.seed = 7;
  const auto nets = nets_of(synth::generate_population(layer, &spec, opt));
  const auto rows = diffusion::ring_volume_report(nets);
  std::vector<double> per_link, per_ego;
  for (const auto& r : rows) {
    per_link.push_back(r.mean_retweets_per_link);
    per_ego.push_back(r.mean_retweets_per_ego);
  }
  const bool outer_volume_higher = per_ego.back() > per_ego.front();
  report(7, "volume reports", outer_volume_higher,
         "per link " + list(per_link, 2) + ", per ego " + list(per_ego, 1) + "; outer ring volume " +
             (outer_volume_higher ? "exceeds" : "does NOT exceed") + " inner ring volume");
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string summary_without_timings(const fs::path& dir) {
  const std::string text = read_file(dir / "summary.json");
  return text.substr(0, text.find("\"timings_ms\""));
}

int run(const std::string& args) {
  const std::string cmd = std::string(EGONET_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// 8. Golden fixture reproducibility and single-threaded throughput.
void determinism_and_performance(const fs::path& work) {
  const char* reports[] = {"kstar_density.csv", "circles.csv", "mapping.csv",
                           "ccdf.csv", "rings_diffusion.csv", "ring_volumes.csv"};
  const fs::path data(EGONET_TEST_DATA);
  const fs::path in = work / "fixture";
  bool ok = run("synth --spec " + (data / "fixture.spec").string() + " --egos 50 --seed 2026 -o " + in.string()) == 0;
  const std::string common =
      "all -i " + (in / "events.csv").string() + " --accounts " + (in / "accounts.csv").string() + " -o ";
  for (const char* out : {"run1", "run2"}) ok &= run(common + (work / out).string() + " --threads 1") == 0;
  ok &= run(common + (work / "run8").string() + " --threads 8") == 0;
  std::size_t mismatches = 0;
  for (const char* name : reports) {
    const std::string golden = read_file(data / "golden" / name);
    for (const char* out : {"run1", "run2", "run8"}) mismatches += read_file(work / out / name) != golden;
  }
  const std::string golden_summary = read_file(data / "golden" / "summary.json");
  for (const char* out : {"run1", "run2", "run8"}) mismatches += summary_without_timings(work / out) != golden_summary;
  const bool identical = ok && mismatches == 0;

  synth::PopulationOptions opt;
  opt.egos = 100000;
  opt.seed = 8;
  const auto t0 = Clock::now();
  const synth::DiffusionSpec perf_spec;
  auto nets = nets_of(synth::generate_population(synth::LayerSpec{}, &perf_spec, opt));
  const double gen_ms = ms_since(t0);
  std::size_t ties = 0;
  for (const auto& n : nets) ties += n.ties.size();

  pipeline::PipelineConfig cfg;
  cfg.output_dir = work / "perf";
  const auto t1 = Clock::now();
  const auto prepared = pipeline::prepare_networks(std::move(nets), cfg);
  const auto reports8 = pipeline::analyze(prepared.nets, cfg, pipeline::Stage::all);
  fs::create_directories(cfg.output_dir);
  pipeline::write_reports(cfg.output_dir, reports8);
  const double pipeline_s = ms_since(t1) / 1000.0;
  report(8, "determinism and performance", identical && pipeline_s < 60.0,
         std::string("golden reports ") + (identical ? "byte-identical" : "DIFFER") + " across 2 runs and --threads 1/8 (" +
             std::to_string(mismatches) + " mismatches); 100000 egos, " + std::to_string(ties) +
             " ties: pipeline " + fmt(pipeline_s, 1) + " s single-threaded (limit 60 s), generation " +
             fmt(gen_ms / 1000.0, 1) + " s not counted");
}

}  // namespace

int main(int argc, char** argv) {
  fs::path work = fs::temp_directory_path() / "egonet-acceptance";
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--work-dir" && i + 1 < argc) {
      work = argv[++i];
    } else {
      std::cerr << "usage: egonet_acceptance [--work-dir DIR]\n";
      return 2;
    }
  }
  fs::remove_all(work);
  fs::create_directories(work);

  clustering_optimality();
  monotonicity();
  layer_recovery();
  window_closure();
  diffusion_recovery();
  volume_reports();
  determinism_and_performance(work);
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
