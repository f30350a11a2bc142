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

#include "egonet/synthgen.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <string>

#include "egonet/diffusion.hpp"
#include "egonet/error.hpp"
#include "egonet/numeric.hpp"
#include "egonet/parallel.hpp"

namespace egonet::synth {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Stream tags that keep the per-ego generators independent.
constexpr std::uint64_t kDiffusionStream = 0xD1FF0510ULL;
constexpr std::uint64_t kEventStream = 0xE7E47500ULL;
constexpr std::uint64_t kWindowStream = 0x3120D035ULL;

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return splitmix64(splitmix64(base) ^ (stream * 0xD6E8FEB86659FD93ULL + 0x2545F4914F6CDD1DULL));
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (spare_) {
    const double z = *spare_;
    spare_.reset();
    return z;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  return u * f;
}

std::uint64_t Rng::poisson(double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) throw Error(ErrorCode::range, "poisson mean must be finite and >= 0");
  if (mean == 0.0) return 0;
  if (mean < 10.0) {
    const double limit = std::exp(-mean);
    std::uint64_t k = 0;
    double p = uniform();
    while (p > limit) {
      ++k;
      p *= uniform();
    }
    return k;
  }
  // Transformed rejection with squeeze (Hormann 1993).
  const double slam = std::sqrt(mean);
  const double loglam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  while (true) {
    const double u = uniform() - 0.5;
    const double v = uniform();
    const double us = 0.5 - std::abs(u);
    const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        -mean + k * loglam - std::lgamma(k + 1.0)) {
      return static_cast<std::uint64_t>(k);
    }
  }
}

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorCode::config, message);
}

// Highest i such that some key starts with `prefix` + i + '.'.
std::size_t ring_count(const KeyValueFile& file, const std::string& prefix) {
  std::size_t n = 0;
  for (const auto& [key, value] : file.values()) {
    if (key.rfind(prefix, 0) != 0) continue;
    const auto dot = key.find('.', prefix.size());
    if (dot == std::string::npos) continue;
    try {
      n = std::max<std::size_t>(n, std::stoul(key.substr(prefix.size(), dot - prefix.size())));
    } catch (const std::exception&) {
      throw Error(ErrorCode::config, "bad ring key '" + key + "'");
    }
  }
  return n;
}

double required(const KeyValueFile& file, const std::string& key) {
  const auto v = file.get_double(key);
  if (!v) throw Error(ErrorCode::config, "missing key '" + key + "'");
  return *v;
}

std::vector<RingLaw> read_laws(const KeyValueFile& file, const std::string& prefix, std::size_t n) {
  std::vector<RingLaw> laws;
  for (std::size_t i = 1; i <= n; ++i) {
    const std::string p = prefix + std::to_string(i) + ".";
    laws.push_back({required(file, p + "alpha"), required(file, p + "beta")});
  }
  return laws;
}

}  // namespace

void LayerSpec::check() const {
  require(!rings.empty(), "layer spec needs at least one ring");
  for (std::size_t i = 0; i < rings.size(); ++i) {
    require(rings[i].size > 0.0, "ring sizes must be positive");
    require(rings[i].frequency > 0.0, "ring frequencies must be positive");
    require(rings[i].dispersion >= 0.0, "ring dispersion must be >= 0");
    if (i > 0) require(rings[i].frequency < rings[i - 1].frequency, "ring frequencies must strictly decrease");
  }
  require(ego_lifespan_min > 0.0 && ego_lifespan_min <= ego_lifespan_max, "bad ego lifespan range");
  require(link_fraction_min > 0.0 && link_fraction_min <= link_fraction_max && link_fraction_max <= 1.0,
          "bad link lifespan fraction range");
  require(classified_share >= 0.0 && classified_share <= 1.0, "classified_share must lie in [0, 1]");
  require(socially_relevant_share >= 0.0 && socially_relevant_share <= 1.0,
          "socially_relevant_share must lie in [0, 1]");
  require(posts_per_reply >= 0.0 && popularity_max >= 0.0, "rates must be >= 0");
}

LayerSpec LayerSpec::from_file(const KeyValueFile& file) {
  LayerSpec s;
  if (const std::size_t n = ring_count(file, "ring"); n > 0 && file.contains("ring1.size")) {
    s.rings.clear();
    for (std::size_t i = 1; i <= n; ++i) {
      const std::string p = "ring" + std::to_string(i) + ".";
      s.rings.push_back({required(file, p + "size"), required(file, p + "freq"),
                         file.get_double(p + "sigma").value_or(0.3)});
    }
  }
  s.ego_lifespan_min = file.get_double("ego_lifespan.min").value_or(s.ego_lifespan_min);
  s.ego_lifespan_max = file.get_double("ego_lifespan.max").value_or(s.ego_lifespan_max);
  s.link_fraction_min = file.get_double("link_fraction.min").value_or(s.link_fraction_min);
  s.link_fraction_max = file.get_double("link_fraction.max").value_or(s.link_fraction_max);
  s.classified_share = file.get_double("classified_share").value_or(s.classified_share);
  s.socially_relevant_share = file.get_double("socially_relevant_share").value_or(s.socially_relevant_share);
  s.posts_per_reply = file.get_double("posts_per_reply").value_or(s.posts_per_reply);
  s.popularity_max = file.get_double("popularity_max").value_or(s.popularity_max);
  s.check();
  return s;
}

void DiffusionSpec::check() const {
  require(!rings.empty(), "diffusion spec needs at least one ring");
  require(sigma >= 0.0, "sigma must be >= 0");
  require(retweet_volume > 0.0, "retweet_volume must be positive");
  if (other_rings) require(other_rings->size() == rings.size(), "other rings must match the ring count");
}

DiffusionSpec DiffusionSpec::from_file(const KeyValueFile& file) {
  DiffusionSpec s;
  if (file.contains("ring1.alpha") || file.contains("ring1.beta")) {
    s.rings = read_laws(file, "ring", ring_count(file, "ring"));
  }
  if (const std::size_t n = ring_count(file, "other.ring"); n > 0) s.other_rings = read_laws(file, "other.ring", n);
  s.sigma = file.get_double("sigma").value_or(s.sigma);
  s.retweet_volume = file.get_double("retweet_volume").value_or(s.retweet_volume);
  s.check();
  return s;
}

void reject_unknown_spec_keys(const KeyValueFile& file) {
  static const std::vector<std::string> kFixed = {
      "ego_lifespan.min", "ego_lifespan.max", "link_fraction.min", "link_fraction.max",
      "classified_share", "socially_relevant_share", "posts_per_reply", "popularity_max",
      "sigma",            "retweet_volume"};
  static const std::vector<std::string> kRingFields = {"size", "freq", "sigma", "alpha", "beta"};
  for (const auto& [key, value] : file.values()) {
    if (std::find(kFixed.begin(), kFixed.end(), key) != kFixed.end()) continue;
    std::string rest = key;
    if (rest.rfind("other.", 0) == 0) rest = rest.substr(6);
    bool ok = false;
    if (rest.rfind("ring", 0) == 0) {
      const auto dot = rest.find('.');
      const std::string digits = rest.substr(4, dot == std::string::npos ? std::string::npos : dot - 4);
      const bool numeric = !digits.empty() && std::all_of(digits.begin(), digits.end(), ::isdigit);
      if (numeric && dot != std::string::npos) {
        const std::string field = rest.substr(dot + 1);
        ok = std::find(kRingFields.begin(), kRingFields.end(), field) != kRingFields.end();
      }
    }
    if (!ok) throw Error(ErrorCode::config, "unknown key '" + key + "'");
  }
}

AccountId sink_alter(AccountId ego) { return AccountId{(ego.value << kAlterBits) | ((1ULL << kAlterBits) - 1)}; }

AccountId retweeter_account(AccountId ego) {
  return AccountId{(ego.value << kAlterBits) | ((1ULL << kAlterBits) - 2)};
}

PlantedEgo generate_ego_network(const LayerSpec& spec, std::uint64_t seed, AccountId ego) {
  spec.check();
  if (ego.value == 0 || ego.value >= (1ULL << (64 - kAlterBits))) {
    throw Error(ErrorCode::range, "ego id out of range for synthetic alter ids");
  }
  Rng rng(seed);
  PlantedEgo out;
  EgoNetwork& net = out.net;
  net.ego = ego;
  net.ego_lifespan = rng.uniform(spec.ego_lifespan_min, spec.ego_lifespan_max);
  std::uint64_t next_alter = 0;
  std::uint64_t mentions = 0;
  for (std::size_t r = 0; r < spec.rings.size(); ++r) {
    const RingSpec& ring = spec.rings[r];
    // Every ring keeps at least one alter so the planted k is always present.
    const std::uint64_t size = std::max<std::uint64_t>(1, rng.poisson(ring.size));
    for (std::uint64_t i = 0; i < size; ++i) {
      if (next_alter >= (1ULL << kAlterBits) - 2) throw Error(ErrorCode::range, "too many alters for one ego");
      TieRecord t;
      t.ego = ego;
      t.alter = AccountId{(ego.value << kAlterBits) | next_alter++};
      t.frequency = ring.frequency * std::exp(ring.dispersion * rng.normal());
      t.link_lifespan = net.ego_lifespan * rng.uniform(spec.link_fraction_min, spec.link_fraction_max);
      t.retweet_lifespan = t.link_lifespan;
      t.reply_count = static_cast<std::uint64_t>(std::llround(t.frequency * t.link_lifespan));
      if (rng.uniform() < spec.classified_share) {
        t.alter_class = rng.uniform() < spec.socially_relevant_share ? AlterClass::socially_relevant
                                                                      : AlterClass::other;
      }
      if (t.reply_count == 0) ++mentions;
      net.total_replies += t.reply_count;
      net.ties.push_back(t);
      out.planted_ring.push_back(r + 1);
    }
  }
  const std::uint64_t posts = rng.poisson(spec.posts_per_reply * static_cast<double>(net.total_replies));
  net.activity.tweets = net.total_replies + mentions + posts;
  net.activity.retweets_received =
      rng.poisson(rng.uniform(0.0, spec.popularity_max) * static_cast<double>(net.activity.tweets));
  net.total_interactions = net.activity.tweets;
  return out;
}

PlantedDiffusion generate_diffusion(EgoNetwork net, std::span<const std::size_t> rings, const DiffusionSpec& spec,
                                    std::uint64_t seed) {
  spec.check();
  if (rings.size() != net.ties.size()) throw Error(ErrorCode::range, "one ring label per tie required");
  PlantedDiffusion out;
  if (net.total_replies == 0) {
    out.net = std::move(net);
    return out;
  }
  Rng rng(seed);
  const double lt = net.ego_lifespan;
  std::vector<double> planted(net.ties.size(), 0.0);
  CompensatedSum budget;
  for (std::size_t i = 0; i < net.ties.size(); ++i) {
    if (rings[i] == 0) continue;
    if (rings[i] > spec.rings.size()) throw Error(ErrorCode::range, "ring label beyond the diffusion spec");
    const TieRecord& t = net.ties[i];
    const bool other = t.alter_class == AlterClass::other && spec.other_rings;
    const RingLaw& law = other ? (*spec.other_rings)[rings[i] - 1] : spec.rings[rings[i] - 1];
    const double x = diffusion::frep(net, t);
    planted[i] = std::max(0.0, law.alpha + law.beta * x + spec.sigma * rng.normal());
    budget += planted[i] * std::max(t.link_lifespan, t.retweet_lifespan) / lt;
  }
  // fret sums to at most one per ego once weighted by lret / lt.
  if (budget.value() > 1.0) out.scale = 1.0 / budget.value();
  std::uint64_t assigned = 0;
  for (std::size_t i = 0; i < net.ties.size(); ++i) {
    TieRecord& t = net.ties[i];
    const double lret = std::max(t.link_lifespan, t.retweet_lifespan);
    t.retweet_count =
        static_cast<std::uint64_t>(std::llround(out.scale * planted[i] * lret * spec.retweet_volume / lt));
    assigned += t.retweet_count;
  }
  const std::uint64_t total = std::max<std::uint64_t>(assigned, std::llround(spec.retweet_volume));
  if (total > assigned) {
    TieRecord sink;
    sink.ego = net.ego;
    sink.alter = sink_alter(net.ego);
    sink.link_lifespan = lt;
    sink.retweet_lifespan = lt;
    sink.retweet_count = total - assigned;
    net.ties.push_back(sink);
  }
  net.total_retweets = total;
  net.activity.retweets_made = total;
  net.total_interactions += total;
  out.net = std::move(net);
  return out;
}

std::vector<PlantedEgo> generate_population(const LayerSpec& layer, const DiffusionSpec* diffusion,
                                            const PopulationOptions& options) {
  layer.check();
  if (diffusion) diffusion->check();
  std::vector<PlantedEgo> out(options.egos);
  parallel_for(options.egos, options.threads, [&](std::size_t i) {
    const AccountId ego{i + 1};
    PlantedEgo p = generate_ego_network(layer, derive_seed(options.seed, ego.value), ego);
    if (diffusion) {
      const auto rings = diffusion::assign_rings(p.net, options.rings);
      const std::vector<std::size_t>& labels = rings ? *rings : p.planted_ring;
      auto d = generate_diffusion(std::move(p.net), labels, *diffusion,
                                  derive_seed(options.seed ^ kDiffusionStream, ego.value));
      p.net = std::move(d.net);
      p.planted_ring.resize(p.net.ties.size(), 0);
    }
    out[i] = std::move(p);
  });
  return out;
}

layers::ClusterSolution brute_force_kmeans(std::span<const double> values, std::size_t k) {
  const std::size_t n = values.size();
  if (n > 16) throw Error(ErrorCode::range, "brute force limited to 16 values");
  if (k == 0 || k > n) throw Error(ErrorCode::arity, "k must lie in 1..n");
  layers::ClusterSolution sol;
  sol.k = k;
  sol.order.resize(n);
  std::iota(sol.order.begin(), sol.order.end(), std::size_t{0});
  std::stable_sort(sol.order.begin(), sol.order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  for (std::size_t i : sol.order) sol.sorted_values.push_back(values[i]);
  const auto& x = sol.sorted_values;

  auto cluster = [&](std::size_t begin, std::size_t end) {
    layers::Cluster c;
    c.begin = begin;
    c.size = end - begin;
    double sum = 0.0;
    for (std::size_t i = begin; i < end; ++i) sum += x[i];
    c.mean = sum / static_cast<double>(c.size);
    for (std::size_t i = begin; i < end; ++i) c.within_ss += (x[i] - c.mean) * (x[i] - c.mean);
    return c;
  };

  // Split points are strictly increasing in 1..n-1, enumerated in
  // lexicographic order.
  std::vector<std::size_t> split(k - 1);
  std::iota(split.begin(), split.end(), std::size_t{1});
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    std::vector<layers::Cluster> clusters;
    std::size_t begin = 0;
    double total = 0.0;
    for (std::size_t s : split) {
      clusters.push_back(cluster(begin, s));
      total += clusters.back().within_ss;
      begin = s;
    }
    clusters.push_back(cluster(begin, n));
    total += clusters.back().within_ss;
    if (total < best) {
      best = total;
      sol.boundaries = split;
      sol.clusters = std::move(clusters);
      sol.total_within_ss = total;
    }
    // Advance to the next combination.
    std::size_t i = split.size();
    while (i > 0 && split[i - 1] == n - (split.size() - i) - 1) --i;
    if (i == 0) break;
    ++split[i - 1];
    for (std::size_t j = i; j < split.size(); ++j) split[j] = split[j - 1] + 1;
  }
  sol.total_ss = cluster(0, n).within_ss;
  return sol;
}

WindowCounts generate_window_counts(double true_birth, double rate, const WindowConfig& cfg, std::uint64_t seed) {
  cfg.check();
  if (!(true_birth > 0.0) || true_birth > cfg.w4) throw Error(ErrorCode::range, "birth must lie in (0, w4]");
  if (!(rate >= 0.0) || !std::isfinite(rate)) throw Error(ErrorCode::range, "rate must be finite and >= 0");
  Rng rng(seed);
  std::array<std::uint64_t, 4> n{};
  std::uint64_t running = 0;
  for (int k = 1; k <= 4; ++k) {
    const double span = std::max(0.0, std::min(cfg.edge(k), true_birth) - cfg.edge(k - 1));
    running += rng.poisson(rate * span);
    n[k - 1] = running;
  }
  return {n[0], n[1], n[2], n[3]};
}

SerializedPopulation serialize(std::span<const PlantedEgo> population, const WindowConfig& cfg, std::uint64_t seed) {
  cfg.check();
  SerializedPopulation out;
  std::vector<ingest::AccountStats> alters;
  for (const auto& p : population) {
    const EgoNetwork& net = p.net;
    Rng rng(derive_seed(seed ^ kEventStream, net.ego.value));
    const AccountId sink = sink_alter(net.ego);
    std::uint64_t replies = 0, mentions = 0;
    auto emit = [&](AccountId source, std::optional<AccountId> target, InteractionKind kind, double t,
                    std::optional<AccountId> author = std::nullopt) {
      out.events.push_back({source, target, kind, t, author});
    };
    for (const auto& t : net.ties) {
      if (t.reply_count == 0) {
        emit(net.ego, t.alter, InteractionKind::mention, t.link_lifespan);
        ++mentions;
      } else {
        // The first reply fixes the link lifespan; the rest fall inside it.
        emit(net.ego, t.alter, InteractionKind::reply, t.link_lifespan);
        for (std::uint64_t i = 1; i < t.reply_count; ++i) {
          emit(net.ego, t.alter, InteractionKind::reply, rng.uniform(0.0, t.link_lifespan));
        }
        replies += t.reply_count;
      }
      for (std::uint64_t i = 0; i < t.retweet_count; ++i) {
        emit(net.ego, t.alter, InteractionKind::retweet, rng.uniform(0.0, t.retweet_lifespan), t.alter);
      }
      if (t.alter == sink || t.alter_class == AlterClass::unknown) continue;
      ingest::AccountStats a;
      a.id = t.alter;
      if (t.alter_class == AlterClass::socially_relevant) {
        a.tweets = 100;
        a.following = 150;
        a.followers = 150;
        a.reply_ratio = 0.184;
        a.mention_ratio = 0.3;
      } else {
        a.tweets = 1000;
        a.following = 100;
        a.followers = 5000;
        a.reply_ratio = 0.01;
        a.mention_ratio = 0.05;
      }
      alters.push_back(a);
    }
    const std::uint64_t written = replies + mentions;
    for (std::uint64_t i = written; i < net.activity.tweets; ++i) {
      emit(net.ego, std::nullopt, InteractionKind::post, rng.uniform(0.0, net.ego_lifespan));
    }
    const AccountId fan = retweeter_account(net.ego);
    for (std::uint64_t i = 0; i < net.activity.retweets_received; ++i) {
      emit(fan, net.ego, InteractionKind::retweet, rng.uniform(0.0, net.ego_lifespan), net.ego);
    }
    ingest::AccountStats e;
    e.id = net.ego;
    e.created_months_before_download = net.ego_lifespan;
    e.tweets = std::max(net.activity.tweets, written);
    e.following = 200;
    e.followers = 200;
    if (e.tweets > 0) {
      e.reply_ratio = static_cast<double>(replies) / static_cast<double>(e.tweets);
      e.mention_ratio = static_cast<double>(mentions) / static_cast<double>(e.tweets);
    }
    out.accounts.push_back(e);

    for (const auto& t : net.ties) {
      if (t.alter == sink) continue;
      const double birth = std::min(t.link_lifespan, cfg.w4);
      out.windows.push_back({net.ego, t.alter,
                             generate_window_counts(birth, t.frequency, cfg,
                                                    derive_seed(seed ^ kWindowStream, t.alter.value))});
    }
  }
  out.accounts.insert(out.accounts.end(), alters.begin(), alters.end());
  return out;
}

void write_population(const std::filesystem::path& dir, const SerializedPopulation& data) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::io, "cannot create '" + dir.string() + "'");
  auto open = [&](const char* name) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw Error(ErrorCode::io, "cannot write '" + (dir / name).string() + "'");
    return out;
  };
  {
    auto out = open("events.csv");
    ingest::write_event_log(out, data.events);
  }
  {
    auto out = open("accounts.csv");
    ingest::write_accounts(out, data.accounts);
  }
  {
    auto out = open("windows.csv");
    ingest::write_window_graph(out, data.windows);
  }
}

}  // namespace egonet::synth
