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

#ifndef EGONET_SYNTHGEN_HPP
#define EGONET_SYNTHGEN_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "egonet/ingest.hpp"
#include "egonet/keyvalue.hpp"
#include "egonet/layering.hpp"
#include "egonet/model.hpp"

// Planted-structure generators and brute-force oracles. Every generator is a
// pure function of its spec and seed.
namespace egonet::synth {

// splitmix64 finalizer over (base, stream); used for per-ego seeds.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

// std::mt19937_64 with distributions implemented here, so draws are identical
// on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }
  double uniform();  // [0, 1), 53 random bits
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();   // standard normal, Marsaglia polar method
  std::uint64_t poisson(double mean);  // Knuth below 10, PTRS above

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

struct RingSpec {
  double size = 1.0;        // expected number of alters in the ring
  double frequency = 1.0;   // median contact frequency, contacts/month
  double dispersion = 0.3;  // log-normal sigma
};

struct LayerSpec {
  // Ring sizes are differences of the circle sizes 1.66, 5.06, 12.87,
  // 32.66, 97.47.
  std::vector<RingSpec> rings{{1.66, 20.55, 0.3}, {3.40, 8.91, 0.3}, {7.81, 3.98, 0.3},
                              {19.79, 1.36, 0.3}, {64.81, 0.18, 0.3}};
  double ego_lifespan_min = 24.0;  // months
  double ego_lifespan_max = 60.0;
  // Link lifespan as a fraction of the ego lifespan.
  double link_fraction_min = 0.5;
  double link_fraction_max = 1.0;
  // Share of alters with account statistics, and of those the share that is
  // socially relevant.
  double classified_share = 0.3;
  double socially_relevant_share = 0.278;
  // Original posts per reply, and the upper end of the uniform per-ego
  // retweets-received-per-tweet rate.
  double posts_per_reply = 0.5;
  double popularity_max = 1.0;

  // Throws Error(config) on empty rings, non-decreasing frequencies,
  // non-positive sizes or invalid ranges.
  void check() const;
  // Keys: ring<i>.size, ring<i>.freq, ring<i>.sigma, ego_lifespan.min|max,
  // link_fraction.min|max, classified_share, socially_relevant_share,
  // posts_per_reply, popularity_max. Other keys are ignored.
  static LayerSpec from_file(const KeyValueFile& file);
};

struct RingLaw {
  double alpha = 0.0;
  double beta = 1.0;
};

struct DiffusionSpec {
  std::vector<RingLaw> rings{{0.03, 0.74}, {0.02, 0.76}, {0.03, 0.80}, {0.06, 0.85}, {0.09, 0.99}};
  double sigma = 0.05;
  // Law for alters classified `other`; the main law applies when absent.
  std::optional<std::vector<RingLaw>> other_rings;
  // Retweets per ego; whatever the planted laws leave over goes to a sink.
  double retweet_volume = 2000.0;

  void check() const;
  // Keys: ring<i>.alpha, ring<i>.beta, other.ring<i>.alpha|beta, sigma,
  // retweet_volume. Other keys are ignored.
  static DiffusionSpec from_file(const KeyValueFile& file);
};

// Rejects keys understood by neither spec.
void reject_unknown_spec_keys(const KeyValueFile& file);

struct PlantedEgo {
  EgoNetwork net;
  std::vector<std::size_t> planted_ring;  // per tie, 1-based; 0 for the sink
};

// Alter ids are (ego << 20) | index; the two highest indices are reserved.
constexpr std::uint64_t kAlterBits = 20;
AccountId sink_alter(AccountId ego);
AccountId retweeter_account(AccountId ego);

PlantedEgo generate_ego_network(const LayerSpec& spec, std::uint64_t seed, AccountId ego);

struct PlantedDiffusion {
  EgoNetwork net;
  // Factor applied to every planted fret so the retweet budget is not
  // exceeded; 1 when no rescaling was needed.
  double scale = 1.0;
};

// Plants fret = alpha_r + beta_r * frep + N(0, sigma) on every tie with a
// ring label, converts to retweet counts and adds a zero-frequency sink tie
// carrying the remaining volume. Egos without replies are returned as is.
PlantedDiffusion generate_diffusion(EgoNetwork net, std::span<const std::size_t> rings,
                                    const DiffusionSpec& spec, std::uint64_t seed);

struct PopulationOptions {
  std::size_t egos = 100;
  std::uint64_t seed = 1;
  std::size_t rings = 5;  // k used to assign rings before planting diffusion
  unsigned threads = 1;
};

// Egos have ids 1..egos. With a diffusion spec, rings come from the
// clustering of each ego and fall back to the planted rings.
std::vector<PlantedEgo> generate_population(const LayerSpec& layer, const DiffusionSpec* diffusion,
                                            const PopulationOptions& options);

// Exhaustive search over contiguous splits of the sorted values. Throws
// Error(range) above 16 values and Error(arity) for k outside 1..n.
layers::ClusterSolution brute_force_kmeans(std::span<const double> values, std::size_t k);

// Poisson interaction counts on (0, true_birth) split by window. Throws
// Error(range) unless 0 < true_birth <= w4 and rate >= 0.
WindowCounts generate_window_counts(double true_birth, double rate, const WindowConfig& cfg,
                                    std::uint64_t seed);

struct SerializedPopulation {
  std::vector<InteractionEvent> events;
  std::vector<ingest::AccountStats> accounts;
  std::vector<ingest::LinkCounts> windows;
};

// Event log and account table that assemble back to the same networks, and
// window counts drawn for every tie.
SerializedPopulation serialize(std::span<const PlantedEgo> population, const WindowConfig& cfg,
                               std::uint64_t seed);

// Writes events.csv, accounts.csv and windows.csv into `dir`.
void write_population(const std::filesystem::path& dir, const SerializedPopulation& data);

}  // namespace egonet::synth

#endif  // EGONET_SYNTHGEN_HPP
