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

#ifndef EGONET_LAYERING_HPP
#define EGONET_LAYERING_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "egonet/model.hpp"
#include "egonet/numeric.hpp"

namespace egonet::layers {

// One contiguous run of the ascending-sorted values.
struct Cluster {
  std::size_t begin = 0;  // index into sorted_values
  std::size_t size = 0;
  double mean = 0.0;
  double within_ss = 0.0;
};

struct ClusterSolution {
  std::size_t k = 0;
  std::vector<double> sorted_values;
  // order[i] is the input index of sorted_values[i].
  std::vector<std::size_t> order;
  // k-1 split points; cluster j+1 starts at boundaries[j].
  std::vector<std::size_t> boundaries;
  std::vector<Cluster> clusters;  // ascending by mean
  double total_within_ss = 0.0;
  double total_ss = 0.0;

  // Cluster index per input value, 0 for the lowest cluster.
  std::vector<std::size_t> labels() const;
};

// Optimal 1D k-means. Among partitions with equal cost the one whose
// leading (lowest) cluster is smallest wins. Throws Error(arity) unless
// 1 <= k <= values.size().
ClusterSolution ckmeans_1d(std::span<const double> values, std::size_t k);

// Optimal solutions for every k in 1..min(k_max, n) from a single DP pass.
std::vector<ClusterSolution> ckmeans_1d_sweep(std::span<const double> values, std::size_t k_max);

struct ExplainedVariance {
  double value = 0.0;
  bool degenerate = false;  // all values equal; value is 1 by convention
};

ExplainedVariance explained_variance(const ClusterSolution& sol);

// Likelihood used by the information criterion. Both use per-cluster normal
// densities with the ML variance floored at `variance_floor`.
//   gaussian_mixture: hard-assignment mixture with weights n_j / n; q = 3k - 1.
//   classification:   unweighted classification likelihood; q = 2k.
enum class LikelihoodModel { gaussian_mixture, classification };

struct AicOptions {
  LikelihoodModel model = LikelihoodModel::gaussian_mixture;
  double variance_floor = 1e-6;
};

double log_likelihood(const ClusterSolution& sol, const AicOptions& options = {});
std::size_t parameter_count(std::size_t k, LikelihoodModel model);
double aic(const ClusterSolution& sol, const AicOptions& options = {});

// Index into `solutions` of the lowest AIC; ties go to the smaller k.
std::size_t select_k(std::span<const ClusterSolution> solutions, const AicOptions& options = {});

// argmin over k in [1, min(k_max, n)] of the AIC. Throws Error(range) for
// empty input or k_max == 0.
std::size_t optimal_k(std::span<const double> values, std::size_t k_max = 20,
                      const AicOptions& options = {});

struct Circle {
  std::size_t size = 0;       // |C_i|
  std::size_t ring_size = 0;  // |C_i| - |C_{i-1}|
  double min_frequency = 0.0; // smallest raw frequency in C_i
};

// C_1 is the cluster with the highest centroid; C_k holds every value.
struct CircleSet {
  std::vector<Circle> circles;
  // Circle number (1-based) of the ring each input value belongs to.
  std::vector<std::size_t> ring_of;
};

// `raw_frequencies` is aligned with the values `sol` was computed on.
CircleSet build_circles(const ClusterSolution& sol, std::span<const double> raw_frequencies);

// |C_{i+1}| / |C_i|; empty for fewer than two circles.
std::vector<double> scaling_factors(std::span<const double> sizes);
std::vector<double> scaling_factors(const CircleSet& set);

// Empirical survival function P(X >= x) at each distinct value, ascending.
std::vector<std::pair<double, double>> aggregate_ccdf(std::vector<double> values);

struct NamedCircle {
  std::string name;
  double size = 0.0;
  double min_frequency = 0.0;
  double rescaled_size = 0.0;
};

struct OfflineMapping {
  bool mapped = false;
  std::string reason;
  std::vector<NamedCircle> circles;
  // Factor applied to sizes so the outermost circle matches the reference.
  std::optional<double> rescale_factor;
};

OfflineMapping map_to_offline(std::span<const double> sizes, std::span<const double> min_frequencies,
                              std::optional<double> reference_outer_size = std::nullopt);

// Per-ego clustering outcome.
struct EgoLayers {
  AccountId ego;
  std::size_t active_ties = 0;
  std::size_t k_star = 0;
  std::optional<CircleSet> circles;  // at the fixed k, when enough active ties
};

// Clusters the ego's normalized active frequencies. Returns nullopt for an
// ego without active ties.
std::optional<EgoLayers> analyze_ego(const EgoNetwork& net, std::size_t k_max, std::size_t fixed_k,
                                     const AicOptions& options = {});

struct KStarRow {
  std::size_t k = 0;
  std::size_t egos = 0;
  double density = 0.0;
  Estimate network_size;
};

struct CircleRow {
  std::size_t circle = 0;  // 1-based
  Estimate min_frequency;
  Estimate size;
  // Ratio of this circle's mean size to the previous one's, with a
  // delta-method interval. Absent for the first circle.
  std::optional<Estimate> scaling_factor;
  // Across-ego mean of per-ego size ratios.
  std::optional<Estimate> mean_ratio;
};

struct PopulationSummary {
  std::size_t egos = 0;            // egos with at least one active tie
  std::size_t egos_without_ties = 0;
  std::size_t egos_in_circles = 0;  // egos with at least fixed_k active ties
  std::size_t fixed_k = 0;
  std::vector<KStarRow> kstar;      // ascending k, only observed values
  std::vector<CircleRow> circles;
  std::vector<EgoLayers> per_ego;   // input order
};

struct PopulationOptions {
  std::size_t k_max = 20;
  std::size_t fixed_k = 5;
  AicOptions aic;
  unsigned threads = 1;
};

PopulationSummary population_summary(std::span<const EgoNetwork> nets, const PopulationOptions& options);

// Reduces precomputed per-ego results; population_summary is
// summarize(analyze_ego over nets).
PopulationSummary summarize(std::vector<EgoLayers> per_ego, std::size_t fixed_k,
                            std::size_t egos_without_ties = 0);

}  // namespace egonet::layers

#endif  // EGONET_LAYERING_HPP
