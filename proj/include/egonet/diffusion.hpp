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

#ifndef EGONET_DIFFUSION_HPP
#define EGONET_DIFFUSION_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "egonet/model.hpp"
#include "egonet/numeric.hpp"

namespace egonet::diffusion {

// Reply frequency normalized by the ego's reply rate:
// (rep / l) * (lt / reptot). Throws Error(insufficient_data) when the ego
// sent no replies and Error(range) for a non-positive lifespan.
double frep(const EgoNetwork& net, const TieRecord& tie);

// Retweet frequency normalized by the ego's retweet rate:
// (ret / lret) * (lt / rettot) with lret = max(l, retweet_lifespan).
// Throws Error(insufficient_data) when the ego made no retweets.
double fret(const EgoNetwork& net, const TieRecord& tie);

// Ring label per tie (1 = fastest cluster, k = slowest) from the optimal
// k-clustering of the active frequencies; inactive ties get 0. nullopt when
// the ego has fewer than k active ties.
std::optional<std::vector<std::size_t>> assign_rings(const EgoNetwork& net, std::size_t k = 5);

struct DiffusionPair {
  double frep = 0.0;
  double fret = 0.0;
  std::size_t ring = 0;  // 0 when the ego has no ring assignment
  AlterClass alter_class = AlterClass::unknown;
};

// Pairs for the active ties of one ego; nullopt when the ego made no replies
// or no retweets.
std::optional<std::vector<DiffusionPair>> diffusion_pairs(const EgoNetwork& net, std::size_t rings = 5);

struct FitResult {
  std::size_t n = 0;
  std::optional<double> r;  // absent when y is constant
  double alpha = 0.0;
  double beta = 0.0;
};

// Streaming sums for Pearson r and the OLS line y = alpha + beta x.
// Compensated, so results depend only on the order of additions.
class BivariateAccumulator {
 public:
  void add(double x, double y);
  std::size_t count() const { return n_; }

  // Throws Error(insufficient_data) for n < 3 and Error(zero_variance) when
  // x is constant.
  FitResult fit() const;

 private:
  std::size_t n_ = 0;
  double x0_ = 0.0;  // shift taken from the first sample
  double y0_ = 0.0;
  CompensatedSum sx_, sy_, sxx_, syy_, sxy_;
};

FitResult correlation_and_fit(std::span<const double> x, std::span<const double> y);

enum class ClassColumn { all, socially_relevant, other };
std::string_view to_string(ClassColumn c);

struct DiffusionRow {
  std::string label;     // "R1".."Rk" or "C<k>" for the whole network
  std::size_t ring = 0;  // 0 for the whole-network row
  ClassColumn column = ClassColumn::all;
  std::size_t n = 0;
  std::optional<FitResult> fit;  // absent when the fit is undefined
};

struct DiffusionReport {
  std::vector<DiffusionRow> rows;  // ring-major, then all/soc-rel/other
  std::size_t egos_used = 0;
  std::size_t egos_without_replies = 0;
  std::size_t egos_without_retweets = 0;
  std::size_t egos_without_rings = 0;  // used only in the whole-network row
};

struct DiffusionOptions {
  std::size_t rings = 5;
  unsigned threads = 1;
};

DiffusionReport ring_diffusion_report(std::span<const EgoNetwork> nets, const DiffusionOptions& options = {});

struct VolumeRow {
  std::size_t ring = 0;
  std::size_t links = 0;
  double mean_retweets_per_link = 0.0;
  double mean_ring_size = 0.0;
  double mean_retweets_per_ego = 0.0;  // per-link mean times mean ring size
};

// Over egos with a ring assignment; the sink of zero-frequency ties is
// ignored.
std::vector<VolumeRow> ring_volume_report(std::span<const EgoNetwork> nets, const DiffusionOptions& options = {});

struct ActivityCorrelations {
  std::size_t egos = 0;
  // Activity is the sum of the ego's tie frequencies.
  std::optional<double> activity_tweets;
  std::optional<double> log_activity_tweets;
  std::optional<double> log_activity_retweets;
  // Retweets received per tweet against activity.
  std::optional<double> popularity;
};

// Throws Error(insufficient_data) for fewer than three egos. A coefficient is
// absent when its sample has fewer than three points or no variance.
ActivityCorrelations activity_correlations(std::span<const EgoNetwork> nets);

}  // namespace egonet::diffusion

#endif  // EGONET_DIFFUSION_HPP
