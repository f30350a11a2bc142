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

#include "egonet/layering.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "egonet/error.hpp"
#include "egonet/parallel.hpp"

namespace egonet::layers {

namespace {

// Prefix sums of values shifted by their median, which keeps the O(1)
// segment cost well conditioned.
class SegmentCost {
 public:
  explicit SegmentCost(std::span<const double> sorted) : s1_(sorted.size() + 1), s2_(sorted.size() + 1) {
    const double shift = sorted.empty() ? 0.0 : sorted[sorted.size() / 2];
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      const double v = sorted[i] - shift;
      s1_[i + 1] = s1_[i] + v;
      s2_[i + 1] = s2_[i] + v * v;
    }
  }

  // Within-SS of sorted[j..i], inclusive.
  double operator()(std::size_t j, std::size_t i) const {
    const double m = static_cast<double>(i - j + 1);
    const double sum = s1_[i + 1] - s1_[j];
    return std::max(0.0, s2_[i + 1] - s2_[j] - sum * sum / m);
  }

 private:
  std::vector<double> s1_;
  std::vector<double> s2_;
};

struct SortedInput {
  std::vector<double> values;
  std::vector<std::size_t> order;
};

SortedInput sort_input(std::span<const double> values) {
  SortedInput in;
  in.order.resize(values.size());
  std::iota(in.order.begin(), in.order.end(), std::size_t{0});
  std::stable_sort(in.order.begin(), in.order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  in.values.reserve(values.size());
  for (std::size_t i : in.order) in.values.push_back(values[i]);
  return in;
}

// Two-pass mean and SS of a contiguous range.
Cluster make_cluster(std::span<const double> sorted, std::size_t begin, std::size_t size) {
  Cluster c;
  c.begin = begin;
  c.size = size;
  CompensatedSum sum;
  for (std::size_t i = begin; i < begin + size; ++i) sum += sorted[i];
  c.mean = sum.value() / static_cast<double>(size);
  CompensatedSum ss;
  for (std::size_t i = begin; i < begin + size; ++i) {
    const double d = sorted[i] - c.mean;
    ss += d * d;
  }
  c.within_ss = ss.value();
  return c;
}

// Start indices of clusters 2..k for every k in 1..k_max, from one DP pass
// with divide-and-conquer row optimization.
class Sweep {
 public:
  Sweep(std::span<const double> sorted, std::size_t k_max) : n_(sorted.size()), cost_(sorted) {
    k_max_ = std::min(k_max, n_);
    const double inf = std::numeric_limits<double>::infinity();
    prev_.assign(n_, inf);
    cur_.assign(n_, inf);
    start_.assign(k_max_ * n_, 0);
    for (std::size_t i = 0; i < n_; ++i) prev_[i] = cost_(0, i);
    for (std::size_t m = 2; m <= k_max_; ++m) {
      std::fill(cur_.begin(), cur_.end(), inf);
      solve_row(m, m - 1, n_ - 1, m - 1, n_ - 1);
      std::swap(prev_, cur_);
    }
  }

  std::size_t k_max() const { return k_max_; }

  std::vector<std::size_t> boundaries(std::size_t k) const {
    std::vector<std::size_t> b(k - 1);
    std::size_t i = n_ - 1;
    for (std::size_t m = k; m >= 2; --m) {
      const std::size_t j = start_[(m - 1) * n_ + i];
      b[m - 2] = j;
      i = j - 1;
    }
    return b;
  }

 private:
  // Fills cur_[i] for i in [ilo, ihi] knowing the optimal start lies in
  // [jlo, jhi]. Ties keep the smallest start.
  void solve_row(std::size_t m, std::size_t ilo, std::size_t ihi, std::size_t jlo, std::size_t jhi) {
    if (ilo > ihi) return;
    const std::size_t mid = ilo + (ihi - ilo) / 2;
    const std::size_t lo = std::max(jlo, m - 1);
    const std::size_t hi = std::min(jhi, mid);
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = lo;
    for (std::size_t j = lo; j <= hi; ++j) {
      const double v = prev_[j - 1] + cost_(j, mid);
      if (v < best) {
        best = v;
        arg = j;
      }
    }
    cur_[mid] = best;
    start_[(m - 1) * n_ + mid] = arg;
    if (mid > ilo) solve_row(m, ilo, mid - 1, jlo, arg);
    solve_row(m, mid + 1, ihi, arg, jhi);
  }

  std::size_t n_;
  std::size_t k_max_ = 0;
  SegmentCost cost_;
  std::vector<double> prev_;
  std::vector<double> cur_;
  std::vector<std::size_t> start_;
};

std::vector<Cluster> clusters_from(std::span<const double> sorted, std::span<const std::size_t> boundaries) {
  std::vector<Cluster> out;
  out.reserve(boundaries.size() + 1);
  std::size_t begin = 0;
  for (std::size_t b : boundaries) {
    out.push_back(make_cluster(sorted, begin, b - begin));
    begin = b;
  }
  out.push_back(make_cluster(sorted, begin, sorted.size() - begin));
  return out;
}

ClusterSolution make_solution(const SortedInput& in, std::vector<std::size_t> boundaries) {
  ClusterSolution sol;
  sol.k = boundaries.size() + 1;
  sol.sorted_values = in.values;
  sol.order = in.order;
  sol.clusters = clusters_from(in.values, boundaries);
  sol.boundaries = std::move(boundaries);
  CompensatedSum within;
  for (const auto& c : sol.clusters) within += c.within_ss;
  sol.total_within_ss = within.value();
  sol.total_ss = make_cluster(in.values, 0, in.values.size()).within_ss;
  return sol;
}

double log_likelihood_of(std::span<const Cluster> clusters, std::size_t n, const AicOptions& options) {
  CompensatedSum ll;
  const double two_pi = 2.0 * std::numbers::pi;
  for (const auto& c : clusters) {
    const double nj = static_cast<double>(c.size);
    const double var = std::max(c.within_ss / nj, options.variance_floor);
    ll += -0.5 * nj * std::log(two_pi * var) - c.within_ss / (2.0 * var);
    if (options.model == LikelihoodModel::gaussian_mixture) {
      ll += nj * std::log(nj / static_cast<double>(n));
    }
  }
  return ll.value();
}

double aic_of(std::span<const Cluster> clusters, std::size_t n, const AicOptions& options) {
  return -2.0 * log_likelihood_of(clusters, n, options) +
         2.0 * static_cast<double>(parameter_count(clusters.size(), options.model));
}

void check_values(std::span<const double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::range, "clustering input must be finite");
  }
}

}  // namespace

std::vector<std::size_t> ClusterSolution::labels() const {
  std::vector<std::size_t> out(order.size());
  for (std::size_t j = 0; j < clusters.size(); ++j) {
    for (std::size_t i = clusters[j].begin; i < clusters[j].begin + clusters[j].size; ++i) out[order[i]] = j;
  }
  return out;
}

ClusterSolution ckmeans_1d(std::span<const double> values, std::size_t k) {
  if (k == 0 || k > values.size()) {
    throw Error(ErrorCode::arity, "k = " + std::to_string(k) + " with " + std::to_string(values.size()) +
                                      " values");
  }
  check_values(values);
  const SortedInput in = sort_input(values);
  const Sweep sweep(in.values, k);
  return make_solution(in, sweep.boundaries(k));
}

std::vector<ClusterSolution> ckmeans_1d_sweep(std::span<const double> values, std::size_t k_max) {
  if (values.empty() || k_max == 0) throw Error(ErrorCode::arity, "empty sweep");
  check_values(values);
  const SortedInput in = sort_input(values);
  const Sweep sweep(in.values, k_max);
  std::vector<ClusterSolution> out;
  out.reserve(sweep.k_max());
  for (std::size_t k = 1; k <= sweep.k_max(); ++k) out.push_back(make_solution(in, sweep.boundaries(k)));
  return out;
}

ExplainedVariance explained_variance(const ClusterSolution& sol) {
  if (!(sol.total_ss > 0.0)) return {1.0, true};
  return {std::clamp((sol.total_ss - sol.total_within_ss) / sol.total_ss, 0.0, 1.0), false};
}

double log_likelihood(const ClusterSolution& sol, const AicOptions& options) {
  return log_likelihood_of(sol.clusters, sol.sorted_values.size(), options);
}

std::size_t parameter_count(std::size_t k, LikelihoodModel model) {
  return model == LikelihoodModel::gaussian_mixture ? 3 * k - 1 : 2 * k;
}

double aic(const ClusterSolution& sol, const AicOptions& options) {
  return aic_of(sol.clusters, sol.sorted_values.size(), options);
}

std::size_t select_k(std::span<const ClusterSolution> solutions, const AicOptions& options) {
  if (solutions.empty()) throw Error(ErrorCode::range, "no solutions to select from");
  std::size_t best = 0;
  double best_aic = aic(solutions[0], options);
  for (std::size_t i = 1; i < solutions.size(); ++i) {
    const double a = aic(solutions[i], options);
    if (a < best_aic) {
      best_aic = a;
      best = i;
    }
  }
  return best;
}

std::size_t optimal_k(std::span<const double> values, std::size_t k_max, const AicOptions& options) {
  if (values.empty()) throw Error(ErrorCode::range, "optimal_k needs at least one value");
  if (k_max == 0) throw Error(ErrorCode::range, "k_max must be at least 1");
  check_values(values);
  const SortedInput in = sort_input(values);
  const Sweep sweep(in.values, k_max);
  std::size_t best = 1;
  double best_aic = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k <= sweep.k_max(); ++k) {
    const auto clusters = clusters_from(in.values, sweep.boundaries(k));
    const double a = aic_of(clusters, in.values.size(), options);
    if (a < best_aic) {
      best_aic = a;
      best = k;
    }
  }
  return best;
}

CircleSet build_circles(const ClusterSolution& sol, std::span<const double> raw_frequencies) {
  if (raw_frequencies.size() != sol.order.size()) {
    throw Error(ErrorCode::range, "raw frequencies do not match the clustered values");
  }
  CircleSet set;
  set.ring_of.assign(sol.order.size(), 0);
  std::size_t size = 0;
  double min_freq = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < sol.clusters.size(); ++r) {
    const Cluster& c = sol.clusters[sol.clusters.size() - 1 - r];
    for (std::size_t i = c.begin; i < c.begin + c.size; ++i) {
      const std::size_t input = sol.order[i];
      set.ring_of[input] = r + 1;
      min_freq = std::min(min_freq, raw_frequencies[input]);
    }
    size += c.size;
    set.circles.push_back({size, c.size, min_freq});
  }
  return set;
}

std::vector<double> scaling_factors(std::span<const double> sizes) {
  std::vector<double> out;
  for (std::size_t i = 1; i < sizes.size(); ++i) out.push_back(sizes[i] / sizes[i - 1]);
  return out;
}

std::vector<double> scaling_factors(const CircleSet& set) {
  std::vector<double> sizes;
  for (const auto& c : set.circles) sizes.push_back(static_cast<double>(c.size));
  return scaling_factors(sizes);
}

std::vector<std::pair<double, double>> aggregate_ccdf(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorCode::range, "ccdf of an empty sample");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0 && values[i] == values[i - 1]) continue;
    out.emplace_back(values[i], static_cast<double>(values.size() - i) / n);
  }
  return out;
}

OfflineMapping map_to_offline(std::span<const double> sizes, std::span<const double> min_frequencies,
                              std::optional<double> reference_outer_size) {
  static constexpr std::array<const char*, 5> kNames = {"super support clique", "support clique",
                                                        "sympathy group", "affinity group", "active network"};
  if (sizes.size() != min_frequencies.size()) {
    throw Error(ErrorCode::range, "sizes and min frequencies differ in length");
  }
  OfflineMapping out;
  if (sizes.size() != 4 && sizes.size() != 5) {
    out.reason = "expected 4 or 5 circles, got " + std::to_string(sizes.size());
    return out;
  }
  out.mapped = true;
  double factor = 1.0;
  if (reference_outer_size) {
    if (!(sizes.back() > 0.0)) throw Error(ErrorCode::range, "outermost circle is empty");
    factor = *reference_outer_size / sizes.back();
    out.rescale_factor = factor;
  }
  const std::size_t skip = kNames.size() - sizes.size();
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    out.circles.push_back({kNames[skip + i], sizes[i], min_frequencies[i], sizes[i] * factor});
  }
  return out;
}

std::optional<EgoLayers> analyze_ego(const EgoNetwork& net, std::size_t k_max, std::size_t fixed_k,
                                     const AicOptions& options) {
  if (k_max == 0 || fixed_k == 0) throw Error(ErrorCode::range, "k values must be at least 1");
  std::vector<double> raw;
  for (const auto& t : net.ties) {
    if (t.active()) raw.push_back(t.frequency);
  }
  if (raw.empty()) return std::nullopt;
  const double max_f = *std::max_element(raw.begin(), raw.end());
  std::vector<double> normalized(raw.size());
  std::transform(raw.begin(), raw.end(), normalized.begin(), [&](double f) { return f / max_f; });

  const SortedInput in = sort_input(normalized);
  const std::size_t n = raw.size();
  const bool with_circles = n >= fixed_k;
  const Sweep sweep(in.values, std::max(k_max, with_circles ? fixed_k : 1));

  EgoLayers out;
  out.ego = net.ego;
  out.active_ties = n;
  double best_aic = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k <= std::min(k_max, n); ++k) {
    const auto clusters = clusters_from(in.values, sweep.boundaries(k));
    const double a = aic_of(clusters, n, options);
    if (a < best_aic) {
      best_aic = a;
      out.k_star = k;
    }
  }
  if (with_circles) out.circles = build_circles(make_solution(in, sweep.boundaries(fixed_k)), raw);
  return out;
}

PopulationSummary summarize(std::vector<EgoLayers> per_ego, std::size_t fixed_k, std::size_t egos_without_ties) {
  PopulationSummary s;
  s.fixed_k = fixed_k;
  s.egos = per_ego.size();
  s.egos_without_ties = egos_without_ties;

  std::map<std::size_t, MeanAccumulator> by_k;
  for (const auto& e : per_ego) by_k[e.k_star].add(static_cast<double>(e.active_ties));
  for (const auto& [k, acc] : by_k) {
    KStarRow row;
    row.k = k;
    row.egos = acc.count();
    row.density = static_cast<double>(acc.count()) / static_cast<double>(s.egos);
    row.network_size = acc.estimate();
    s.kstar.push_back(row);
  }

  // sizes[i][e] is |C_{i+1}| of the e-th ego with circles.
  std::vector<std::vector<double>> sizes(fixed_k);
  std::vector<MeanAccumulator> min_freq(fixed_k), size_acc(fixed_k), ratio(fixed_k);
  for (const auto& e : per_ego) {
    if (!e.circles) continue;
    ++s.egos_in_circles;
    const auto& cs = e.circles->circles;
    for (std::size_t i = 0; i < fixed_k; ++i) {
      const double sz = static_cast<double>(cs[i].size);
      sizes[i].push_back(sz);
      size_acc[i].add(sz);
      min_freq[i].add(cs[i].min_frequency);
      if (i > 0) ratio[i].add(sz / static_cast<double>(cs[i - 1].size));
    }
  }
  s.per_ego = std::move(per_ego);
  if (s.egos_in_circles == 0) return s;
  const double n = static_cast<double>(s.egos_in_circles);
  for (std::size_t i = 0; i < fixed_k; ++i) {
    CircleRow row;
    row.circle = i + 1;
    row.min_frequency = min_freq[i].estimate();
    row.size = size_acc[i].estimate();
    if (i > 0) {
      const double a = row.size.mean;
      const double b = s.circles[i - 1].size.mean;
      Estimate sf;
      sf.n = s.egos_in_circles;
      sf.mean = a / b;
      if (s.egos_in_circles > 1) {
        CompensatedSum va, vb, cov;
        for (std::size_t e = 0; e < sizes[i].size(); ++e) {
          const double da = sizes[i][e] - a;
          const double db = sizes[i - 1][e] - b;
          va += da * da;
          vb += db * db;
          cov += da * db;
        }
        const double r = sf.mean;
        const double var =
            (va.value() + r * r * vb.value() - 2.0 * r * cov.value()) / (n - 1.0) / (n * b * b);
        sf.ci95 = 1.959963984540054 * std::sqrt(std::max(0.0, var));
      }
      row.scaling_factor = sf;
      row.mean_ratio = ratio[i].estimate();
    }
    s.circles.push_back(row);
  }
  return s;
}

PopulationSummary population_summary(std::span<const EgoNetwork> nets, const PopulationOptions& options) {
  std::vector<std::optional<EgoLayers>> slots(nets.size());
  parallel_for(nets.size(), options.threads, [&](std::size_t i) {
    slots[i] = analyze_ego(nets[i], options.k_max, options.fixed_k, options.aic);
  });
  std::vector<EgoLayers> per_ego;
  per_ego.reserve(nets.size());
  std::size_t without = 0;
  for (auto& s : slots) {
    if (s) {
      per_ego.push_back(std::move(*s));
    } else {
      ++without;
    }
  }
  return summarize(std::move(per_ego), options.fixed_k, without);
}

}  // namespace egonet::layers
