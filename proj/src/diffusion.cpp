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

#include "egonet/diffusion.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "egonet/error.hpp"
#include "egonet/layering.hpp"
#include "egonet/parallel.hpp"

namespace egonet::diffusion {

double frep(const EgoNetwork& net, const TieRecord& tie) {
  if (net.total_replies == 0) throw Error(ErrorCode::insufficient_data, "ego sent no replies");
  if (!(tie.link_lifespan > 0.0)) throw Error(ErrorCode::range, "link lifespan must be positive");
  return static_cast<double>(tie.reply_count) / tie.link_lifespan * net.ego_lifespan /
         static_cast<double>(net.total_replies);
}

double fret(const EgoNetwork& net, const TieRecord& tie) {
  if (net.total_retweets == 0) throw Error(ErrorCode::insufficient_data, "ego made no retweets");
  const double lret = std::max(tie.link_lifespan, tie.retweet_lifespan);
  if (!(lret > 0.0)) throw Error(ErrorCode::range, "link lifespan must be positive");
  return static_cast<double>(tie.retweet_count) / lret * net.ego_lifespan /
         static_cast<double>(net.total_retweets);
}

std::optional<std::vector<std::size_t>> assign_rings(const EgoNetwork& net, std::size_t k) {
  std::vector<double> freqs;
  std::vector<std::size_t> index;
  for (std::size_t i = 0; i < net.ties.size(); ++i) {
    if (!net.ties[i].active()) continue;
    freqs.push_back(net.ties[i].frequency);
    index.push_back(i);
  }
  if (k == 0 || freqs.size() < k) return std::nullopt;
  const auto sol = layers::ckmeans_1d(freqs, k);
  const auto circles = layers::build_circles(sol, freqs);
  std::vector<std::size_t> rings(net.ties.size(), 0);
  for (std::size_t i = 0; i < index.size(); ++i) rings[index[i]] = circles.ring_of[i];
  return rings;
}

std::optional<std::vector<DiffusionPair>> diffusion_pairs(const EgoNetwork& net, std::size_t rings) {
  if (net.total_replies == 0 || net.total_retweets == 0) return std::nullopt;
  const auto labels = assign_rings(net, rings);
  std::vector<DiffusionPair> out;
  for (std::size_t i = 0; i < net.ties.size(); ++i) {
    const TieRecord& t = net.ties[i];
    if (!t.active()) continue;
    out.push_back({frep(net, t), fret(net, t), labels ? (*labels)[i] : 0, t.alter_class});
  }
  return out;
}

void BivariateAccumulator::add(double x, double y) {
  if (n_ == 0) {
    x0_ = x;
    y0_ = y;
  }
  ++n_;
  const double dx = x - x0_;
  const double dy = y - y0_;
  sx_ += dx;
  sy_ += dy;
  sxx_ += dx * dx;
  syy_ += dy * dy;
  sxy_ += dx * dy;
}

FitResult BivariateAccumulator::fit() const {
  if (n_ < 3) throw Error(ErrorCode::insufficient_data, "need at least 3 points, got " + std::to_string(n_));
  const double n = static_cast<double>(n_);
  const double mx = sx_.value() / n;
  const double my = sy_.value() / n;
  const double cxx = sxx_.value() - n * mx * mx;
  const double cyy = syy_.value() - n * my * my;
  const double cxy = sxy_.value() - n * mx * my;
  if (!(cxx > 0.0)) throw Error(ErrorCode::zero_variance, "regressor has zero variance");
  FitResult f;
  f.n = n_;
  if (cyy > 0.0) {
    f.beta = cxy / cxx;
    f.r = std::clamp(cxy / std::sqrt(cxx * cyy), -1.0, 1.0);
  }
  f.alpha = (my + y0_) - f.beta * (mx + x0_);
  return f;
}

FitResult correlation_and_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorCode::range, "x and y differ in length");
  BivariateAccumulator acc;
  for (std::size_t i = 0; i < x.size(); ++i) acc.add(x[i], y[i]);
  return acc.fit();
}

std::string_view to_string(ClassColumn c) {
  switch (c) {
    case ClassColumn::all:
      return "all";
    case ClassColumn::socially_relevant:
      return "socially_relevant";
    case ClassColumn::other:
      return "other";
  }
  return "all";
}

namespace {

std::optional<FitResult> try_fit(const BivariateAccumulator& acc) {
  try {
    return acc.fit();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::insufficient_data || e.code() == ErrorCode::zero_variance) return std::nullopt;
    throw;
  }
}

}  // namespace

DiffusionReport ring_diffusion_report(std::span<const EgoNetwork> nets, const DiffusionOptions& options) {
  const std::size_t k = options.rings;
  std::vector<std::optional<std::vector<DiffusionPair>>> slots(nets.size());
  parallel_for(nets.size(), options.threads, [&](std::size_t i) { slots[i] = diffusion_pairs(nets[i], k); });

  DiffusionReport report;
  // acc[ring][column]; ring 0 holds the whole network.
  std::vector<std::array<BivariateAccumulator, 3>> acc(k + 1);
  for (std::size_t i = 0; i < nets.size(); ++i) {
    if (!slots[i]) {
      if (nets[i].total_replies == 0) {
        ++report.egos_without_replies;
      } else {
        ++report.egos_without_retweets;
      }
      continue;
    }
    ++report.egos_used;
    const auto& pairs = *slots[i];
    if (!pairs.empty() && pairs.front().ring == 0) ++report.egos_without_rings;
    for (const auto& p : pairs) {
      std::array<bool, 3> in{true, p.alter_class == AlterClass::socially_relevant, p.alter_class == AlterClass::other};
      for (std::size_t c = 0; c < 3; ++c) {
        if (!in[c]) continue;
        acc[0][c].add(p.frep, p.fret);
        if (p.ring > 0) acc[p.ring][c].add(p.frep, p.fret);
      }
    }
  }
  constexpr std::array<ClassColumn, 3> kColumns = {ClassColumn::all, ClassColumn::socially_relevant,
                                                   ClassColumn::other};
  for (std::size_t r = 1; r <= k + 1; ++r) {
    const std::size_t ring = r <= k ? r : 0;
    const std::string label = ring > 0 ? "R" + std::to_string(ring) : "C" + std::to_string(k);
    for (std::size_t c = 0; c < 3; ++c) {
      DiffusionRow row;
      row.label = label;
      row.ring = ring;
      row.column = kColumns[c];
      row.n = acc[ring][c].count();
      row.fit = try_fit(acc[ring][c]);
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

std::vector<VolumeRow> ring_volume_report(std::span<const EgoNetwork> nets, const DiffusionOptions& options) {
  const std::size_t k = options.rings;
  std::vector<std::optional<std::vector<std::size_t>>> slots(nets.size());
  parallel_for(nets.size(), options.threads, [&](std::size_t i) { slots[i] = assign_rings(nets[i], k); });

  std::vector<std::uint64_t> links(k + 1, 0), retweets(k + 1, 0);
  std::size_t egos = 0;
  for (std::size_t i = 0; i < nets.size(); ++i) {
    if (!slots[i]) continue;
    ++egos;
    const auto& labels = *slots[i];
    for (std::size_t t = 0; t < labels.size(); ++t) {
      if (labels[t] == 0) continue;
      ++links[labels[t]];
      retweets[labels[t]] += nets[i].ties[t].retweet_count;
    }
  }
  std::vector<VolumeRow> rows;
  for (std::size_t r = 1; r <= k; ++r) {
    VolumeRow row;
    row.ring = r;
    row.links = links[r];
    if (links[r] > 0) {
      row.mean_retweets_per_link = static_cast<double>(retweets[r]) / static_cast<double>(links[r]);
    }
    if (egos > 0) row.mean_ring_size = static_cast<double>(links[r]) / static_cast<double>(egos);
    row.mean_retweets_per_ego = row.mean_retweets_per_link * row.mean_ring_size;
    rows.push_back(row);
  }
  return rows;
}

namespace {

std::optional<double> pearson(const std::vector<double>& x, const std::vector<double>& y) {
  BivariateAccumulator acc;
  for (std::size_t i = 0; i < x.size(); ++i) acc.add(x[i], y[i]);
  const auto f = try_fit(acc);
  return f ? f->r : std::nullopt;
}

}  // namespace

ActivityCorrelations activity_correlations(std::span<const EgoNetwork> nets) {
  if (nets.size() < 3) throw Error(ErrorCode::insufficient_data, "need at least 3 egos");
  ActivityCorrelations out;
  out.egos = nets.size();
  std::vector<double> act, tweets, log_act_t, log_tweets, log_act_r, log_rt, pop_act, pop;
  for (const auto& net : nets) {
    CompensatedSum a;
    for (const auto& t : net.ties) a += t.frequency;
    const double activity = a.value();
    const double tw = static_cast<double>(net.activity.tweets);
    const double rt = static_cast<double>(net.activity.retweets_made);
    act.push_back(activity);
    tweets.push_back(tw);
    if (activity > 0.0 && tw > 0.0) {
      log_act_t.push_back(std::log(activity));
      log_tweets.push_back(std::log(tw));
    }
    if (activity > 0.0 && rt > 0.0) {
      log_act_r.push_back(std::log(activity));
      log_rt.push_back(std::log(rt));
    }
    if (tw > 0.0) {
      pop_act.push_back(activity);
      pop.push_back(static_cast<double>(net.activity.retweets_received) / tw);
    }
  }
  out.activity_tweets = pearson(act, tweets);
  out.log_activity_tweets = pearson(log_act_t, log_tweets);
  out.log_activity_retweets = pearson(log_act_r, log_rt);
  out.popularity = pearson(pop_act, pop);
  return out;
}

}  // namespace egonet::diffusion
