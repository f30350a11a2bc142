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

#include "egonet/tie_strength.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "egonet/error.hpp"
#include "egonet/numeric.hpp"

namespace egonet::tie {

RelationshipClass class_from_index(int k) {
  if (k < 1 || k > 4) throw Error(ErrorCode::range, "relationship class must be in 1..4");
  return static_cast<RelationshipClass>(k);
}

void CalibrationConstants::check() const {
  for (int k = 0; k < 4; ++k) {
    if (!(std::isfinite(a[k]) && a[k] > 0.0)) {
      throw Error(ErrorCode::config, "a" + std::to_string(k + 1) + " must be positive");
    }
    if (!(std::isfinite(m[k]) && m[k] > 0.0)) {
      throw Error(ErrorCode::config, "m" + std::to_string(k + 1) + " must be positive");
    }
  }
  if (!(std::isfinite(zero_count_floor) && zero_count_floor > 0.0)) {
    throw Error(ErrorCode::config, "floor must be positive");
  }
}

CalibrationSettings CalibrationSettings::from_file(const KeyValueFile& file) {
  file.reject_unknown({"a1", "a2", "a3", "a4", "m1", "m2", "m3", "m4", "floor", "target1",
                       "target2", "target3", "target4"});
  CalibrationSettings s;
  for (int k = 0; k < 4; ++k) {
    const std::string suffix = std::to_string(k + 1);
    if (auto a = file.get_double("a" + suffix)) {
      s.constants.a[k] = *a;
      s.a_fixed[k] = true;
    }
    if (auto m = file.get_double("m" + suffix)) s.constants.m[k] = *m;
    s.targets[k] = file.get_double("target" + suffix);
  }
  if (auto floor = file.get_double("floor")) s.constants.zero_count_floor = *floor;
  s.constants.check();
  return s;
}

CalibrationSettings CalibrationSettings::load(const std::filesystem::path& path) {
  return from_file(KeyValueFile::load(path));
}

std::array<double, 4> default_targets(const WindowConfig& cfg) {
  std::array<double, 4> t{};
  for (int k = 1; k <= 4; ++k) t[k - 1] = 0.5 * (cfg.edge(k - 1) + cfg.edge(k));
  return t;
}

RelationshipClass classify_relationship(const WindowCounts& c) {
  if (!c.nested()) throw Error(ErrorCode::validation, "window counts are not nested");
  if (c.n4 == 0) throw Error(ErrorCode::inactive_link, "inactive link: n4 = 0");
  // The class is the smallest window that already holds every interaction.
  if (c.n1 == c.n4) return RelationshipClass::c1;
  if (c.n2 == c.n4) return RelationshipClass::c2;
  if (c.n3 == c.n4) return RelationshipClass::c3;
  return RelationshipClass::c4;
}

double interaction_ratio(const WindowCounts& c, RelationshipClass k, double floor) {
  if (k == RelationshipClass::c1) return 1.0;
  const double current = static_cast<double>(c.at(index(k)));
  double previous = static_cast<double>(c.at(index(k) - 1));
  if (previous == 0.0) previous = floor;
  return current / previous - 1.0;
}

double estimate_duration(double h, RelationshipClass k, const WindowConfig& cfg, double a) {
  if (!(h >= 0.0) || !(a > 0.0)) {
    throw Error(ErrorCode::range, "estimate_duration requires h >= 0 and a > 0");
  }
  const double lo = cfg.edge(index(k) - 1);
  const double hi = cfg.edge(index(k));
  if (std::isinf(h)) return hi;
  return lo + (hi - lo) * (h / (h + a));
}

namespace {

double mean_growth_share(std::span<const double> h_sample, double a) {
  CompensatedSum sum;
  for (double h : h_sample) sum += h / (h + a);
  return sum.value() / static_cast<double>(h_sample.size());
}

}  // namespace

double calibrate_a(std::span<const double> h_sample, RelationshipClass k, const WindowConfig& cfg,
                   double target_mean_duration) {
  if (h_sample.empty()) throw Error(ErrorCode::insufficient_data, "calibration sample is empty");
  const double lo_edge = cfg.edge(index(k) - 1);
  const double hi_edge = cfg.edge(index(k));
  if (!(target_mean_duration > lo_edge && target_mean_duration < hi_edge)) {
    throw Error(ErrorCode::range, "calibration target must lie strictly inside the class window");
  }
  for (double h : h_sample) {
    if (!(h >= 0.0) || !std::isfinite(h)) {
      throw Error(ErrorCode::range, "interaction ratios must be finite and non-negative");
    }
  }
  const double width = hi_edge - lo_edge;
  const double share = (target_mean_duration - lo_edge) / width;

  // share(a) falls from the fraction of positive h (a -> 0) to 0 (a -> inf).
  const double positive =
      static_cast<double>(std::count_if(h_sample.begin(), h_sample.end(), [](double h) { return h > 0.0; })) /
      static_cast<double>(h_sample.size());
  if (!(share < positive)) {
    throw Error(ErrorCode::range, "calibration target is not reachable for this sample");
  }

  double lo = 1.0;
  double hi = 1.0;
  while (mean_growth_share(h_sample, hi) > share) hi *= 2.0;
  while (mean_growth_share(h_sample, lo) < share) lo *= 0.5;

  for (int iter = 0; iter < 400; ++iter) {
    const double mid = std::sqrt(lo * hi);
    if (!(mid > lo && mid < hi)) break;
    const double value = mean_growth_share(h_sample, mid);
    if (value == share) return mid;
    if (value > share) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double err_lo = std::abs(mean_growth_share(h_sample, lo) - share);
  const double err_hi = std::abs(mean_growth_share(h_sample, hi) - share);
  return err_lo <= err_hi ? lo : hi;
}

FrequencyEstimate contact_frequency(const WindowCounts& c, double duration, RelationshipClass k,
                                    const CalibrationConstants& cal) {
  if (!(duration > 0.0)) throw Error(ErrorCode::range, "duration must be positive");
  FrequencyEstimate f;
  f.raw = static_cast<double>(c.n4) / duration;
  f.scaled = f.raw * cal.m_of(k);
  return f;
}

WindowEstimate estimate_link(const WindowCounts& c, const WindowConfig& cfg,
                             const CalibrationConstants& cal) {
  WindowEstimate e;
  e.cls = classify_relationship(c);
  e.h = interaction_ratio(c, e.cls, cal.zero_count_floor);
  e.duration = estimate_duration(e.h, e.cls, cfg, cal);
  e.frequency = contact_frequency(c, e.duration, e.cls, cal);
  return e;
}

CalibrationConstants calibrate(std::span<const WindowCounts> counts, const WindowConfig& cfg,
                               const CalibrationSettings& settings) {
  CalibrationConstants out = settings.constants;
  const auto defaults = default_targets(cfg);
  std::array<std::vector<double>, 4> samples;
  for (const auto& c : counts) {
    if (c.n4 == 0) continue;
    const auto k = classify_relationship(c);
    samples[index(k) - 1].push_back(interaction_ratio(c, k, out.zero_count_floor));
  }
  for (int k = 1; k <= 4; ++k) {
    if (settings.a_fixed[k - 1] || samples[k - 1].empty()) continue;
    const double target = settings.targets[k - 1].value_or(defaults[k - 1]);
    out.a[k - 1] = calibrate_a(samples[k - 1], class_from_index(k), cfg, target);
  }
  return out;
}

ReplyFrequency reply_frequency(std::span<const InteractionEvent> events, AccountId ego,
                               AccountId alter, double download_time) {
  std::optional<double> first_contact;
  std::uint64_t replies = 0;
  for (const auto& e : events) {
    if (e.kind != InteractionKind::reply && e.kind != InteractionKind::mention) continue;
    if (!e.target) continue;
    const bool outgoing = e.source == ego && *e.target == alter;
    const bool incoming = e.source == alter && *e.target == ego;
    if (!outgoing && !incoming) continue;
    first_contact = std::max(first_contact.value_or(e.months_before_download), e.months_before_download);
    if (outgoing && e.kind == InteractionKind::reply) ++replies;
  }
  if (!first_contact) {
    throw Error(ErrorCode::no_link, "no mention or reply between the pair");
  }
  ReplyFrequency out;
  out.replies = replies;
  out.link_lifespan = *first_contact - download_time;
  if (!(out.link_lifespan > 0.0)) {
    throw Error(ErrorCode::range, "link lifespan must be positive");
  }
  out.frequency = static_cast<double>(replies) / out.link_lifespan;
  return out;
}

EgoNetwork normalize_ego_frequencies(EgoNetwork net) {
  double max_frequency = 0.0;
  for (const auto& t : net.ties) max_frequency = std::max(max_frequency, t.frequency);
  if (!(max_frequency > 0.0)) {
    throw Error(ErrorCode::degenerate_ego, "ego network has no positive contact frequency");
  }
  for (auto& t : net.ties) t.normalized_frequency = t.frequency / max_frequency;
  return net;
}

}  // namespace egonet::tie
