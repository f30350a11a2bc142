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

#ifndef EGONET_TIE_STRENGTH_HPP
#define EGONET_TIE_STRENGTH_HPP

#include <array>
#include <filesystem>
#include <optional>
#include <span>

#include "egonet/keyvalue.hpp"
#include "egonet/model.hpp"

// Contact-frequency estimation. Windowed data carry only nested interaction
// counts, so the age of a link is inferred from how its counts grow across
// windows; event logs give the first contact directly.
namespace egonet::tie {

// C_k: the link's first interaction falls in (w_{k-1}, w_k).
enum class RelationshipClass : int { c1 = 1, c2 = 2, c3 = 3, c4 = 4 };

constexpr int index(RelationshipClass k) { return static_cast<int>(k); }
RelationshipClass class_from_index(int k);

struct CalibrationConstants {
  std::array<double, 4> a{1.0, 1.0, 1.0, 1.0};
  // Spike correction for young links; only C1 and C2 are rescaled.
  std::array<double, 4> m{0.18, 0.82, 1.0, 1.0};
  // Stand-in for n_{k-1} when it is zero.
  double zero_count_floor = 0.3;

  double a_of(RelationshipClass k) const { return a[index(k) - 1]; }
  double m_of(RelationshipClass k) const { return m[index(k) - 1]; }
  void check() const;
};

// Constants plus which a_k still need calibrating, and towards what mean
// durations. Loaded from `a1..a4, m1..m4, floor, target1..target4`.
struct CalibrationSettings {
  CalibrationConstants constants;
  std::array<bool, 4> a_fixed{false, false, false, false};
  std::array<std::optional<double>, 4> targets;

  static CalibrationSettings from_file(const KeyValueFile& file);
  static CalibrationSettings load(const std::filesystem::path& path);
};

// Midpoint of each class window.
std::array<double, 4> default_targets(const WindowConfig& cfg);

// Throws Error(inactive_link) when n4 == 0 and Error(validation) when the
// counts are not nested.
RelationshipClass classify_relationship(const WindowCounts& counts);

// h(r): relative growth of the count across the class window; 1 for C1, so
// all C1 links share one duration.
double interaction_ratio(const WindowCounts& counts, RelationshipClass k, double floor = 0.3);

// Estimated link age in months, inside (w_{k-1}, w_k) for h > 0.
double estimate_duration(double h, RelationshipClass k, const WindowConfig& cfg, double a);
inline double estimate_duration(double h, RelationshipClass k, const WindowConfig& cfg,
                                const CalibrationConstants& cal) {
  return estimate_duration(h, k, cfg, cal.a_of(k));
}

// Finds a > 0 such that the sample mean of estimate_duration(h, k, cfg, a)
// equals `target_mean_duration`. The mean is strictly decreasing in a, so the
// root is bracketed by doubling and refined by bisection.
double calibrate_a(std::span<const double> h_sample, RelationshipClass k, const WindowConfig& cfg,
                   double target_mean_duration);

struct FrequencyEstimate {
  double raw = 0.0;     // n4 / duration
  double scaled = 0.0;  // raw * m_k
};

FrequencyEstimate contact_frequency(const WindowCounts& counts, double duration, RelationshipClass k,
                                    const CalibrationConstants& cal);

// Complete per-link estimate for windowed data.
struct WindowEstimate {
  RelationshipClass cls = RelationshipClass::c1;
  double h = 0.0;
  double duration = 0.0;
  FrequencyEstimate frequency;
};

WindowEstimate estimate_link(const WindowCounts& counts, const WindowConfig& cfg,
                             const CalibrationConstants& cal);

// Calibrates every a_k not marked fixed over the active links in `counts`.
// Classes with no links keep their current a_k.
CalibrationConstants calibrate(std::span<const WindowCounts> counts, const WindowConfig& cfg,
                               const CalibrationSettings& settings);

struct ReplyFrequency {
  double frequency = 0.0;      // ego -> alter replies per month
  double link_lifespan = 0.0;  // months since the first mention or reply
  std::uint64_t replies = 0;
};

// Replies sent by `ego` to `alter`, divided by the time since the first
// mention or reply exchanged in either direction. `download_time` is the
// download's position on the events' months-before axis.
ReplyFrequency reply_frequency(std::span<const InteractionEvent> events, AccountId ego,
                               AccountId alter, double download_time = 0.0);

// Fills normalized_frequency = frequency / max frequency.
EgoNetwork normalize_ego_frequencies(EgoNetwork net);

}  // namespace egonet::tie

#endif  // EGONET_TIE_STRENGTH_HPP
