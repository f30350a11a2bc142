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

#ifndef EGONET_MODEL_HPP
#define EGONET_MODEL_HPP

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace egonet {

// Opaque account identifier. Carries no semantic content.
struct AccountId {
  std::uint64_t value = 0;

  friend constexpr auto operator<=>(const AccountId&, const AccountId&) = default;
};

enum class InteractionKind : std::uint8_t { reply, mention, retweet, post, comment };

std::string_view to_string(InteractionKind kind);
std::optional<InteractionKind> parse_interaction_kind(std::string_view text);

// All timestamps are months before the download; the download is t = 0 and
// larger values are further in the past.
struct InteractionEvent {
  AccountId source;
  std::optional<AccountId> target;  // absent only for posts
  InteractionKind kind = InteractionKind::post;
  double months_before_download = 0.0;
  std::optional<AccountId> original_author;  // retweets only
};

// Interaction counts of one link over the nested windows (w_k, 0), k = 1..4.
struct WindowCounts {
  std::uint64_t n1 = 0;
  std::uint64_t n2 = 0;
  std::uint64_t n3 = 0;
  std::uint64_t n4 = 0;

  // n_k for k in 0..4; n_0 is 0 by definition.
  std::uint64_t at(int k) const;
  bool nested() const { return n1 <= n2 && n2 <= n3 && n3 <= n4; }

  friend bool operator==(const WindowCounts&, const WindowCounts&) = default;
};

// Window edges in months. w_0 = 0 is the download time.
struct WindowConfig {
  double w1 = 1.0;
  double w2 = 6.0;
  double w3 = 12.0;
  double w4 = 43.0;

  // w_k for k in 0..4.
  double edge(int k) const;
  // Throws Error(config) unless 0 < w1 < w2 < w3 < w4.
  void check() const;
};

enum class AlterClass : std::uint8_t { socially_relevant, other, unknown };

std::string_view to_string(AlterClass cls);
std::optional<AlterClass> parse_alter_class(std::string_view text);

struct TieRecord {
  AccountId ego;
  AccountId alter;
  double frequency = 0.0;  // contacts per month
  std::optional<double> normalized_frequency;
  double link_lifespan = 0.0;  // months
  std::uint64_t reply_count = 0;
  std::uint64_t retweet_count = 0;
  double retweet_lifespan = 0.0;  // max(link lifespan, age of first retweet)
  AlterClass alter_class = AlterClass::unknown;

  bool active() const { return frequency > 0.0; }
};

// Ego-level counters used by the activity correlations.
struct EgoActivity {
  std::uint64_t tweets = 0;
  std::uint64_t retweets_made = 0;
  std::uint64_t retweets_received = 0;
};

struct EgoNetwork {
  AccountId ego;
  double ego_lifespan = 0.0;  // months
  std::vector<TieRecord> ties;
  std::uint64_t total_replies = 0;
  std::uint64_t total_retweets = 0;
  std::uint64_t total_interactions = 0;
  EgoActivity activity;

  std::size_t active_ties() const;
};

struct Violation {
  std::string field;
  std::optional<AccountId> alter;
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

// Empty iff every invariant of the model holds for `net`.
std::vector<Violation> validate(const EgoNetwork& net);

}  // namespace egonet

template <>
struct std::hash<egonet::AccountId> {
  std::size_t operator()(const egonet::AccountId& id) const noexcept {
    return std::hash<std::uint64_t>{}(id.value);
  }
};

#endif  // EGONET_MODEL_HPP
