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

#ifndef EGONET_INGEST_HPP
#define EGONET_INGEST_HPP

#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "egonet/model.hpp"
#include "egonet/tie_strength.hpp"

namespace egonet::ingest {

// Undirected link key with the smaller id first.
struct LinkKey {
  AccountId lo;
  AccountId hi;

  static LinkKey of(AccountId a, AccountId b) { return a < b ? LinkKey{a, b} : LinkKey{b, a}; }
  friend bool operator==(const LinkKey&, const LinkKey&) = default;
};

struct LinkKeyHash {
  std::size_t operator()(const LinkKey& k) const noexcept {
    const std::uint64_t h = k.lo.value * 0x9E3779B97F4A7C15ULL ^ (k.hi.value + 0x632BE59BD9B4E019ULL);
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

using SocialGraph = std::unordered_set<LinkKey, LinkKeyHash>;

struct LinkCounts {
  AccountId ego;
  AccountId alter;
  WindowCounts counts;
};

struct WindowGraph {
  std::vector<LinkCounts> links;
  std::size_t rows = 0;
  // Links dropped because the social graph does not contain them.
  std::size_t discarded = 0;
};

// `ego,alter,n1,n2,n3,n4`. One row per undirected link; a repeated link, a
// self link or non-nested counts is a validation error carrying the line.
WindowGraph parse_window_graph(std::istream& in, const WindowConfig& cfg,
                               const SocialGraph* social = nullptr);
WindowGraph parse_window_graph(const std::filesystem::path& path, const WindowConfig& cfg,
                               const SocialGraph* social = nullptr);
void write_window_graph(std::ostream& out, std::span<const LinkCounts> links);

// `ego,alter`.
SocialGraph parse_social_graph(std::istream& in);
SocialGraph parse_social_graph(const std::filesystem::path& path);
void write_social_graph(std::ostream& out, std::span<const LinkCounts> links);

// `source,target,kind,months_before_download[,original_author]`.
std::vector<InteractionEvent> parse_event_log(std::istream& in);
std::vector<InteractionEvent> parse_event_log(const std::filesystem::path& path);
void write_event_log(std::ostream& out, std::span<const InteractionEvent> events);

struct AccountStats {
  AccountId id;
  std::optional<double> created_months_before_download;
  std::uint64_t tweets = 0;
  std::uint64_t following = 0;
  std::uint64_t followers = 0;
  double reply_ratio = 0.0;
  double mention_ratio = 0.0;
};

using AccountTable = std::unordered_map<AccountId, AccountStats>;

// `id,created_months_before_download,tweets,following,followers,reply_ratio,mention_ratio`.
// An empty creation field means unknown.
AccountTable parse_accounts(std::istream& in);
AccountTable parse_accounts(const std::filesystem::path& path);
void write_accounts(std::ostream& out, std::span<const AccountStats> accounts);

struct EgoEligibilityRule {
  double min_account_age = 6.0;             // months
  double min_monthly_interactions = 10.0;   // interactions per month of lifespan
};

bool is_eligible(const EgoNetwork& net, const EgoEligibilityRule& rule);
std::vector<EgoNetwork> select_eligible_egos(std::vector<EgoNetwork> nets,
                                             const EgoEligibilityRule& rule);

// Rule-based account classifier. An account is `other` when it replies
// rarely and is followed far more than it follows; accounts with fewer than
// `min_tweets` tweets or no statistics are `unknown`.
struct AlterClassRule {
  double other_reply_ratio_below = 0.05;
  double other_follower_ratio_above = 10.0;
  double other_mention_ratio_below = 0.0;  // 0 disables the mention test
  std::uint64_t min_tweets = 0;
};

AlterClass classify_alter(const AccountStats* stats, const AlterClassRule& rule);
inline AlterClass classify_alter(const std::optional<AccountStats>& stats, const AlterClassRule& rule) {
  return classify_alter(stats ? &*stats : nullptr, rule);
}

// Duplicates every link into both endpoints' networks and estimates contact
// frequencies with `cal`. Inactive links keep frequency 0 and a lifespan of
// w4. Ego lifespan is the age of the ego's oldest active link. Output is
// sorted by ego id; ties are sorted by alter id.
std::vector<EgoNetwork> assemble_window_networks(std::span<const LinkCounts> links,
                                                 const WindowConfig& cfg,
                                                 const tie::CalibrationConstants& cal);

struct EventAssemblyOptions {
  AlterClassRule alter_rule;
  // Drop egos the rule classifies as `other`.
  bool drop_other_egos = true;
};

struct EventAssembly {
  std::vector<EgoNetwork> nets;
  std::size_t dropped_other_egos = 0;
  std::size_t events_before_account_creation = 0;
  std::size_t zero_lifespan_links = 0;
};

// Builds one network per ego. Egos are event sources; when an account table
// is given, only sources listed in it. A tie exists when the pair exchanged
// a mention or reply.
EventAssembly assemble_event_networks(std::span<const InteractionEvent> events,
                                      const AccountTable* accounts,
                                      const EventAssemblyOptions& options);

}  // namespace egonet::ingest

#endif  // EGONET_INGEST_HPP
