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

#include "egonet/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "egonet/error.hpp"

namespace egonet {

std::string_view to_string(InteractionKind kind) {
  switch (kind) {
    case InteractionKind::reply: return "reply";
    case InteractionKind::mention: return "mention";
    case InteractionKind::retweet: return "retweet";
    case InteractionKind::post: return "post";
    case InteractionKind::comment: return "comment";
  }
  return "?";
}

std::optional<InteractionKind> parse_interaction_kind(std::string_view text) {
  if (text == "reply") return InteractionKind::reply;
  if (text == "mention") return InteractionKind::mention;
  if (text == "retweet") return InteractionKind::retweet;
  if (text == "post") return InteractionKind::post;
  if (text == "comment") return InteractionKind::comment;
  return std::nullopt;
}

std::string_view to_string(AlterClass cls) {
  switch (cls) {
    case AlterClass::socially_relevant: return "socially_relevant";
    case AlterClass::other: return "other";
    case AlterClass::unknown: return "unknown";
  }
  return "?";
}

std::optional<AlterClass> parse_alter_class(std::string_view text) {
  if (text == "socially_relevant") return AlterClass::socially_relevant;
  if (text == "other") return AlterClass::other;
  if (text == "unknown") return AlterClass::unknown;
  return std::nullopt;
}

std::uint64_t WindowCounts::at(int k) const {
  switch (k) {
    case 0: return 0;
    case 1: return n1;
    case 2: return n2;
    case 3: return n3;
    case 4: return n4;
  }
  throw Error(ErrorCode::range, "window index out of range: " + std::to_string(k));
}

double WindowConfig::edge(int k) const {
  switch (k) {
    case 0: return 0.0;
    case 1: return w1;
    case 2: return w2;
    case 3: return w3;
    case 4: return w4;
  }
  throw Error(ErrorCode::range, "window index out of range: " + std::to_string(k));
}

void WindowConfig::check() const {
  const bool finite = std::isfinite(w1) && std::isfinite(w2) && std::isfinite(w3) && std::isfinite(w4);
  if (!finite || !(0.0 < w1 && w1 < w2 && w2 < w3 && w3 < w4)) {
    throw Error(ErrorCode::config, "window edges must satisfy 0 < w1 < w2 < w3 < w4");
  }
}

std::size_t EgoNetwork::active_ties() const {
  return static_cast<std::size_t>(
      std::count_if(ties.begin(), ties.end(), [](const TieRecord& t) { return t.active(); }));
}

std::vector<Violation> validate(const EgoNetwork& net) {
  std::vector<Violation> out;
  auto flag = [&out](std::string field, std::optional<AccountId> alter, std::string message) {
    out.push_back({std::move(field), alter, std::move(message)});
  };

  if (!(std::isfinite(net.ego_lifespan) && net.ego_lifespan > 0.0)) {
    flag("ego_lifespan", std::nullopt, "ego lifespan must be positive");
  }

  double max_frequency = 0.0;
  for (const auto& tie : net.ties) {
    if (std::isfinite(tie.frequency)) max_frequency = std::max(max_frequency, tie.frequency);
  }

  std::unordered_set<AccountId> seen;
  std::unordered_set<AccountId> reported;
  std::uint64_t replies = 0;
  std::uint64_t retweets = 0;
  for (const auto& tie : net.ties) {
    const AccountId alter = tie.alter;
    if (tie.ego != net.ego) flag("ego", alter, "tie belongs to a different ego");
    if (tie.alter == net.ego) flag("alter", alter, "alter equals ego");
    if (!seen.insert(alter).second && reported.insert(alter).second) {
      flag("alter", alter, "duplicated alter");
    }
    if (!(std::isfinite(tie.frequency) && tie.frequency >= 0.0)) {
      flag("frequency", alter, "frequency must be finite and non-negative");
    }
    if (!(std::isfinite(tie.link_lifespan) && tie.link_lifespan > 0.0)) {
      flag("link_lifespan", alter, "link lifespan must be positive");
    }
    if (!(tie.retweet_lifespan >= tie.link_lifespan)) {
      flag("retweet_lifespan", alter, "retweet lifespan must be at least the link lifespan");
    }
    if (tie.normalized_frequency) {
      const double nf = *tie.normalized_frequency;
      const double expected = max_frequency > 0.0 ? tie.frequency / max_frequency : 0.0;
      if (!(nf >= 0.0 && nf <= 1.0) || std::abs(nf - expected) > 1e-12) {
        flag("normalized_frequency", alter, "normalized frequency must equal frequency / max frequency");
      }
    }
    replies += tie.reply_count;
    retweets += tie.retweet_count;
  }
  if (replies != net.total_replies) {
    flag("total_replies", std::nullopt, "total replies differ from the sum over ties");
  }
  if (retweets != net.total_retweets) {
    flag("total_retweets", std::nullopt, "total retweets differ from the sum over ties");
  }
  return out;
}

}  // namespace egonet
