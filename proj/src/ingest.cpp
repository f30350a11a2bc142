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

#include "egonet/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <string>

#include "egonet/csv.hpp"
#include "egonet/error.hpp"

namespace egonet::ingest {

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open '" + path.string() + "'");
  return in;
}

void expect_fields(const std::vector<std::string_view>& fields, std::size_t n, std::size_t line) {
  if (fields.size() != n) {
    throw Error(ErrorCode::parse,
                "expected " + std::to_string(n) + " fields, got " + std::to_string(fields.size()), line);
  }
}

AccountId parse_id(std::string_view text, std::size_t line, std::string_view column) {
  return AccountId{csv::parse_u64(text, line, column)};
}

}  // namespace

WindowGraph parse_window_graph(std::istream& in, const WindowConfig& cfg, const SocialGraph* social) {
  cfg.check();
  csv::Reader reader(in);
  reader.expect_header({{"ego", "alter", "n1", "n2", "n3", "n4"}});
  WindowGraph graph;
  std::unordered_set<LinkKey, LinkKeyHash> seen;
  std::vector<std::string_view> f;
  while (reader.next(f)) {
    const std::size_t line = reader.line();
    expect_fields(f, 6, line);
    LinkCounts link;
    link.ego = parse_id(f[0], line, "ego");
    link.alter = parse_id(f[1], line, "alter");
    link.counts = {csv::parse_u64(f[2], line, "n1"), csv::parse_u64(f[3], line, "n2"),
                   csv::parse_u64(f[4], line, "n3"), csv::parse_u64(f[5], line, "n4")};
    ++graph.rows;
    if (link.ego == link.alter) throw Error(ErrorCode::validation, "self link", line);
    if (!link.counts.nested()) {
      throw Error(ErrorCode::validation, "counts must satisfy n1 <= n2 <= n3 <= n4", line);
    }
    const LinkKey key = LinkKey::of(link.ego, link.alter);
    if (!seen.insert(key).second) throw Error(ErrorCode::validation, "duplicate link", line);
    if (social && !social->count(key)) {
      ++graph.discarded;
      continue;
    }
    graph.links.push_back(link);
  }
  return graph;
}

WindowGraph parse_window_graph(const std::filesystem::path& path, const WindowConfig& cfg,
                               const SocialGraph* social) {
  auto in = open_input(path);
  return parse_window_graph(in, cfg, social);
}

void write_window_graph(std::ostream& out, std::span<const LinkCounts> links) {
  csv::Writer w(out, {"ego", "alter", "n1", "n2", "n3", "n4"});
  for (const auto& l : links) {
    w.cell(l.ego.value).cell(l.alter.value).cell(l.counts.n1).cell(l.counts.n2).cell(l.counts.n3).cell(
        l.counts.n4);
    w.end_row();
  }
}

SocialGraph parse_social_graph(std::istream& in) {
  csv::Reader reader(in);
  reader.expect_header({{"ego", "alter"}});
  SocialGraph graph;
  std::vector<std::string_view> f;
  while (reader.next(f)) {
    const std::size_t line = reader.line();
    expect_fields(f, 2, line);
    graph.insert(LinkKey::of(parse_id(f[0], line, "ego"), parse_id(f[1], line, "alter")));
  }
  return graph;
}

SocialGraph parse_social_graph(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_social_graph(in);
}

void write_social_graph(std::ostream& out, std::span<const LinkCounts> links) {
  csv::Writer w(out, {"ego", "alter"});
  for (const auto& l : links) {
    w.cell(l.ego.value).cell(l.alter.value);
    w.end_row();
  }
}

std::vector<InteractionEvent> parse_event_log(std::istream& in) {
  csv::Reader reader(in);
  const std::size_t layout =
      reader.expect_header({{"source", "target", "kind", "months_before_download"},
                            {"source", "target", "kind", "months_before_download", "original_author"}});
  const std::size_t columns = layout == 0 ? 4 : 5;
  std::vector<InteractionEvent> events;
  std::vector<std::string_view> f;
  while (reader.next(f)) {
    const std::size_t line = reader.line();
    // A 4-column header still accepts the optional fifth field.
    if (f.size() != columns && !(columns == 4 && f.size() == 5)) expect_fields(f, columns, line);
    InteractionEvent e;
    e.source = parse_id(f[0], line, "source");
    const auto kind = parse_interaction_kind(f[2]);
    if (!kind) throw Error(ErrorCode::parse, "unknown interaction kind '" + std::string(f[2]) + "'", line);
    e.kind = *kind;
    if (!f[1].empty()) {
      e.target = parse_id(f[1], line, "target");
    } else if (e.kind != InteractionKind::post) {
      throw Error(ErrorCode::validation, "only posts may omit the target", line);
    }
    e.months_before_download = csv::parse_double(f[3], line, "months_before_download");
    if (e.months_before_download < 0.0) {
      throw Error(ErrorCode::validation, "negative timestamp", line);
    }
    if (f.size() == 5 && !f[4].empty()) {
      e.original_author = parse_id(f[4], line, "original_author");
    }
    if (e.target && *e.target == e.source) {
      throw Error(ErrorCode::validation, "source equals target", line);
    }
    if (e.kind == InteractionKind::retweet && !e.original_author) {
      throw Error(ErrorCode::validation, "retweet without original_author", line);
    }
    if (e.kind != InteractionKind::retweet && e.original_author) {
      throw Error(ErrorCode::validation, "original_author is only valid for retweets", line);
    }
    events.push_back(e);
  }
  return events;
}

std::vector<InteractionEvent> parse_event_log(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_event_log(in);
}

void write_event_log(std::ostream& out, std::span<const InteractionEvent> events) {
  csv::Writer w(out, {"source", "target", "kind", "months_before_download", "original_author"});
  for (const auto& e : events) {
    w.cell(e.source.value);
    if (e.target) {
      w.cell(e.target->value);
    } else {
      w.empty();
    }
    w.cell(to_string(e.kind)).cell(e.months_before_download);
    if (e.original_author) {
      w.cell(e.original_author->value);
    } else {
      w.empty();
    }
    w.end_row();
  }
}

AccountTable parse_accounts(std::istream& in) {
  csv::Reader reader(in);
  reader.expect_header({{"id", "created_months_before_download", "tweets", "following", "followers",
                         "reply_ratio", "mention_ratio"}});
  AccountTable table;
  std::vector<std::string_view> f;
  while (reader.next(f)) {
    const std::size_t line = reader.line();
    expect_fields(f, 7, line);
    AccountStats s;
    s.id = parse_id(f[0], line, "id");
    if (!f[1].empty()) {
      s.created_months_before_download = csv::parse_double(f[1], line, "created_months_before_download");
      if (*s.created_months_before_download <= 0.0) {
        throw Error(ErrorCode::validation, "account creation must precede the download", line);
      }
    }
    s.tweets = csv::parse_u64(f[2], line, "tweets");
    s.following = csv::parse_u64(f[3], line, "following");
    s.followers = csv::parse_u64(f[4], line, "followers");
    s.reply_ratio = csv::parse_double(f[5], line, "reply_ratio");
    s.mention_ratio = csv::parse_double(f[6], line, "mention_ratio");
    if (s.reply_ratio < 0.0 || s.reply_ratio > 1.0 || s.mention_ratio < 0.0 || s.mention_ratio > 1.0) {
      throw Error(ErrorCode::validation, "ratios must lie in [0, 1]", line);
    }
    if (!table.emplace(s.id, s).second) throw Error(ErrorCode::validation, "duplicate account", line);
  }
  return table;
}

AccountTable parse_accounts(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_accounts(in);
}

void write_accounts(std::ostream& out, std::span<const AccountStats> accounts) {
  csv::Writer w(out, {"id", "created_months_before_download", "tweets", "following", "followers",
                      "reply_ratio", "mention_ratio"});
  for (const auto& a : accounts) {
    w.cell(a.id.value).cell(a.created_months_before_download);
    w.cell(a.tweets).cell(a.following).cell(a.followers).cell(a.reply_ratio).cell(a.mention_ratio);
    w.end_row();
  }
}

bool is_eligible(const EgoNetwork& net, const EgoEligibilityRule& rule) {
  if (!(net.ego_lifespan >= rule.min_account_age) || !(net.ego_lifespan > 0.0)) return false;
  const double monthly = static_cast<double>(net.total_interactions) / net.ego_lifespan;
  return monthly >= rule.min_monthly_interactions;
}

std::vector<EgoNetwork> select_eligible_egos(std::vector<EgoNetwork> nets, const EgoEligibilityRule& rule) {
  std::erase_if(nets, [&](const EgoNetwork& n) { return !is_eligible(n, rule); });
  return nets;
}

AlterClass classify_alter(const AccountStats* stats, const AlterClassRule& rule) {
  if (!stats) return AlterClass::unknown;
  if (stats->tweets < rule.min_tweets) return AlterClass::unknown;
  const double follower_ratio =
      static_cast<double>(stats->followers) / static_cast<double>(std::max<std::uint64_t>(1, stats->following));
  const bool broadcaster =
      stats->reply_ratio < rule.other_reply_ratio_below && follower_ratio > rule.other_follower_ratio_above;
  const bool no_mentions = stats->mention_ratio < rule.other_mention_ratio_below;
  return broadcaster || no_mentions ? AlterClass::other : AlterClass::socially_relevant;
}

std::vector<EgoNetwork> assemble_window_networks(std::span<const LinkCounts> links, const WindowConfig& cfg,
                                                 const tie::CalibrationConstants& cal) {
  cfg.check();
  std::unordered_map<AccountId, EgoNetwork> by_ego;
  auto add = [&](AccountId ego, AccountId alter, const WindowCounts& c, const tie::WindowEstimate* est) {
    auto& net = by_ego[ego];
    net.ego = ego;
    TieRecord t;
    t.ego = ego;
    t.alter = alter;
    if (est) {
      t.frequency = est->frequency.scaled;
      t.link_lifespan = est->duration;
      net.ego_lifespan = std::max(net.ego_lifespan, est->duration);
    } else {
      t.link_lifespan = cfg.w4;
    }
    t.retweet_lifespan = t.link_lifespan;
    net.total_interactions += c.n4;
    net.ties.push_back(t);
  };
  for (const auto& l : links) {
    std::optional<tie::WindowEstimate> est;
    if (l.counts.n4 > 0) est = tie::estimate_link(l.counts, cfg, cal);
    add(l.ego, l.alter, l.counts, est ? &*est : nullptr);
    add(l.alter, l.ego, l.counts, est ? &*est : nullptr);
  }
  std::vector<EgoNetwork> nets;
  nets.reserve(by_ego.size());
  for (auto& [id, net] : by_ego) {
    if (net.ego_lifespan <= 0.0) net.ego_lifespan = cfg.w4;
    std::sort(net.ties.begin(), net.ties.end(),
              [](const TieRecord& a, const TieRecord& b) { return a.alter < b.alter; });
    nets.push_back(std::move(net));
  }
  std::sort(nets.begin(), nets.end(), [](const EgoNetwork& a, const EgoNetwork& b) { return a.ego < b.ego; });
  return nets;
}

namespace {

struct PairState {
  double first_contact = -1.0;  // months; < 0 while no mention/reply seen
  double first_retweet = -1.0;
  std::uint64_t replies = 0;
  std::uint64_t retweets = 0;
};

struct EgoState {
  std::unordered_map<AccountId, PairState> pairs;
  double oldest_event = 0.0;
  std::uint64_t interactions = 0;
  std::uint64_t tweets = 0;
  std::uint64_t retweets_made = 0;
  std::uint64_t retweets_received = 0;
};

bool is_tweet(InteractionKind k) {
  return k == InteractionKind::post || k == InteractionKind::reply || k == InteractionKind::mention;
}

}  // namespace

EventAssembly assemble_event_networks(std::span<const InteractionEvent> events, const AccountTable* accounts,
                                      const EventAssemblyOptions& options) {
  EventAssembly result;
  auto created = [&](AccountId id) -> std::optional<double> {
    if (!accounts) return std::nullopt;
    const auto it = accounts->find(id);
    if (it == accounts->end()) return std::nullopt;
    return it->second.created_months_before_download;
  };
  auto predates = [&](std::optional<AccountId> id, double t) {
    if (!id) return false;
    const auto c = created(*id);
    return c && t > *c;
  };

  std::unordered_map<AccountId, EgoState> egos;
  for (const auto& e : events) {
    if (accounts && !accounts->count(e.source)) continue;
    egos.try_emplace(e.source);
  }

  for (const auto& e : events) {
    const double t = e.months_before_download;
    if (predates(e.source, t) || predates(e.target, t)) {
      ++result.events_before_account_creation;
      continue;
    }
    if (auto it = egos.find(e.source); it != egos.end()) {
      EgoState& ego = it->second;
      ego.oldest_event = std::max(ego.oldest_event, t);
      ++ego.interactions;
      if (is_tweet(e.kind)) ++ego.tweets;
      if (e.kind == InteractionKind::reply || e.kind == InteractionKind::mention) {
        PairState& p = ego.pairs[*e.target];
        p.first_contact = std::max(p.first_contact, t);
        if (e.kind == InteractionKind::reply) ++p.replies;
      } else if (e.kind == InteractionKind::retweet) {
        ++ego.retweets_made;
        if (*e.original_author != e.source) {
          PairState& p = ego.pairs[*e.original_author];
          ++p.retweets;
          p.first_retweet = std::max(p.first_retweet, t);
        }
      }
    }
    if (e.target && (e.kind == InteractionKind::reply || e.kind == InteractionKind::mention)) {
      if (auto it = egos.find(*e.target); it != egos.end()) {
        EgoState& ego = it->second;
        ego.oldest_event = std::max(ego.oldest_event, t);
        PairState& p = ego.pairs[e.source];
        p.first_contact = std::max(p.first_contact, t);
      }
    }
    if (e.kind == InteractionKind::retweet) {
      if (auto it = egos.find(*e.original_author); it != egos.end() && *e.original_author != e.source) {
        ++it->second.retweets_received;
      }
    }
  }

  for (auto& [id, state] : egos) {
    const AccountStats* stats = nullptr;
    if (accounts) {
      if (auto it = accounts->find(id); it != accounts->end()) stats = &it->second;
    }
    if (options.drop_other_egos && stats && classify_alter(stats, options.alter_rule) == AlterClass::other) {
      ++result.dropped_other_egos;
      continue;
    }
    EgoNetwork net;
    net.ego = id;
    net.ego_lifespan = stats && stats->created_months_before_download ? *stats->created_months_before_download
                                                                       : state.oldest_event;
    net.total_interactions = state.interactions;
    net.activity.tweets = stats ? stats->tweets : state.tweets;
    net.activity.retweets_made = state.retweets_made;
    net.activity.retweets_received = state.retweets_received;
    for (const auto& [alter, p] : state.pairs) {
      if (p.first_contact < 0.0) continue;
      if (!(p.first_contact > 0.0)) {
        ++result.zero_lifespan_links;
        continue;
      }
      TieRecord t;
      t.ego = id;
      t.alter = alter;
      t.link_lifespan = p.first_contact;
      t.reply_count = p.replies;
      t.retweet_count = p.retweets;
      t.frequency = static_cast<double>(p.replies) / p.first_contact;
      t.retweet_lifespan = std::max(p.first_contact, p.first_retweet);
      if (accounts) {
        const auto it = accounts->find(alter);
        t.alter_class = classify_alter(it == accounts->end() ? nullptr : &it->second, options.alter_rule);
      }
      net.total_replies += t.reply_count;
      net.total_retweets += t.retweet_count;
      net.ties.push_back(t);
    }
    std::sort(net.ties.begin(), net.ties.end(),
              [](const TieRecord& a, const TieRecord& b) { return a.alter < b.alter; });
    result.nets.push_back(std::move(net));
  }
  std::sort(result.nets.begin(), result.nets.end(),
            [](const EgoNetwork& a, const EgoNetwork& b) { return a.ego < b.ego; });
  return result;
}

}  // namespace egonet::ingest
