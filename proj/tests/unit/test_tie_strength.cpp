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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "egonet/error.hpp"
#include "egonet/tie_strength.hpp"
#include "test_util.hpp"

namespace egonet::tie {
namespace {

using RC = RelationshipClass;

const WindowConfig kCfg;

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::range;
}

KeyValueFile kv(const std::string& text) {
  std::istringstream in(text);
  return KeyValueFile::parse(in);
}

InteractionEvent ev(std::uint64_t src, std::uint64_t dst, InteractionKind kind, double t) {
  InteractionEvent e;
  e.source = AccountId{src};
  e.target = AccountId{dst};
  e.kind = kind;
  e.months_before_download = t;
  return e;
}

TEST(Classify, Examples) {
  EXPECT_EQ(classify_relationship({7, 7, 7, 7}), RC::c1);
  EXPECT_EQ(classify_relationship({3, 8, 8, 8}), RC::c2);
  EXPECT_EQ(classify_relationship({2, 5, 9, 9}), RC::c3);
  EXPECT_EQ(classify_relationship({0, 0, 0, 5}), RC::c4);
  EXPECT_EQ(code_of([] { classify_relationship({0, 0, 0, 0}); }), ErrorCode::inactive_link);
  EXPECT_EQ(code_of([] { classify_relationship({3, 2, 5, 6}); }), ErrorCode::validation);
}

TEST(Classify, ConditionsMatchDefinitionOnRandomCounts) {
  testing::Gen gen(3);
  for (int i = 0; i < 2000; ++i) {
    const std::uint64_t n1 = gen.index(0, 3), n2 = n1 + gen.index(0, 2), n3 = n2 + gen.index(0, 2),
                        n4 = std::max<std::uint64_t>(1, n3 + gen.index(0, 2));
    const WindowCounts c{n1, n2, n3, n4};
    RC expected;
    if (n1 == n2 && n2 == n3 && n3 == n4) {
      expected = RC::c1;
    } else if (n1 < n2 && n2 == n3 && n3 == n4) {
      expected = RC::c2;
    } else if (n2 < n3 && n3 == n4) {
      expected = RC::c3;
    } else {
      expected = RC::c4;
    }
    EXPECT_EQ(classify_relationship(c), expected);
  }
}

TEST(InteractionRatio, Examples) {
  EXPECT_EQ(interaction_ratio({1, 3, 9, 9}, RC::c3), 2.0);
  EXPECT_EQ(interaction_ratio({4, 4, 4, 4}, RC::c1), 1.0);
  EXPECT_NEAR(interaction_ratio({0, 3, 3, 3}, RC::c2), 9.0, 1e-12);
}

TEST(Duration, Examples) {
  EXPECT_EQ(estimate_duration(2.0, RC::c3, kCfg, 2.0), 9.0);
  EXPECT_EQ(estimate_duration(std::numeric_limits<double>::infinity(), RC::c3, kCfg, 2.0), 12.0);
  EXPECT_NEAR(estimate_duration(1e12, RC::c3, kCfg, 2.0), 12.0, 1e-9);
  EXPECT_EQ(estimate_duration(0.0, RC::c2, kCfg, 1.0), 1.0);
  EXPECT_EQ(code_of([] { estimate_duration(-1.0, RC::c2, kCfg, 1.0); }), ErrorCode::range);
  EXPECT_EQ(code_of([] { estimate_duration(1.0, RC::c2, kCfg, 0.0); }), ErrorCode::range);
}

TEST(Duration, StaysInsideClassWindow) {
  testing::Gen gen(8);
  for (int i = 0; i < 2000; ++i) {
    const std::uint64_t n1 = gen.index(0, 20), n2 = n1 + gen.index(0, 20), n3 = n2 + gen.index(0, 20),
                        n4 = std::max<std::uint64_t>(1, n3 + gen.index(0, 20));
    const WindowCounts c{n1, n2, n3, n4};
    CalibrationConstants cal;
    for (auto& a : cal.a) a = gen.real(0.01, 50.0);
    const auto est = estimate_link(c, kCfg, cal);
    const int k = index(est.cls);
    EXPECT_GT(est.duration, kCfg.edge(k - 1));
    EXPECT_LT(est.duration, kCfg.edge(k));
  }
}

TEST(Calibrate, ClosedFormExample) {
  const std::vector<double> sample = {1.0};
  EXPECT_NEAR(calibrate_a(sample, RC::c2, kCfg, 3.5), 1.0, 1e-9);
  EXPECT_EQ(code_of([&] { calibrate_a(sample, RC::c2, kCfg, 6.0); }), ErrorCode::range);
  EXPECT_EQ(code_of([&] { calibrate_a(sample, RC::c2, kCfg, 1.0); }), ErrorCode::range);
  EXPECT_EQ(code_of([&] { calibrate_a(std::vector<double>{}, RC::c2, kCfg, 3.5); }),
            ErrorCode::insufficient_data);
}

TEST(Calibrate, RoundTripHitsTarget) {
  testing::Gen gen(21);
  for (int trial = 0; trial < 300; ++trial) {
    const auto sample = gen.values(gen.index(1, 40), 0.05, 30.0);
    const RC k = class_from_index(static_cast<int>(gen.index(2, 4)));
    const double lo = kCfg.edge(index(k) - 1), hi = kCfg.edge(index(k));
    // Reachable targets lie below the mean share obtained as a -> 0, which is 1 here.
    const double target = lo + (hi - lo) * gen.real(0.02, 0.98);
    const double a = calibrate_a(sample, k, kCfg, target);
    ASSERT_GT(a, 0.0);
    double mean = 0.0;
    for (double h : sample) mean += estimate_duration(h, k, kCfg, a);
    mean /= static_cast<double>(sample.size());
    EXPECT_NEAR(mean, target, 1e-9);
  }
}

TEST(Calibrate, LargerAGivesShorterMeanDuration) {
  testing::Gen gen(4);
  for (int trial = 0; trial < 200; ++trial) {
    const double h = gen.real(0.01, 100.0), a = gen.real(0.01, 100.0);
    EXPECT_LT(estimate_duration(h, RC::c4, kCfg, 2.0 * a), estimate_duration(h, RC::c4, kCfg, a));
  }
}

TEST(Frequency, Examples) {
  const CalibrationConstants cal;
  const auto c2 = contact_frequency({3, 8, 8, 8}, 4.0, RC::c2, cal);
  EXPECT_EQ(c2.raw, 2.0);
  EXPECT_NEAR(c2.scaled, 1.64, 1e-12);
  EXPECT_EQ(contact_frequency({0, 0, 0, 12}, 24.0, RC::c4, cal).scaled, 0.5);
  EXPECT_EQ(code_of([&] { contact_frequency({0, 0, 0, 12}, 0.0, RC::c4, cal); }), ErrorCode::range);
}

TEST(Frequency, InvariantUnderJointRescaling) {
  testing::Gen gen(13);
  const CalibrationConstants cal;
  for (int trial = 0; trial < 500; ++trial) {
    const std::uint64_t n4 = gen.index(1, 200), c = gen.index(2, 9);
    const double d = gen.real(0.5, 43.0);
    const auto k = class_from_index(static_cast<int>(gen.index(1, 4)));
    const double a = contact_frequency({0, 0, 0, n4}, d, k, cal).scaled;
    const double b = contact_frequency({0, 0, 0, c * n4}, static_cast<double>(c) * d, k, cal).scaled;
    EXPECT_NEAR(a, b, 1e-12 * a);
  }
}

TEST(ReplyFrequency, Examples) {
  std::vector<InteractionEvent> events;
  for (int i = 0; i < 10; ++i) events.push_back(ev(1, 2, InteractionKind::reply, 5.0 - 0.4 * i));
  EXPECT_EQ(reply_frequency(events, AccountId{1}, AccountId{2}).frequency, 2.0);

  events = {ev(1, 2, InteractionKind::mention, 8.0)};
  for (int i = 0; i < 4; ++i) events.push_back(ev(1, 2, InteractionKind::reply, 3.0 - i * 0.5));
  const auto r = reply_frequency(events, AccountId{1}, AccountId{2});
  EXPECT_EQ(r.frequency, 0.5);
  EXPECT_EQ(r.link_lifespan, 8.0);

  events = {ev(2, 1, InteractionKind::mention, 3.0)};
  const auto m = reply_frequency(events, AccountId{1}, AccountId{2});
  EXPECT_EQ(m.frequency, 0.0);
  EXPECT_EQ(m.link_lifespan, 3.0);

  EXPECT_EQ(code_of([&] { reply_frequency(events, AccountId{1}, AccountId{9}); }), ErrorCode::no_link);
}

TEST(Normalize, Examples) {
  const auto n = normalize_ego_frequencies(testing::net_with(1, {2, 4, 8}));
  EXPECT_EQ(*n.ties[0].normalized_frequency, 0.25);
  EXPECT_EQ(*n.ties[1].normalized_frequency, 0.5);
  EXPECT_EQ(*n.ties[2].normalized_frequency, 1.0);
  EXPECT_EQ(*normalize_ego_frequencies(testing::net_with(1, {3})).ties[0].normalized_frequency, 1.0);
  EXPECT_EQ(code_of([] { normalize_ego_frequencies(testing::net_with(1, {0, 0})); }),
            ErrorCode::degenerate_ego);
}

TEST(Normalize, ScaleFree) {
  testing::Gen gen(17);
  for (int trial = 0; trial < 300; ++trial) {
    auto freqs = gen.values(gen.index(1, 30), 0.0, 10.0);
    freqs.push_back(gen.real(0.1, 10.0));
    const double c = std::ldexp(1.0, static_cast<int>(gen.index(0, 12)) - 6);
    auto scaled = freqs;
    for (auto& f : scaled) f *= c;
    const auto a = normalize_ego_frequencies(testing::net_with(1, freqs));
    const auto b = normalize_ego_frequencies(testing::net_with(1, scaled));
    for (std::size_t i = 0; i < freqs.size(); ++i) {
      EXPECT_EQ(*a.ties[i].normalized_frequency, *b.ties[i].normalized_frequency);
    }
  }
}

TEST(CalibrationFile, ParsesAndRejectsUnknownKeys) {
  const auto s = CalibrationSettings::from_file(kv("a2 = 1.5\nm1=0.2\ntarget3=8\n"));
  EXPECT_EQ(s.constants.a[1], 1.5);
  EXPECT_TRUE(s.a_fixed[1]);
  EXPECT_FALSE(s.a_fixed[0]);
  EXPECT_EQ(s.constants.m[0], 0.2);
  EXPECT_EQ(s.targets[2], 8.0);
  EXPECT_EQ(code_of([] { CalibrationSettings::from_file(kv("a5=1\n")); }), ErrorCode::config);
  EXPECT_EQ(code_of([] { CalibrationSettings::from_file(kv("a1=-1\n")); }), ErrorCode::config);
}

TEST(CalibrationPass, FixedConstantsUntouched) {
  std::vector<WindowCounts> counts = {{0, 1, 1, 1}, {0, 2, 2, 2}, {0, 0, 3, 3}, {0, 0, 0, 4}};
  CalibrationSettings s;
  s.constants.a[0] = 7.0;
  s.a_fixed[0] = true;
  s.constants.a[1] = 5.0;
  s.a_fixed[1] = true;
  const auto out = calibrate(counts, kCfg, s);
  EXPECT_EQ(out.a[0], 7.0);
  EXPECT_EQ(out.a[1], 5.0);
  // C3 and C4 samples are recalibrated to the window midpoints.
  const double h3 = 3.0 / 0.3 - 1.0;
  EXPECT_NEAR(estimate_duration(h3, RC::c3, kCfg, out.a[2]), 9.0, 1e-9);
  EXPECT_NEAR(estimate_duration(4.0 / 0.3 - 1.0, RC::c4, kCfg, out.a[3]), 27.5, 1e-9);
}

}  // namespace
}  // namespace egonet::tie
