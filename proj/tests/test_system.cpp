/*
 * Copyright (c) 2026, The regcons Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
*/

#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace regcons {
namespace {

using testing::k0;
using testing::k1;
using testing::kB;
using testing::P;

constexpr RegisterModel kModels[] = {RegisterModel::kAtomic, RegisterModel::kRegular, RegisterModel::kLinearizable};

TEST(System, EnabledChoicesSorted) {
  SystemState st(testing::config(3));
  const auto cs = st.enabled_choices();
  EXPECT_TRUE(std::is_sorted(cs.begin(), cs.end()));
  ASSERT_EQ(cs.size(), 3u);
  for (std::uint32_t i = 0; i < 3; ++i) EXPECT_EQ(cs[i], ScheduleChoice::invoke(P(i)));
}

TEST(System, AtomicEmitsInvokeRespondPairs) {
  SystemState st(testing::config(2, {}, RegisterModel::kAtomic));
  auto ev = st.apply(ScheduleChoice::invoke(P(0)));
  ASSERT_EQ(ev.size(), 2u);
  EXPECT_EQ(ev[0].kind, EventKind::kInvokeWrite);
  EXPECT_EQ(ev[1].kind, EventKind::kRespondWrite);
  EXPECT_EQ(ev[1].seq, ev[0].seq + 1);
  ev = st.apply(ScheduleChoice::invoke_read(P(0), P(1)));
  ASSERT_EQ(ev.size(), 2u);
  EXPECT_EQ(ev[1].kind, EventKind::kRespondRead);
  EXPECT_EQ(ev[1].value, RegisterValue::initial());
}

TEST(System, DisabledChoiceIsAdversaryFault) {
  SystemState st(testing::config(2));
  try {
    st.apply(ScheduleChoice::respond(P(0), {k0, 1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kAdversaryFault);
  }
  EXPECT_THROW(st.apply(ScheduleChoice::crash(P(0))), Error);  // budget 0
  EXPECT_THROW(st.apply(ScheduleChoice::local(P(1))), Error);
  EXPECT_THROW(st.apply(ScheduleChoice::invoke(P(5))), Error);
}

TEST(System, IllegalReadValue) {
  SystemState st(testing::config(2));
  st.apply(ScheduleChoice::invoke(P(0)));
  st.apply(ScheduleChoice::respond(P(0), {k0, 1}));
  st.apply(ScheduleChoice::invoke_read(P(0), P(1)));
  EXPECT_EQ(st.read_options(P(0)), (std::vector<RegisterValue>{RegisterValue::initial()}));
  try {
    st.apply(ScheduleChoice::respond(P(0), {k1, 1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIllegalChoice);
  }
}

TEST(System, CrashOnHaltedProcessIsNoOp) {
  SystemConfig c = testing::config(1);
  c.crash_budget = 1;
  SystemState st(c);
  while (!st.finished()) {
    auto cs = st.enabled_choices();
    std::erase_if(cs, [](const ScheduleChoice& x) { return x.kind == ChoiceKind::kCrash; });
    st.apply(cs.front());
  }
  EXPECT_TRUE(st.apply(ScheduleChoice::crash(P(0))).empty());
  EXPECT_EQ(st.crashes(), 0u);
}

TEST(System, SingleProcessDecidesItsProposalInRoundOne) {
  for (auto m : kModels) {
    const Trace t = testing::drive(testing::config(1, {k1}, m), [](const SystemState& st) {
      return st.enabled_choices().front();
    });
    ASSERT_FALSE(t.events.empty());
    EXPECT_EQ(t.events.back().kind, EventKind::kDecide);
    EXPECT_EQ(t.events.back().value, (RegisterValue{k1, 1}));
  }
}

TEST(System, OwnRegisterReadIsExact) {
  // A process reading its own register sees exactly its last write even on
  // regular registers: it never overlaps its own write.
  SystemState st(testing::config(2));
  st.apply(ScheduleChoice::invoke(P(0)));
  st.apply(ScheduleChoice::respond(P(0), {k0, 1}));
  st.apply(ScheduleChoice::invoke_read(P(0), P(0)));
  EXPECT_EQ(st.read_options(P(0)), (std::vector<RegisterValue>{{k0, 1}}));
}

TEST(System, LazyResponseOnlyForLinearizable) {
  SystemState st(testing::config(2));
  st.apply(ScheduleChoice::invoke(P(0)));
  EXPECT_THROW(st.apply(ScheduleChoice::respond(P(0), {k0, 1}, true)), Error);
  SystemState lin(testing::config(2, {}, RegisterModel::kLinearizable));
  lin.apply(ScheduleChoice::invoke(P(0)));
  lin.apply(ScheduleChoice::respond(P(0), {k0, 1}, true));
  EXPECT_EQ(lin.linearization().responded_uncommitted(), 1u);
  const auto cs = lin.enabled_choices(ChoiceMode::kLazy);
  EXPECT_TRUE(std::any_of(cs.begin(), cs.end(), [](const ScheduleChoice& c) { return c.kind == ChoiceKind::kCommit; }));
}

// Random schedules under every model produce well-formed, regular traces in
// which every choice offered was actually enabled.
TEST(System, RandomSchedulesAreWellFormedAndRegular) {
  for (auto m : kModels) {
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
      SystemConfig c = testing::config(3, {}, m);
      c.crash_budget = 1;
      std::mt19937_64 rng(seed);
      const auto mode = m == RegisterModel::kLinearizable ? ChoiceMode::kLazy : ChoiceMode::kEager;
      const Trace t = testing::drive(
          c,
          [&](const SystemState& st) {
            const auto cs = st.enabled_choices(mode);
            const auto& pick = cs[rng() % cs.size()];
            EXPECT_FALSE(st.why_disabled(pick).has_value());
            return pick;
          },
          seed, 3000);
      ASSERT_FALSE(check_well_formed(t).violated()) << to_string(m) << " seed " << seed;
      ASSERT_FALSE(check_regular_all(t).violated()) << to_string(m) << " seed " << seed;
      for (std::size_t i = 0; i < t.events.size(); ++i) ASSERT_EQ(t.events[i].seq, i);
    }
  }
}

TEST(System, CopiesAreIndependent) {
  SystemState a(testing::config(2));
  a.apply(ScheduleChoice::invoke(P(0)));
  SystemState b = a;
  b.apply(ScheduleChoice::respond(P(0), {k0, 1}));
  EXPECT_EQ(a.process(P(0)).phase, Phase::kAwaitWrite);
  EXPECT_EQ(b.process(P(0)).phase, Phase::kRead);
  EXPECT_EQ(a.next_seq(), 1u);
}

TEST(System, FlipNeedsBinaryCoin) {
  // Both propose differently, pause, then both flip.
  SystemState st(testing::config(2, {k0, k1}, RegisterModel::kAtomic));
  st.apply(ScheduleChoice::invoke(P(0)));
  st.apply(ScheduleChoice::invoke(P(1)));
  for (int i = 0; i < 2; ++i) {
    for (std::uint32_t p = 0; p < 2; ++p) st.apply(ScheduleChoice::invoke_read(P(p), P(static_cast<std::uint32_t>(i))));
  }
  EXPECT_EQ(st.next_write(P(0)), (RegisterValue{kB, 1}));
  st.apply(ScheduleChoice::invoke(P(0)));
  st.apply(ScheduleChoice::invoke(P(1)));
  for (int i = 0; i < 2; ++i) {
    for (std::uint32_t p = 0; p < 2; ++p) st.apply(ScheduleChoice::invoke_read(P(p), P(static_cast<std::uint32_t>(i))));
  }
  ASSERT_EQ(st.process(P(0)).phase, Phase::kFlip);
  EXPECT_THROW(st.apply(ScheduleChoice::local(P(0))), Error);
  const auto ev = st.apply(ScheduleChoice::local(P(0)), k1);
  ASSERT_EQ(ev.size(), 1u);
  EXPECT_EQ(ev[0].kind, EventKind::kFlip);
  EXPECT_EQ(ev[0].value, (RegisterValue{k1, 2}));
  EXPECT_EQ(st.coins_drawn(), 1u);
}

}  // namespace
}  // namespace regcons
