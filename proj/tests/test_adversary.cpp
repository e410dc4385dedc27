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

#include <set>

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace regcons {
namespace {

using testing::k0;
using testing::k1;
using testing::kB;
using testing::P;

TEST(Rng, BelowStaysInRangeAndIsDeterministic) {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.below(7);
    ASSERT_LT(x, 7u);
    ASSERT_EQ(x, b.below(7));
  }
  EXPECT_NE(mix_seed(1, kAdversaryStream), mix_seed(1, kCoinStream));
}

TEST(RoundRobin, FiresNextProcessAfterLast) {
  SystemState st(testing::config(3));
  RoundRobinAdversary rr;
  std::vector<TraceEvent> trace;
  const AdversaryContext ctx(st, trace);
  EXPECT_EQ(rr.choose(ctx).pid, P(0));
  rr.set_last_fired(0);
  EXPECT_EQ(rr.choose(ctx).pid, P(1));
  rr.set_last_fired(2);
  EXPECT_EQ(rr.choose(ctx).pid, P(0));
}

TEST(RoundRobin, SkipsHaltedProcesses) {
  SystemConfig c = testing::config(3);
  c.crash_budget = 1;
  SystemState st(c);
  st.apply(ScheduleChoice::crash(P(1)));
  std::vector<TraceEvent> trace;
  RoundRobinAdversary rr;
  rr.set_last_fired(0);
  EXPECT_EQ(rr.choose(AdversaryContext(st, trace)).pid, P(2));
}

TEST(Adversaries, SameSeedSameTrace) {
  for (auto name : kAdversaryNames) {
    if (name == "appendix_attack") continue;
    for (auto m : {RegisterModel::kRegular, RegisterModel::kLinearizable}) {
      SystemConfig c = testing::config(3, {}, m, std::string(name));
      c.seed = 12;
      c.crash_budget = 1;
      EXPECT_EQ(run_once(c), run_once(c)) << name;
    }
  }
}

TEST(Adversaries, UnknownNameIsConfigError) {
  try {
    make_adversary("oracle", 0, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig);
  }
}

TEST(StaleRead, ReturnsOldestLegalValue) {
  SystemState st(testing::config(2));
  st.apply(ScheduleChoice::invoke(P(0)));
  st.apply(ScheduleChoice::respond(P(0), {k0, 1}));
  st.apply(ScheduleChoice::invoke(P(1)));
  st.apply(ScheduleChoice::invoke_read(P(0), P(1)));
  ASSERT_EQ(st.read_options(P(0)), (std::vector<RegisterValue>{{kB, 0}, {k1, 1}}));
  std::vector<TraceEvent> trace;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    StaleReadAdversary adv(seed, 0);
    const auto c = adv.choose(AdversaryContext(st, trace));
    if (c.kind == ChoiceKind::kFireRespond && c.pid == P(0)) {
      EXPECT_EQ(c.value, RegisterValue::initial());
    }
  }
}

TEST(DisagreementMaximizer, PrefersBotThenOppositeThenRound) {
  using DM = DisagreementMaximizer;
  EXPECT_EQ(DM::pick_read({k1, 2}, {{k1, 2}, {kB, 2}}), (RegisterValue{kB, 2}));
  EXPECT_EQ(DM::pick_read({k1, 2}, {{k1, 3}, {k0, 1}}), (RegisterValue{k0, 1}));
  EXPECT_EQ(DM::pick_read({k1, 2}, {{k1, 1}, {k1, 3}}), (RegisterValue{k1, 3}));
}

TEST(Crashes, ZeroBudgetNeverCrashes) {
  for (auto name : {"uniform_random", "stale_read", "disagreement_maximizer", "round_robin"}) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      SystemConfig c = testing::config(3, {}, RegisterModel::kRegular, name);
      c.seed = seed;
      EXPECT_EQ(testing::count_kind(run_once(c), EventKind::kCrash), 0u);
    }
  }
}

TEST(Crashes, SurvivorsStillDecide) {
  // n-1 crashes allowed; every process that did not crash must decide.
  std::uint64_t crashed_runs = 0;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    SystemConfig c = testing::config(3, {}, RegisterModel::kRegular, "uniform_random");
    c.seed = seed;
    c.crash_budget = 2;
    const Trace t = run_once(c);
    ASSERT_TRUE(trace_complete(t)) << seed;
    const auto crashed = crashed_processes(t);
    crashed_runs += std::count(crashed.begin(), crashed.end(), true) > 0;
    std::vector<bool> decided(3, false);
    for (const auto& e : t.events) {
      if (e.kind == EventKind::kDecide) decided[e.pid.value] = true;
    }
    for (std::uint32_t p = 0; p < 3; ++p) ASSERT_TRUE(decided[p] || crashed[p]) << seed;
    ASSERT_LE(testing::count_kind(t, EventKind::kCrash), 2u);
  }
  EXPECT_GT(crashed_runs, 0u);
}

TEST(Context, HiddenCoinIsRejected) {
  SystemState two(testing::config(2, {k0, k1}, RegisterModel::kAtomic));
  two.apply(ScheduleChoice::invoke(P(0)));
  two.apply(ScheduleChoice::invoke(P(1)));
  for (int round = 0; round < 2; ++round) {
    for (std::uint32_t r = 0; r < 2; ++r) {
      for (std::uint32_t p = 0; p < 2; ++p) two.apply(ScheduleChoice::invoke_read(P(p), P(r)));
    }
    if (round == 0) {
      two.apply(ScheduleChoice::invoke(P(0)));
      two.apply(ScheduleChoice::invoke(P(1)));
    }
  }
  ASSERT_EQ(two.process(P(0)).phase, Phase::kFlip);
  // Before the flip fires the state holds no coin value at all.
  EXPECT_EQ(two.process(P(0)).outgoing.prefer, kB);
  two.apply(ScheduleChoice::local(P(0)), k1);
  std::vector<TraceEvent> empty;
  EXPECT_THROW(AdversaryContext(two, empty), Error);
}

/// Adversary probe: records what it could see of coins at every step.
class CoinProbe : public Adversary {
 public:
  std::string_view name() const override { return "probe"; }
  ScheduleChoice choose(const AdversaryContext& ctx) override {
    std::uint32_t flips = 0;
    for (const auto& e : ctx.trace()) flips += e.kind == EventKind::kFlip;
    EXPECT_EQ(flips, ctx.state().coins_drawn());
    for (const auto& p : ctx.state().processes()) {
      if (p.phase == Phase::kFlip) {
        EXPECT_EQ(p.outgoing.prefer, kB);
        ++pending_flips;
      }
    }
    return inner.choose(ctx);
  }
  UniformRandomAdversary inner{3, 0};
  int pending_flips = 0;
};

TEST(Context, CoinsAreDrawnOnlyWhenFlipFires) {
  int seen = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    SystemConfig c = testing::config(3);
    auto probe = std::make_unique<CoinProbe>();
    probe->inner = UniformRandomAdversary(seed, 0);
    auto* raw = probe.get();
    Simulation sim(c, std::move(probe), std::make_unique<FairCoin>(seed));
    sim.run();
    seen += raw->pending_flips;
  }
  EXPECT_GT(seen, 0);
}

TEST(Attack, BothCoinBranchesReorderTheFirstWrite) {
  std::set<Prefer> coins;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    SystemConfig c = testing::config(2, {}, RegisterModel::kLinearizable, "appendix_attack");
    c.seed = seed;
    const AttackOutcome o = run_attack(c);
    coins.insert(o.coin);
    ASSERT_TRUE(o.first_linearized);
    EXPECT_NE(o.first_linearized->prefer, o.coin) << seed;
    ASSERT_TRUE(o.first_completed && o.flip);
    EXPECT_LT(*o.first_completed, *o.flip);
    EXPECT_TRUE(trace_complete(o.trace));
    EXPECT_FALSE(any_violation(run_all_monitors(o.trace)));
  }
  EXPECT_EQ(coins, (std::set<Prefer>{k0, k1}));
}

TEST(Attack, PreconditionsAreScenarioBroken) {
  auto broken = [](SystemConfig c) {
    try {
      run_attack(c);
    } catch (const Error& e) {
      return e.code() == ErrorCode::kScenarioBroken;
    }
    return false;
  };
  EXPECT_TRUE(broken(testing::config(2, {k1, k1}, RegisterModel::kLinearizable)));
  EXPECT_TRUE(broken(testing::config(2, {}, RegisterModel::kAtomic)));
  EXPECT_TRUE(broken(testing::config(1, {k0}, RegisterModel::kLinearizable)));
}

TEST(Attack, RegularModelRunsWithoutReordering) {
  SystemConfig c = testing::config(2, {}, RegisterModel::kRegular, "appendix_attack");
  const Trace t = run_once(c);
  EXPECT_TRUE(trace_complete(t));
  EXPECT_FALSE(any_violation(run_all_monitors(t)));
}

}  // namespace
}  // namespace regcons
