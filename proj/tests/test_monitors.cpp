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
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>

#include <gtest/gtest.h>

#include "monitor_cases.hpp"
#include "test_util.hpp"

namespace regcons {
namespace {

using testing::k0;
using testing::k1;
using testing::kB;
using testing::P;
using testing::TraceBuilder;

// --- catalog -------------------------------------------------------------------

TEST(MonitorCatalog, EveryMonitorIsCovered) {
  std::set<std::string> covered;
  for (const auto& c : testing::monitor_cases()) covered.insert(c.monitor);
  for (const auto& v : run_all_monitors(TraceBuilder(1).build())) EXPECT_TRUE(covered.contains(v.name)) << v.name;
}

TEST(MonitorCatalog, PassAndViolationWithWitness) {
  for (const auto& c : testing::monitor_cases()) {
    const Verdict ok = testing::verdict_of(c.monitor, c.pass);
    EXPECT_EQ(ok.status, Status::kPass) << c.monitor << ": " << ok.note;
    const Verdict bad = testing::verdict_of(c.monitor, c.violation);
    EXPECT_EQ(bad.status, Status::kViolation) << c.monitor;
    EXPECT_EQ(bad.witness, c.witness) << c.monitor << ": " << bad.note;
  }
}

TEST(Monitors, Pure) {
  for (const auto& c : testing::monitor_cases()) {
    const auto a = run_all_monitors(c.violation), b = run_all_monitors(c.violation);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(a[i].status, b[i].status);
      EXPECT_EQ(a[i].witness, b[i].witness);
    }
  }
}

// --- examples ----------------------------------------------------------------------

TEST(Validity, Examples) {
  EXPECT_EQ(check_validity(TraceBuilder(2, {k1, k1}).decide(0, k1, 1).build()).status, Status::kPass);
  EXPECT_TRUE(check_validity(TraceBuilder(2, {k0, k0}).decide(1, k1, 1).build()).violated());
  const Verdict none = check_validity(TraceBuilder(2).build());
  EXPECT_EQ(none.status, Status::kPass);
  EXPECT_NE(none.note.find("vacuous"), std::string::npos);
}

TEST(Agreement, Examples) {
  EXPECT_EQ(check_agreement(TraceBuilder(2).decide(0, k1, 1).decide(1, k1, 2).build()).status, Status::kPass);
  EXPECT_TRUE(check_agreement(TraceBuilder(2).decide(0, k0, 1).decide(1, k1, 2).build()).violated());
  EXPECT_EQ(check_agreement(TraceBuilder(2).decide(0, k0, 1).build()).status, Status::kPass);
}

TEST(Observation, Examples) {
  auto clause = [](const Trace& t, const std::string& name) {
    return testing::find_verdict(check_observation0(t), name);
  };
  const Trace twice = TraceBuilder(2).w(0, k1, 3).iw(0, k1, 3).build();
  EXPECT_TRUE(clause(twice, "obs1_b").violated());
  const Trace bot = TraceBuilder(2).w(0, k1, 1).iw(0, kB, 2).build();
  EXPECT_TRUE(clause(bot, "obs1_e_invoke").violated());
  EXPECT_TRUE(clause(bot, "obs1_e_complete").violated());
  EXPECT_EQ(check_observation0(TraceBuilder(2).build()).size(), 6u);
}

TEST(Bl1, NoPatternIsVacuous) {
  const Trace t = TraceBuilder(2).w(0, k0, 1).w(0, k0, 2).build();
  EXPECT_EQ(check_lemma_bl1(t).status, Status::kVacuous);
  EXPECT_EQ(check_lemma_bl1_5(t).status, Status::kVacuous);
}

TEST(Bl1, LaterWriteByOtherDoesNotCount) {
  // q's W<1,1> comes after p's switch
  const Trace t = TraceBuilder(2).w(0, k0, 1).w(0, k1, 2).w(1, k1, 1).build();
  EXPECT_TRUE(check_lemma_bl1(t).violated());
}

TEST(Bl2, Examples) {
  EXPECT_TRUE(check_lemma_bl2(TraceBuilder(2).w(0, k1, 1).w(0, k1, 2).w(1, k1, 5).build()).violated());
  EXPECT_EQ(check_lemma_bl2(TraceBuilder(2).build()).status, Status::kPass);
  EXPECT_EQ(check_lemma_bl2_prime(TraceBuilder(2).build()).status, Status::kPass);
  EXPECT_EQ(check_corollary(TraceBuilder(2).build()).status, Status::kPass);
}

TEST(Bl2Prime, BotAtRoundFourNeedsBothValuesBelow) {
  TraceBuilder b(2);
  for (Round r = 1; r <= 4; ++r) b.w(0, k0, r);
  for (Round r = 1; r <= 3; ++r) b.w(1, k1, r);
  b.iw(1, kB, 4);
  EXPECT_TRUE(check_lemma_bl2_prime(b.build()).violated());
  EXPECT_TRUE(check_corollary(b.build()).violated());
  b.rw(1, kB, 4).w(1, k1, 4);  // too late: the bot write is already there
  EXPECT_TRUE(check_lemma_bl2_prime(b.build()).violated());
}

TEST(Bl3_5, Examples) {
  EXPECT_EQ(check_lemma_bl3_5(TraceBuilder(2).w(0, k1, 3).decide(0, k1, 3).build()).status, Status::kPass);
  EXPECT_TRUE(check_lemma_bl3_5(TraceBuilder(2).decide(0, k1, 3).w(1, k0, 3).build()).violated());
  EXPECT_EQ(check_lemma_bl3_5(TraceBuilder(2).w(0, k1, 3).build()).status, Status::kVacuous);
}

TEST(Bl3, TruncatedIsVacuous) {
  const Trace t = TraceBuilder(2, {k1, k1}).w(0, k1, 1).w(1, k1, 1).w(0, k1, 2).build();
  EXPECT_EQ(check_lemma_bl3(t).status, Status::kVacuous);
  EXPECT_EQ(check_lemma_bc1(t).status, Status::kVacuous);
}

TEST(Bl3, CrashedProcessIsExcused) {
  const Trace t = TraceBuilder(2, {k1, k1}).w(0, k1, 1).w(1, k1, 1).w(0, k1, 2).w(1, k1, 2).decide(0, k1, 2).crash(1).build();
  EXPECT_EQ(check_lemma_bl3(t).status, Status::kPass);
}

TEST(Bl3, BothValuesEveryRoundIsVacuous) {
  const Trace t = TraceBuilder(2).w(0, k0, 1).w(1, k1, 1).w(0, k0, 2).w(1, k1, 2).decide(0, k0, 2).decide(1, k1, 2).build();
  EXPECT_EQ(check_lemma_bl3(t).status, Status::kVacuous);
}

TEST(Bl4, DisagreeingFlipsAreVacuous) {
  const Trace t = TraceBuilder(2)
                      .w(0, k0, 1)
                      .w(1, k1, 1)
                      .flip(0, k0, 2)
                      .flip(1, k1, 2)
                      .w(0, k0, 2, LineSite::kCoinWrite)
                      .w(1, k1, 2, LineSite::kCoinWrite)
                      .decide(0, k0, 2)
                      .decide(1, k0, 2)
                      .build();
  EXPECT_EQ(check_lemma_bl4(t, Round{2}).status, Status::kVacuous);
  EXPECT_EQ(check_lemma_bc1(t, Round{2}).status, Status::kVacuous);
  EXPECT_FALSE(antecedent_fired(t, 2));
}

TEST(Bl4, FirstCompletedWriteDecidesTheValue) {
  // W<1,1> is invoked first but W<0,1> completes first
  const Trace t = TraceBuilder(2).iw(1, k1, 1).w(0, k0, 1).rw(1, k1, 1).flip(0, k0, 2).build();
  const auto ants = coin_antecedents(t);
  ASSERT_EQ(ants.size(), 1u);
  EXPECT_EQ(ants[0].round, 2u);
  EXPECT_EQ(ants[0].value, k0);
  EXPECT_EQ(ants[0].first_completed, 2u);
  EXPECT_TRUE(antecedent_fired(t, 2));
}

TEST(Inversion, Examples) {
  const Trace inv = TraceBuilder(2).w(0, k0, 1).iw(0, k1, 2).read(1, 0, k1, 2).read(1, 0, k0, 1).rw(0, k1, 2).build();
  const auto r = check_new_old_inversion(inv, P(0));
  EXPECT_TRUE(r.found);
  EXPECT_EQ(r.witness, (std::vector<Seq>{2, 4, 6}));
  const Trace single = TraceBuilder(2).w(0, k0, 1).iw(0, k1, 2).read(1, 0, k0, 1).rw(0, k1, 2).build();
  EXPECT_FALSE(check_new_old_inversion(single, P(0)).found);
  // old then new is fine
  const Trace forward = TraceBuilder(2).w(0, k0, 1).iw(0, k1, 2).read(1, 0, k0, 1).read(1, 0, k1, 2).build();
  EXPECT_FALSE(check_new_old_inversion_all(forward).found);
}

TEST(Inversion, NeverOnAtomicTraces) {
  for (auto adv : {"uniform_random", "stale_read", "disagreement_maximizer"}) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      SystemConfig c = testing::config(3, {}, RegisterModel::kAtomic, adv);
      c.seed = seed;
      ASSERT_FALSE(check_new_old_inversion_all(run_once(c)).found) << adv << " " << seed;
    }
  }
}

TEST(Monitors, SimulatorTracesNeverViolate) {
  for (auto m : {RegisterModel::kAtomic, RegisterModel::kRegular, RegisterModel::kLinearizable}) {
    for (auto adv : {"round_robin", "uniform_random", "stale_read", "disagreement_maximizer"}) {
      for (std::uint64_t seed = 0; seed < 30; ++seed) {
        SystemConfig c = testing::config(3, {}, m, adv);
        c.seed = seed;
        c.crash_budget = 2;
        for (const auto& v : run_all_monitors(run_once(c))) {
          ASSERT_FALSE(v.violated()) << to_string(m) << ' ' << adv << ' ' << seed << ' ' << v.name << ": " << v.note;
        }
      }
    }
  }
}

// --- mutation of genuine traces ------------------------------------------------

/// Drops events matching `drop` and renumbers seqs densely.
Trace remove_events(const Trace& t, const std::function<bool(const TraceEvent&)>& drop) {
  Trace out{t.config, {}};
  for (const auto& e : t.events) {
    if (drop(e)) continue;
    out.events.push_back(e);
    out.events.back().seq = out.events.size() - 1;
  }
  return out;
}

struct Found {
  Trace trace;
};

/// First explored leaf satisfying `want`.
Trace explore_for(const std::function<bool(const Trace&)>& want) {
  ExplorationConfig cfg;
  cfg.n = 2;
  cfg.max_events = 60;
  cfg.round_cap = 3;
  cfg.on_leaf = [&](const Trace& t, bool) {
    if (want(t)) throw Found{t};
  };
  try {
    explore(cfg);
  } catch (const Found& f) {
    return f.trace;
  }
  throw std::runtime_error("no leaf found");
}

/// Switch W<v,r> -> W<bar v, r'> by one process: (pid, bar v, r).
std::optional<std::tuple<ProcessId, Prefer, Round>> value_switch(const Trace& t, bool adjacent) {
  std::map<std::uint32_t, std::vector<RegisterValue>> mine;
  for (const auto& e : t.events) {
    if (e.kind != EventKind::kInvokeWrite) continue;
    if (is_binary(e.value.prefer)) {
      for (auto prev : mine[e.pid.value]) {
        if (prev.prefer == complement(e.value.prefer) &&
            (adjacent ? prev.round + 1 == e.value.round : prev.round < e.value.round)) {
          return std::tuple{e.pid, e.value.prefer, prev.round};
        }
      }
    }
    mine[e.pid.value].push_back(e.value);
  }
  return std::nullopt;
}

TEST(Mutation, Bl1ExplorerWitnessLosesItsSupport) {
  for (bool adjacent : {true, false}) {
    const auto check = adjacent ? check_lemma_bl1 : check_lemma_bl1_5;
    // explorer leaf where the lemma applies: p switched values
    const Trace t = explore_for([&](const Trace& x) { return check(x).status == Status::kPass; });
    auto sw = value_switch(t, adjacent);
    ASSERT_TRUE(sw);
    const auto [p, u, r] = *sw;
    const Trace cut = remove_events(t, [&](const TraceEvent& e) {
      return (e.kind == EventKind::kInvokeWrite || e.kind == EventKind::kRespondWrite) && e.pid != p &&
             e.value.prefer == u && e.value.round >= r;
    });
    EXPECT_TRUE(check(cut).violated()) << to_text(cut);
  }
}

TEST(Mutation, Bl3DecisionMovedToALaterRound) {
  const Trace t = explore_for([](const Trace& x) { return check_lemma_bl3(x).status == Status::kPass; });
  Trace bad = t;
  for (auto& e : bad.events) {
    if (e.kind == EventKind::kDecide) {
      e.value.round += 1;
      break;
    }
  }
  EXPECT_TRUE(check_lemma_bl3(bad).violated()) << to_text(t);
}

/// A complete forced-coin run whose round-2 antecedent fired.
Trace forced_run() {
  for (std::uint64_t seed = 0;; ++seed) {
    SystemConfig c = testing::config(3, {}, RegisterModel::kRegular, "uniform_random");
    c.seed = seed;
    Simulation sim(c, make_adversary(c.adversary, seed, 0), std::make_unique<ForcedCoin>(seed, 2, false));
    sim.run();
    if (antecedent_fired(sim.trace(), 2) && trace_complete(sim.trace())) return sim.take_trace();
  }
}

TEST(Mutation, ForcedCoinRunPassesThenBreaks) {
  const Trace t = forced_run();
  EXPECT_EQ(check_lemma_bl4(t, Round{2}).status, Status::kPass);
  EXPECT_EQ(check_lemma_bc1(t, Round{2}).status, Status::kPass);
  const auto ants = coin_antecedents(t);
  const auto a = std::find_if(ants.begin(), ants.end(), [](const CoinAntecedent& x) { return x.round == 2; });
  ASSERT_NE(a, ants.end());

  // bl4: the first round-2 value write now carries the other value
  Trace flipped = t;
  for (auto& e : flipped.events) {
    if (e.kind == EventKind::kInvokeWrite && e.value == RegisterValue{a->value, 2}) {
      e.value.prefer = complement(a->value);
      break;
    }
  }
  EXPECT_TRUE(check_lemma_bl4(flipped, Round{2}).violated());

  // bc1: some decision lands two rounds too late
  Trace late = t;
  for (auto& e : late.events) {
    if (e.kind == EventKind::kDecide) {
      e.value.round = 4;
      break;
    }
  }
  EXPECT_TRUE(check_lemma_bc1(late, Round{2}).violated());
}

TEST(Mutation, DecisionValueFlipBreaksAgreement) {
  SystemConfig c = testing::config(3, {}, RegisterModel::kRegular, "uniform_random");
  c.seed = 4;
  Trace t = run_once(c);
  ASSERT_TRUE(trace_complete(t));
  for (auto& e : t.events) {
    if (e.kind == EventKind::kDecide) {
      e.value.prefer = complement(e.value.prefer);
      break;
    }
  }
  EXPECT_TRUE(check_agreement(t).violated());
}

}  // namespace
}  // namespace regcons
