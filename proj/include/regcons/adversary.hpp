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

#ifndef REGCONS_ADVERSARY_HPP_
#define REGCONS_ADVERSARY_HPP_

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "regcons/core.hpp"
#include "regcons/system.hpp"

namespace regcons {

// ---------------------------------------------------------------------------
// Seeded randomness
// ---------------------------------------------------------------------------

/// splitmix64 finalizer; derives independent stream seeds from one seed.
inline constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kAdversaryStream = 1;
inline constexpr std::uint64_t kCoinStream = 2;
inline constexpr std::uint64_t kProposalStream = 3;

/// mt19937_64 with portable bounded draws (std distributions differ between
/// standard libraries, which would break byte-identical replay).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw Error(ErrorCode::kInvalidArgument, "empty range");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  bool chance(double p) { return static_cast<double>(engine_() >> 11) * 0x1.0p-53 < p; }

  bool coin() { return (engine_() >> 63) != 0; }

 private:
  std::mt19937_64 engine_;
};

// ---------------------------------------------------------------------------
// Adversary interface
// ---------------------------------------------------------------------------

/// Everything an adversary may look at: the full system state and the trace
/// so far. Coins are drawn by the driver only when a flip fires, so no future
/// outcome is reachable from here; the constructor checks that every coin
/// drawn so far is visible as a FLIP event.
class AdversaryContext {
 public:
  AdversaryContext(const SystemState& state, std::span<const TraceEvent> trace)
      : state_(state), trace_(trace) {
    const auto flips = static_cast<std::uint32_t>(std::count_if(
        trace.begin(), trace.end(), [](const TraceEvent& e) { return e.kind == EventKind::kFlip; }));
    if (flips != state.coins_drawn()) {
      throw Error(ErrorCode::kInvalidArgument, "coin outcomes exist that are not in the trace");
    }
  }

  const SystemState& state() const noexcept { return state_; }
  std::span<const TraceEvent> trace() const noexcept { return trace_; }

  std::vector<ScheduleChoice> enabled(ChoiceMode mode = ChoiceMode::kEager) const {
    return state_.enabled_choices(mode);
  }

 private:
  const SystemState& state_;
  std::span<const TraceEvent> trace_;
};

class Adversary {
 public:
  virtual ~Adversary() = default;
  virtual std::string_view name() const = 0;
  virtual ScheduleChoice choose(const AdversaryContext& ctx) = 0;
};

/// Probability per step that a crash-enabled adversary spends a crash.
inline constexpr double kDefaultCrashRate = 0.01;

/// With probability `rate`, crash a uniformly chosen process while fewer than
/// `budget` crashes have happened. Picking a halted process yields nothing.
inline std::optional<ScheduleChoice> crash_policy(const AdversaryContext& ctx, std::uint32_t budget,
                                                  Rng& rng, double rate = kDefaultCrashRate) {
  const auto& st = ctx.state();
  if (st.crashes() >= budget || budget == 0) return std::nullopt;
  if (!rng.chance(rate)) return std::nullopt;
  const ProcessId victim(static_cast<std::uint32_t>(rng.below(st.n())));
  if (st.process(victim).halted()) return std::nullopt;
  return ScheduleChoice::crash(victim);
}

namespace detail {

inline std::vector<ScheduleChoice> without_crashes(std::vector<ScheduleChoice> choices) {
  std::erase_if(choices, [](const ScheduleChoice& c) { return c.kind == ChoiceKind::kCrash; });
  return choices;
}

inline bool is_read_response(const SystemState& st, const ScheduleChoice& c) {
  return c.kind == ChoiceKind::kFireRespond && st.process(c.pid).phase == Phase::kAwaitRead;
}

/// Keeps one response per reader, picked by `pick` from that reader's options.
template <typename Pick>
std::vector<ScheduleChoice> collapse_reads(const SystemState& st, std::vector<ScheduleChoice> choices,
                                           Pick pick) {
  std::vector<ScheduleChoice> out;
  for (std::size_t i = 0; i < choices.size();) {
    if (!is_read_response(st, choices[i])) {
      out.push_back(choices[i++]);
      continue;
    }
    std::size_t j = i;
    std::vector<RegisterValue> options;
    while (j < choices.size() && choices[j].pid == choices[i].pid && is_read_response(st, choices[j])) {
      options.push_back(choices[j].value);
      ++j;
    }
    // Choices are sorted by value; restore the register's oldest-first order.
    const auto ordered = st.read_options(choices[i].pid);
    if (ordered.size() == options.size()) options = ordered;
    ScheduleChoice c = choices[i];
    c.value = pick(c.pid, options);
    out.push_back(c);
    i = j;
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Shipped adversaries
// ---------------------------------------------------------------------------

/// Cycles through processes; each turn fires that process's next step. Reads
/// take the newest legal value and registers are read in pid order.
class RoundRobinAdversary : public Adversary {
 public:
  explicit RoundRobinAdversary(std::uint64_t seed = 0, std::uint32_t crash_budget = 0)
      : rng_(seed), crash_budget_(crash_budget) {}

  std::string_view name() const override { return "round_robin"; }

  ScheduleChoice choose(const AdversaryContext& ctx) override {
    if (auto c = crash_policy(ctx, crash_budget_, rng_)) return *c;
    const auto& st = ctx.state();
    auto choices = detail::without_crashes(ctx.enabled());
    std::erase_if(choices, [](const ScheduleChoice& c) { return c.kind == ChoiceKind::kCommit; });
    if (choices.empty()) throw Error(ErrorCode::kAdversaryFault, "no enabled process");
    const std::uint32_t start = last_ ? *last_ + 1 : 0;
    for (std::uint32_t k = 0; k < st.n(); ++k) {
      const ProcessId p((start + k) % st.n());
      auto it = std::find_if(choices.begin(), choices.end(), [&](const ScheduleChoice& c) { return c.pid == p; });
      if (it == choices.end()) continue;
      last_ = p.value;
      ScheduleChoice c = *it;
      if (detail::is_read_response(st, c)) c.value = st.read_options(p).back();
      return c;
    }
    throw Error(ErrorCode::kAdversaryFault, "no enabled process");
  }

  std::optional<std::uint32_t> last_fired() const noexcept { return last_; }
  void set_last_fired(std::uint32_t pid) noexcept { last_ = pid; }

 private:
  Rng rng_;
  std::uint32_t crash_budget_;
  std::optional<std::uint32_t> last_;
};

/// Uniform over every enabled choice, including each legal read value and,
/// for linearizable registers, each early commitment.
class UniformRandomAdversary : public Adversary {
 public:
  UniformRandomAdversary(std::uint64_t seed, std::uint32_t crash_budget)
      : rng_(seed), crash_budget_(crash_budget) {}

  std::string_view name() const override { return "uniform_random"; }

  ScheduleChoice choose(const AdversaryContext& ctx) override {
    if (auto c = crash_policy(ctx, crash_budget_, rng_)) return *c;
    auto choices = detail::without_crashes(ctx.enabled());
    if (choices.empty()) throw Error(ErrorCode::kAdversaryFault, "no enabled choice");
    return choices[rng_.below(choices.size())];
  }

 private:
  Rng rng_;
  std::uint32_t crash_budget_;
};

/// Random scheduling; every regular read returns the oldest legal value.
class StaleReadAdversary : public Adversary {
 public:
  StaleReadAdversary(std::uint64_t seed, std::uint32_t crash_budget)
      : rng_(seed), crash_budget_(crash_budget) {}

  std::string_view name() const override { return "stale_read"; }

  ScheduleChoice choose(const AdversaryContext& ctx) override {
    if (auto c = crash_policy(ctx, crash_budget_, rng_)) return *c;
    auto choices = detail::collapse_reads(ctx.state(), detail::without_crashes(ctx.enabled()),
                                          [](ProcessId, const std::vector<RegisterValue>& legal) {
                                            return legal.front();
                                          });
    if (choices.empty()) throw Error(ErrorCode::kAdversaryFault, "no enabled choice");
    return choices[rng_.below(choices.size())];
  }

 private:
  Rng rng_;
  std::uint32_t crash_budget_;
};

/// Greedy heuristic that tries to keep the leaders split: reads return the
/// legal value least likely to agree with the reader, and writes that
/// introduce bot or a minority preference are scheduled first.
class DisagreementMaximizer : public Adversary {
 public:
  DisagreementMaximizer(std::uint64_t seed, std::uint32_t crash_budget)
      : rng_(seed), crash_budget_(crash_budget) {}

  std::string_view name() const override { return "disagreement_maximizer"; }

  /// Ranks `legal` for a reader whose own register holds `own`; returns the
  /// most disagreeing value: bot first, then the opposite preference, then
  /// the highest round.
  static RegisterValue pick_read(RegisterValue own, const std::vector<RegisterValue>& legal) {
    auto score = [&](const RegisterValue& v) {
      int s = 0;
      if (v.prefer == Prefer::kBot) {
        s = 2;
      } else if (v.prefer != own.prefer) {
        s = 1;
      }
      return std::pair{s, v.round};
    };
    return *std::max_element(legal.begin(), legal.end(),
                             [&](const RegisterValue& a, const RegisterValue& b) { return score(a) < score(b); });
  }

  ScheduleChoice choose(const AdversaryContext& ctx) override {
    if (auto c = crash_policy(ctx, crash_budget_, rng_)) return *c;
    const auto& st = ctx.state();
    auto choices = detail::collapse_reads(st, detail::without_crashes(ctx.enabled()),
                                          [&](ProcessId reader, const std::vector<RegisterValue>& legal) {
                                            return pick_read(own_value(st, reader), legal);
                                          });
    if (choices.empty()) throw Error(ErrorCode::kAdversaryFault, "no enabled choice");
    const Prefer majority = leader_majority(st);
    std::vector<ScheduleChoice> hostile;
    for (const auto& c : choices) {
      if (c.kind != ChoiceKind::kFireInvoke) continue;
      auto w = st.next_write(c.pid);
      if (w && (w->prefer == Prefer::kBot || w->prefer != majority)) hostile.push_back(c);
    }
    if (!hostile.empty() && rng_.chance(0.75)) return hostile[rng_.below(hostile.size())];
    return choices[rng_.below(choices.size())];
  }

 private:
  static RegisterValue own_value(const SystemState& st, ProcessId p) {
    if (st.config().model == RegisterModel::kLinearizable) return st.linearization().latest(p);
    return st.registers()[p.value].current;
  }

  /// Preference held by most top-round registers (ties go to 0).
  static Prefer leader_majority(const SystemState& st) {
    Round top = 0;
    for (std::uint32_t i = 0; i < st.n(); ++i) top = std::max(top, own_value(st, ProcessId(i)).round);
    std::array<int, 3> count{};
    for (std::uint32_t i = 0; i < st.n(); ++i) {
      auto v = own_value(st, ProcessId(i));
      if (v.round == top) ++count[static_cast<std::size_t>(v.prefer)];
    }
    return count[1] > count[0] ? Prefer::kOne : Prefer::kZero;
  }

  Rng rng_;
  std::uint32_t crash_budget_;
};

/// Scripted schedule showing that with linearizable (not atomic) registers
/// the adversary can pick which round-1 write is linearized first after
/// seeing a round-2 coin:
///
///   (a) every process invokes its round-1 write, none responds;
///   (b) the victim's write completes, left uncommitted;
///   (c) the victim reads both preferences, pauses, re-reads and flips c;
///   (d) a write whose value differs from c is committed first.
///
/// Afterwards the remaining history is committed and the run finishes under
/// a round-robin schedule. Under the regular model (d) does not exist and the
/// script continues straight to the round-robin phase.
class AppendixAttackAdversary : public Adversary {
 public:
  static constexpr ProcessId kVictim{0};

  explicit AppendixAttackAdversary(std::uint64_t seed = 0) : tail_(seed, 0) {}

  std::string_view name() const override { return "appendix_attack"; }

  ScheduleChoice choose(const AdversaryContext& ctx) override {
    const auto& st = ctx.state();
    if (!checked_) {
      check_preconditions(st, ctx.trace());
      checked_ = true;
    }
    const bool lin = st.config().model == RegisterModel::kLinearizable;
    const ProcessId victim = kVictim;
    const auto& vs = st.process(victim);

    // (a) every round-1 write invoked before any response.
    for (std::uint32_t i = 0; i < st.n(); ++i) {
      const auto& s = st.process(ProcessId(i));
      if (s.phase == Phase::kWrite && s.iteration == 0) return ScheduleChoice::invoke(s.pid);
    }
    if (stage_ == Stage::kScript) {
      // (b) + (c): drive the victim alone until its coin is flipped.
      switch (vs.phase) {
        case Phase::kAwaitWrite:
          return ScheduleChoice::respond(victim, vs.outgoing, lin);
        case Phase::kWrite:
          if (vs.site == LineSite::kCoinWrite) break;
          return ScheduleChoice::invoke(victim);
        case Phase::kRead: {
          for (std::uint32_t t = 0; t < st.n(); ++t) {
            if (!vs.partial[t]) return ScheduleChoice::invoke_read(victim, ProcessId(t));
          }
          break;
        }
        case Phase::kAwaitRead:
          return ScheduleChoice::respond(victim, scripted_read(st, vs.reading), lin);
        case Phase::kFlip:
          return ScheduleChoice::local(victim);
        default:
          throw Error(ErrorCode::kScenarioBroken, "victim left the scripted path");
      }
      if (vs.site != LineSite::kCoinWrite || vs.phase != Phase::kWrite) {
        throw Error(ErrorCode::kScenarioBroken, "victim did not reach its coin flip");
      }
      coin_ = vs.outgoing.prefer;
      stage_ = lin ? Stage::kChooseFirst : Stage::kTail;
    }
    if (stage_ == Stage::kChooseFirst) {
      stage_ = Stage::kDrain;
      return ScheduleChoice::commit(first_write_owner(st), first_write_owner(st),
                                    round_one_write(st, first_write_owner(st)));
    }
    if (stage_ == Stage::kDrain) {
      if (auto c = drain_step(st)) return *c;
      stage_ = Stage::kTail;
    }
    return tail_.choose(ctx);
  }

  /// Coin flipped by the victim at round 2, once the script reached it.
  std::optional<Prefer> victim_coin() const noexcept { return coin_; }

 private:
  enum class Stage : std::uint8_t { kScript, kChooseFirst, kDrain, kTail };

  void check_preconditions(const SystemState& st, std::span<const TraceEvent> trace) const {
    if (st.config().model == RegisterModel::kAtomic) {
      throw Error(ErrorCode::kScenarioBroken, "atomic writes cannot overlap");
    }
    if (!trace.empty()) throw Error(ErrorCode::kScenarioBroken, "attack must start from the initial state");
    if (st.n() < 2) throw Error(ErrorCode::kScenarioBroken, "attack needs at least two processes");
    const Prefer mine = st.config().proposals[kVictim.value];
    const bool opposed = std::any_of(st.config().proposals.begin(), st.config().proposals.end(),
                                     [&](Prefer p) { return p != mine; });
    if (!opposed) throw Error(ErrorCode::kScenarioBroken, "all proposals are equal");
  }

  /// The victim sees every other process's pending round-1 write, and its
  /// own latest write.
  RegisterValue scripted_read(const SystemState& st, ProcessId reg) const {
    const auto options = st.read_options(kVictim, ChoiceMode::kLazy);
    if (options.empty()) throw Error(ErrorCode::kScenarioBroken, "no legal read value");
    if (reg == kVictim) return options.back();
    const RegisterValue want{st.config().proposals[reg.value], 1};
    if (std::find(options.begin(), options.end(), want) == options.end()) {
      throw Error(ErrorCode::kScenarioBroken, "round-1 write of R" + std::to_string(reg.value) + " not readable");
    }
    return want;
  }

  ProcessId first_write_owner(const SystemState& st) const {
    const Prefer mine = st.config().proposals[kVictim.value];
    if (*coin_ != mine) return kVictim;
    for (std::uint32_t i = 0; i < st.n(); ++i) {
      if (st.config().proposals[i] != mine) return ProcessId(i);
    }
    throw Error(ErrorCode::kScenarioBroken, "no opposing writer");
  }

  static OpId round_one_write(const SystemState& st, ProcessId owner) {
    for (const auto& op : st.linearization().open_ops()) {
      if (op.is_write && op.reg == owner && op.value.round == 1 && is_binary(op.value.prefer)) return op.id;
    }
    throw Error(ErrorCode::kScenarioBroken, "round-1 write already linearized");
  }

  /// Commits responded operations (and the pending writes they depend on)
  /// until the eager invariant holds again.
  static std::optional<ScheduleChoice> drain_step(const SystemState& st) {
    const auto& lin = st.linearization();
    if (lin.responded_uncommitted() == 0) return std::nullopt;
    for (const auto& op : lin.open_ops()) {
      if (!op.interval.complete() && !op.is_write) continue;
      if (lin.can_commit(op.id)) return ScheduleChoice::commit(op.pid, op.reg, op.id);
    }
    throw Error(ErrorCode::kScenarioBroken, "cannot complete the linearization");
  }

  RoundRobinAdversary tail_;
  Stage stage_ = Stage::kScript;
  bool checked_ = false;
  std::optional<Prefer> coin_;
};

inline constexpr std::array<std::string_view, 5> kAdversaryNames = {
    "round_robin", "uniform_random", "stale_read", "disagreement_maximizer", "appendix_attack"};

/// Builds a shipped adversary by name. `seed` is the run seed; the adversary
/// draws from its own derived stream.
inline std::unique_ptr<Adversary> make_adversary(std::string_view name, std::uint64_t seed,
                                                 std::uint32_t crash_budget) {
  const std::uint64_t s = mix_seed(seed, kAdversaryStream);
  if (name == "round_robin") return std::make_unique<RoundRobinAdversary>(s, crash_budget);
  if (name == "uniform_random") return std::make_unique<UniformRandomAdversary>(s, crash_budget);
  if (name == "stale_read") return std::make_unique<StaleReadAdversary>(s, crash_budget);
  if (name == "disagreement_maximizer") return std::make_unique<DisagreementMaximizer>(s, crash_budget);
  if (name == "appendix_attack") return std::make_unique<AppendixAttackAdversary>(s);
  throw Error(ErrorCode::kConfig, "unknown adversary '" + std::string(name) + "'");
}

}  // namespace regcons

#endif  // REGCONS_ADVERSARY_HPP_
