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

// Trace monitors. Each is a pure function of a trace. Notation used below:
// W<u,r> is a write invocation of (u, r); "bar v" is the other binary value.

#ifndef REGCONS_MONITORS_HPP_
#define REGCONS_MONITORS_HPP_

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "regcons/core.hpp"
#include "regcons/registers.hpp"

namespace regcons {

namespace detail {

inline std::size_t bit(Prefer p) { return static_cast<std::size_t>(p); }

inline std::string wstr(RegisterValue v) {
  return std::string("W<") + prefer_char(v.prefer) + "," + std::to_string(v.round) + ">";
}

/// Rounds present per preference, grown one write invocation at a time.
class WrittenRounds {
 public:
  void add(RegisterValue v) {
    auto& s = rounds_[bit(v.prefer)];
    s.insert(v.round);
    auto& k = prefix_[bit(v.prefer)];
    while (s.contains(k + 1)) ++k;
  }
  bool has(Prefer p, Round r) const { return rounds_[bit(p)].contains(r); }
  /// Largest k such that rounds 1..k are all present for `p`.
  Round prefix(Prefer p) const { return prefix_[bit(p)]; }
  Round max_round(Prefer p) const { return rounds_[bit(p)].empty() ? 0 : *rounds_[bit(p)].rbegin(); }

 private:
  std::array<std::set<Round>, 3> rounds_;
  std::array<Round, 3> prefix_{};
};

inline std::vector<const TraceEvent*> write_invocations(const Trace& t) {
  std::vector<const TraceEvent*> out;
  for (const auto& e : t.events) {
    if (e.kind == EventKind::kInvokeWrite) out.push_back(&e);
  }
  return out;
}

}  // namespace detail

/// True iff every process has decided or crashed.
inline bool trace_complete(const Trace& t) {
  std::vector<bool> done(t.config.n, false);
  for (const auto& e : t.events) {
    if ((e.kind == EventKind::kDecide || e.kind == EventKind::kCrash) && e.pid.value < done.size()) {
      done[e.pid.value] = true;
    }
  }
  return std::all_of(done.begin(), done.end(), [](bool b) { return b; });
}

inline std::vector<bool> crashed_processes(const Trace& t) {
  std::vector<bool> out(t.config.n, false);
  for (const auto& e : t.events) {
    if (e.kind == EventKind::kCrash && e.pid.value < out.size()) out[e.pid.value] = true;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Well-formedness: control flow of the consensus loop per process
// ---------------------------------------------------------------------------

inline Verdict check_well_formed(const Trace& t) {
  const std::string name = "well_formed";
  const std::uint32_t n = t.config.n;
  enum class At : std::uint8_t { kStart, kAwaitWrite, kReading, kAwaitRead, kEvaluated, kFlipped, kHalted };
  struct P {
    At at = At::kStart;
    RegisterValue pending;
    ProcessId reading;
    std::vector<bool> read;
    std::size_t reads = 0;
    RegisterValue flip;
    Round captured = 0;
  };
  std::vector<P> ps(n);
  for (auto& p : ps) p.read.assign(n, false);
  for (std::size_t i = 0; i < t.events.size(); ++i) {
    const auto& e = t.events[i];
    auto bad = [&](const std::string& why) { return Verdict::violation(name, {e.seq}, why); };
    if (e.seq != i) return bad("sequence numbers are not dense");
    if (e.pid.value >= n || e.target.value >= n) return bad("pid or target out of range");
    P& p = ps[e.pid.value];
    if (p.at == At::kHalted) return bad("event after the process halted");
    switch (e.kind) {
      case EventKind::kInvokeWrite: {
        if (e.target != e.pid) return bad("write to a register owned by another process");
        if (!e.value.valid() || e.value.round == 0) return bad("written value has round 0");
        const bool first = p.at == At::kStart;
        if (first != (e.line == LineSite::kProposeWrite)) return bad("proposal write out of place");
        if (first && e.value.round != 1) return bad("proposal write must be at round 1");
        if (!first && p.at != At::kEvaluated && p.at != At::kFlipped) return bad("write before evaluating a view");
        if (p.at == At::kFlipped && (e.line != LineSite::kCoinWrite || e.value != p.flip)) {
          return bad("coin write does not carry the flipped value");
        }
        if (p.at == At::kEvaluated && e.line == LineSite::kCoinWrite) return bad("coin write without a flip");
        p.pending = e.value;
        p.at = At::kAwaitWrite;
        break;
      }
      case EventKind::kRespondWrite:
        if (p.at != At::kAwaitWrite || e.value != p.pending || e.target != e.pid) {
          return bad("write response without a matching invocation");
        }
        p.at = At::kReading;
        std::fill(p.read.begin(), p.read.end(), false);
        p.reads = 0;
        p.captured = p.pending.round;
        break;
      case EventKind::kInvokeRead:
        if (p.at != At::kReading) return bad("read outside a read pass");
        if (p.read[e.target.value]) return bad("register read twice in one pass");
        p.reading = e.target;
        p.at = At::kAwaitRead;
        break;
      case EventKind::kRespondRead:
        if (p.at != At::kAwaitRead || e.target != p.reading) return bad("read response without a matching invocation");
        if (!e.value.valid()) return bad("read returned an invalid value");
        p.read[e.target.value] = true;
        p.at = ++p.reads == n ? At::kEvaluated : At::kReading;
        break;
      case EventKind::kFlip:
        if (p.at != At::kEvaluated) return bad("flip outside evaluation");
        if (!is_binary(e.value.prefer)) return bad("flip outcome is not binary");
        p.flip = e.value;
        p.at = At::kFlipped;
        break;
      case EventKind::kDecide:
        if (p.at != At::kEvaluated) return bad("decision outside evaluation");
        if (!is_binary(e.value.prefer)) return bad("decided value is not binary");
        p.at = At::kHalted;
        break;
      case EventKind::kCrash:
        p.at = At::kHalted;
        break;
    }
  }
  return Verdict::pass(name);
}

// ---------------------------------------------------------------------------
// End-state properties
// ---------------------------------------------------------------------------

inline Verdict check_validity(const Trace& t) {
  bool any = false;
  for (const auto& e : t.events) {
    if (e.kind != EventKind::kDecide) continue;
    any = true;
    const auto& props = t.config.proposals;
    if (std::find(props.begin(), props.end(), e.value.prefer) == props.end()) {
      return Verdict::violation("validity", {e.seq},
                                std::string("decided ") + prefer_char(e.value.prefer) + " which nobody proposed");
    }
  }
  return Verdict::pass("validity", any ? "" : "vacuous: no decisions");
}

inline Verdict check_agreement(const Trace& t) {
  const TraceEvent* first = nullptr;
  for (const auto& e : t.events) {
    if (e.kind != EventKind::kDecide) continue;
    if (!first) {
      first = &e;
    } else if (e.value.prefer != first->value.prefer) {
      return Verdict::violation("agreement", {first->seq, e.seq}, "two different decisions");
    }
  }
  return Verdict::pass("agreement", first ? "" : "vacuous: no decisions");
}

// ---------------------------------------------------------------------------
// Write-pattern observation, clauses (a)-(e)
// ---------------------------------------------------------------------------

/// Six verdicts: obs1_a .. obs1_d, then clause (e) in its "invokes" and
/// "completes" forms.
inline std::vector<Verdict> check_observation0(const Trace& t) {
  const auto writes = detail::write_invocations(t);
  std::vector<Verdict> out;

  // (a) every write carries a round >= 1
  {
    Verdict v = writes.empty() ? Verdict::vacuous("obs1_a", "no writes") : Verdict::pass("obs1_a");
    for (const auto* w : writes) {
      if (w->value.round == 0) {
        v = Verdict::violation("obs1_a", {w->seq}, "write of round 0");
        break;
      }
    }
    out.push_back(v);
  }
  // (b) a process invokes W<x,r> at most once
  {
    Verdict v = writes.empty() ? Verdict::vacuous("obs1_b", "no writes") : Verdict::pass("obs1_b");
    std::map<std::tuple<std::uint32_t, Prefer, Round>, Seq> seen;
    for (const auto* w : writes) {
      auto [it, fresh] = seen.emplace(std::tuple{w->pid.value, w->value.prefer, w->value.round}, w->seq);
      if (!fresh) {
        v = Verdict::violation("obs1_b", {it->second, w->seq}, detail::wstr(w->value) + " invoked twice");
        break;
      }
    }
    out.push_back(v);
  }
  // (c) a process never writes both 0 and 1 at one round
  {
    Verdict v = writes.empty() ? Verdict::vacuous("obs1_c", "no writes") : Verdict::pass("obs1_c");
    std::map<std::pair<std::uint32_t, Round>, const TraceEvent*> seen;
    for (const auto* w : writes) {
      if (!is_binary(w->value.prefer)) continue;
      auto [it, fresh] = seen.emplace(std::pair{w->pid.value, w->value.round}, w);
      if (!fresh && it->second->value.prefer != w->value.prefer) {
        v = Verdict::violation("obs1_c", {it->second->seq, w->seq}, "both values written at one round");
        break;
      }
    }
    out.push_back(v);
  }
  // (d) rounds written by a process never decrease
  {
    Verdict v = writes.empty() ? Verdict::vacuous("obs1_d", "no writes") : Verdict::pass("obs1_d");
    std::map<std::uint32_t, const TraceEvent*> last;
    for (const auto* w : writes) {
      auto it = last.find(w->pid.value);
      if (it != last.end() && w->value.round < it->second->value.round) {
        v = Verdict::violation("obs1_d", {it->second->seq, w->seq}, "round decreased");
        break;
      }
      last[w->pid.value] = w;
    }
    out.push_back(v);
  }
  // (e) W<bot,r> by p comes after p's own W<v,r> with v binary: invoked
  //     (first form) or completed (second form) before the bot write.
  {
    Verdict inv = Verdict::vacuous("obs1_e_invoke", "no bot writes");
    Verdict done = Verdict::vacuous("obs1_e_complete", "no bot writes");
    std::set<std::pair<std::uint32_t, Round>> invoked, completed;
    for (const auto& e : t.events) {
      if (!is_binary(e.value.prefer) && e.kind == EventKind::kInvokeWrite) {
        const auto key = std::pair{e.pid.value, e.value.round};
        if (!inv.violated()) {
          inv = invoked.contains(key) ? Verdict::pass(inv.name)
                                      : Verdict::violation(inv.name, {e.seq}, "bot write with no earlier value write");
        }
        if (!done.violated()) {
          done = completed.contains(key)
                     ? Verdict::pass(done.name)
                     : Verdict::violation(done.name, {e.seq}, "bot write before a value write completed");
        }
      } else if (is_binary(e.value.prefer) && e.kind == EventKind::kInvokeWrite) {
        invoked.insert({e.pid.value, e.value.round});
      } else if (is_binary(e.value.prefer) && e.kind == EventKind::kRespondWrite) {
        completed.insert({e.pid.value, e.value.round});
      }
    }
    out.push_back(inv);
    out.push_back(done);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Value changes need an earlier write of the new value by someone else
// ---------------------------------------------------------------------------

namespace detail {

/// Some q != p invoked W<u,r'> with r' >= r strictly before `before`.
inline const TraceEvent* other_writer(const std::vector<const TraceEvent*>& writes, ProcessId p, Prefer u,
                                      Round r, Seq before) {
  for (const auto* w : writes) {
    if (w->seq >= before) break;
    if (w->pid != p && w->value.prefer == u && w->value.round >= r) return w;
  }
  return nullptr;
}

/// Shared scan for the two value-change lemmas. With `adjacent`, only the
/// pattern W<v,r> then W<bar v,r+1> counts; otherwise any earlier round.
inline Verdict value_change(const Trace& t, const std::string& name, bool adjacent) {
  const auto writes = write_invocations(t);
  std::vector<std::vector<const TraceEvent*>> by_pid(t.config.n);
  std::size_t patterns = 0;
  for (const auto* w : writes) {
    if (w->pid.value >= t.config.n) continue;
    auto& mine = by_pid[w->pid.value];
    if (is_binary(w->value.prefer)) {
      const Prefer u = w->value.prefer;
      const Prefer v = complement(u);
      // Earliest-requirement-dominating earlier write: the largest r.
      std::optional<Round> r;
      for (const auto* prev : mine) {
        if (prev->value.prefer != v) continue;
        if (adjacent ? prev->value.round + 1 == w->value.round : prev->value.round < w->value.round) {
          r = std::max(r.value_or(0), prev->value.round);
        }
      }
      if (r) {
        ++patterns;
        if (!other_writer(writes, w->pid, u, *r, w->seq)) {
          return Verdict::violation(name, {w->seq},
                                    "p" + std::to_string(w->pid.value) + " switched to " + wstr(w->value) +
                                        " with no earlier write of that value at round >= " + std::to_string(*r) +
                                        " by another process");
        }
      }
    }
    mine.push_back(w);
  }
  if (patterns == 0) return Verdict::vacuous(name, "no value change");
  return Verdict::pass(name, std::to_string(patterns) + " value changes");
}

}  // namespace detail

/// Invoking W<v,r> then W<bar v,r+1> needs some other process to have
/// invoked W<bar v,r'>, r' >= r, earlier.
inline Verdict check_lemma_bl1(const Trace& t) { return detail::value_change(t, "bl1", true); }

/// As bl1 for W<v,r> followed by W<bar v,r'> with any r' > r.
inline Verdict check_lemma_bl1_5(const Trace& t) { return detail::value_change(t, "bl1_5", false); }

// ---------------------------------------------------------------------------
// Prefix properties, one incremental scan each
// ---------------------------------------------------------------------------

/// For u in {0,1}: while W<u,r> is absent, no W<u,r'> with r' >= r. So every
/// W<u,r> needs W<u,1..r-1> already present.
inline Verdict check_lemma_bl2(const Trace& t) {
  detail::WrittenRounds have;
  for (const auto& e : t.events) {
    if (e.kind != EventKind::kInvokeWrite || !is_binary(e.value.prefer)) continue;
    have.add(e.value);
    if (have.prefix(e.value.prefer) < e.value.round) {
      return Verdict::violation("bl2", {e.seq},
                                detail::wstr(e.value) + " before " +
                                    detail::wstr({e.value.prefer, have.prefix(e.value.prefer) + 1}));
    }
  }
  return Verdict::pass("bl2");
}

/// While W<u,r> is absent (either u), no W<bot,r'> with r' >= r.
inline Verdict check_lemma_bl2_prime(const Trace& t) {
  detail::WrittenRounds have;
  for (const auto& e : t.events) {
    if (e.kind != EventKind::kInvokeWrite) continue;
    if (is_binary(e.value.prefer)) {
      have.add(e.value);
      continue;
    }
    for (Prefer u : {Prefer::kZero, Prefer::kOne}) {
      for (Round r = 1; r <= e.value.round; ++r) {
        if (!have.has(u, r)) {
          return Verdict::violation("bl2_prime", {e.seq},
                                    detail::wstr(e.value) + " while " + detail::wstr({u, r}) + " is absent");
        }
      }
    }
  }
  return Verdict::pass("bl2_prime");
}

/// While W<bar v,r> is absent, every W<-,r'> with r' >= r writes v.
inline Verdict check_corollary(const Trace& t) {
  detail::WrittenRounds have;
  for (const auto& e : t.events) {
    if (e.kind != EventKind::kInvokeWrite) continue;
    if (is_binary(e.value.prefer)) have.add(e.value);
    for (Prefer v : {Prefer::kZero, Prefer::kOne}) {
      const Prefer other = complement(v);
      for (Round r = 1; r <= e.value.round; ++r) {
        if (!have.has(other, r) && e.value.prefer != v) {
          return Verdict::violation("corollary", {e.seq},
                                    detail::wstr(e.value) + " while " + detail::wstr({other, r}) +
                                        " is absent, so only " + prefer_char(v) + " may be written");
        }
      }
    }
  }
  return Verdict::pass("corollary");
}

// ---------------------------------------------------------------------------
// Decisions
// ---------------------------------------------------------------------------

/// A decision of v at round r rules out W<bar v,r> anywhere in the trace.
inline Verdict check_lemma_bl3_5(const Trace& t) {
  std::map<std::pair<Prefer, Round>, Seq> first_write;
  for (const auto& e : t.events) {
    if (e.kind == EventKind::kInvokeWrite) first_write.emplace(std::pair{e.value.prefer, e.value.round}, e.seq);
  }
  std::size_t decisions = 0;
  for (const auto& e : t.events) {
    if (e.kind != EventKind::kDecide || !is_binary(e.value.prefer)) continue;
    ++decisions;
    auto it = first_write.find({complement(e.value.prefer), e.value.round});
    if (it != first_write.end()) {
      return Verdict::violation("bl3_5", {e.seq, it->second},
                                std::string("decided ") + prefer_char(e.value.prefer) + " at round " +
                                    std::to_string(e.value.round) + " but " +
                                    detail::wstr({complement(e.value.prefer), e.value.round}) + " exists");
    }
  }
  if (decisions == 0) return Verdict::vacuous("bl3_5", "no decisions");
  return Verdict::pass("bl3_5");
}

/// If W<bar v,r> never appears, every correct process that invokes
/// W<-,r+1> decides v at round r+1.
inline Verdict check_lemma_bl3(const Trace& t) {
  const std::string name = "bl3";
  if (!trace_complete(t)) return Verdict::vacuous(name, "trace truncated");
  const auto crashed = crashed_processes(t);
  detail::WrittenRounds have;
  std::map<std::pair<std::uint32_t, Round>, Seq> first_write;  // (pid, round) -> seq
  std::map<std::uint32_t, const TraceEvent*> decision;
  Round top = 0;
  for (const auto& e : t.events) {
    if (e.kind == EventKind::kInvokeWrite) {
      if (is_binary(e.value.prefer)) have.add(e.value);
      first_write.emplace(std::pair{e.pid.value, e.value.round}, e.seq);
      top = std::max(top, e.value.round);
    } else if (e.kind == EventKind::kDecide) {
      decision.emplace(e.pid.value, &e);
    }
  }
  std::size_t fired = 0;
  for (Round r = 1; r < top; ++r) {
    for (Prefer v : {Prefer::kZero, Prefer::kOne}) {
      if (have.has(complement(v), r)) continue;
      for (std::uint32_t q = 0; q < t.config.n; ++q) {
        if (crashed[q]) continue;
        auto w = first_write.find({q, r + 1});
        if (w == first_write.end()) continue;
        ++fired;
        auto d = decision.find(q);
        if (d == decision.end() || d->second->value != RegisterValue{v, r + 1}) {
          std::vector<Seq> witness{w->second};
          if (d != decision.end()) witness.push_back(d->second->seq);
          return Verdict::violation(name, witness,
                                    "p" + std::to_string(q) + " reached round " + std::to_string(r + 1) +
                                        " with " + detail::wstr({complement(v), r}) + " absent but did not decide " +
                                        prefer_char(v) + " there");
        }
      }
    }
  }
  if (fired == 0) return Verdict::vacuous(name, "antecedent never held");
  return Verdict::pass(name);
}

// ---------------------------------------------------------------------------
// Coin-conditioned lemmas
// ---------------------------------------------------------------------------

/// Round r >= 2 with: v, the value of the first completed W<-,r-1>; and
/// every round-r flip equal to v (vacuously when there are none).
struct CoinAntecedent {
  Round round = 0;
  Prefer value = Prefer::kBot;
  Seq first_completed = 0;
  std::size_t flips = 0;
};

/// Rounds whose antecedent holds, ascending. A first-completed bot write is
/// reported in `bad` (it cannot carry a value).
inline std::vector<CoinAntecedent> coin_antecedents(const Trace& t, std::vector<Seq>* bad = nullptr) {
  std::map<Round, const TraceEvent*> first_done;
  std::map<Round, std::array<std::size_t, 2>> flips;
  for (const auto& e : t.events) {
    if (e.kind == EventKind::kRespondWrite) {
      first_done.emplace(e.value.round, &e);
    } else if (e.kind == EventKind::kFlip && is_binary(e.value.prefer)) {
      ++flips[e.value.round][detail::bit(e.value.prefer)];
    }
  }
  std::vector<CoinAntecedent> out;
  for (const auto& [r1, w] : first_done) {
    const Round r = r1 + 1;
    if (r < 2) continue;
    if (!is_binary(w->value.prefer)) {
      if (bad) bad->push_back(w->seq);
      continue;
    }
    const auto it = flips.find(r);
    const std::array<std::size_t, 2> f = it == flips.end() ? std::array<std::size_t, 2>{} : it->second;
    const Prefer v = w->value.prefer;
    if (f[detail::bit(complement(v))] != 0) continue;
    out.push_back({r, v, w->seq, f[detail::bit(v)]});
  }
  return out;
}

/// Whether the antecedent fires at round `r` with at least one flip.
inline bool antecedent_fired(const Trace& t, Round r) {
  for (const auto& a : coin_antecedents(t)) {
    if (a.round == r) return a.flips > 0;
  }
  return false;
}

/// If every round-r flip equals the value v of the first completed
/// W<-,r-1>, then W<bar v,r> is never invoked. With `only_round`, just that
/// round is examined.
inline Verdict check_lemma_bl4(const Trace& t, std::optional<Round> only_round = std::nullopt) {
  const std::string name = "bl4";
  std::vector<Seq> bad;
  auto ants = coin_antecedents(t, &bad);
  if (!bad.empty()) return Verdict::violation(name, {bad.front()}, "first completed write of a round is bot");
  std::map<std::pair<Prefer, Round>, Seq> first_write;
  for (const auto& e : t.events) {
    if (e.kind == EventKind::kInvokeWrite) first_write.emplace(std::pair{e.value.prefer, e.value.round}, e.seq);
  }
  std::size_t fired = 0;
  for (const auto& a : ants) {
    if (only_round && a.round != *only_round) continue;
    ++fired;
    auto it = first_write.find({complement(a.value), a.round});
    if (it != first_write.end()) {
      return Verdict::violation(name, {a.first_completed, it->second},
                                "round " + std::to_string(a.round) + " coins all matched " + prefer_char(a.value) +
                                    " yet " + detail::wstr({complement(a.value), a.round}) + " was invoked");
    }
  }
  if (fired == 0) return Verdict::vacuous(name, "antecedent never held");
  return Verdict::pass(name, std::to_string(fired) + " rounds checked");
}

/// Same antecedent as bl4; every correct process decides at a round <= r+1.
inline Verdict check_lemma_bc1(const Trace& t, std::optional<Round> only_round = std::nullopt) {
  const std::string name = "bc1";
  if (!trace_complete(t)) return Verdict::vacuous(name, "trace truncated");
  const auto ants = coin_antecedents(t);
  const auto crashed = crashed_processes(t);
  std::map<std::uint32_t, const TraceEvent*> decision;
  std::map<std::uint32_t, Seq> last_event;
  for (const auto& e : t.events) {
    if (e.kind == EventKind::kDecide) decision.emplace(e.pid.value, &e);
    last_event[e.pid.value] = e.seq;
  }
  std::size_t fired = 0;
  for (const auto& a : ants) {
    if (only_round && a.round != *only_round) continue;
    ++fired;
    for (std::uint32_t q = 0; q < t.config.n; ++q) {
      if (crashed[q]) continue;
      auto d = decision.find(q);
      if (d == decision.end() || d->second->value.round > a.round + 1) {
        const Seq w = d != decision.end() ? d->second->seq : last_event.count(q) ? last_event[q] : a.first_completed;
        return Verdict::violation(name, {a.first_completed, w},
                                  "p" + std::to_string(q) + " did not decide by round " + std::to_string(a.round + 1));
      }
    }
  }
  if (fired == 0) return Verdict::vacuous(name, "antecedent never held");
  return Verdict::pass(name, std::to_string(fired) + " rounds checked");
}

// ---------------------------------------------------------------------------
// New-old inversion (informational; allowed on regular registers)
// ---------------------------------------------------------------------------

struct InversionResult {
  bool found = false;
  std::vector<Seq> witness;  // write invoke, first read respond, second read respond
  std::string note;
};

/// Two reads by one process, the first preceding the second, both concurrent
/// with a write w, the first returning w's value and the second the value
/// before w.
inline InversionResult check_new_old_inversion(const Trace& t, ProcessId reg) {
  struct W {
    RegisterValue value;
    RegisterValue before;
    OpInterval iv;
  };
  struct R {
    OpInterval iv;
    RegisterValue value;
  };
  std::vector<W> writes;
  std::map<std::uint32_t, std::vector<R>> reads;  // reader -> completed reads of reg
  std::map<std::uint32_t, Seq> open_read;
  RegisterValue last = RegisterValue::initial();
  for (const auto& e : t.events) {
    if (e.target != reg) continue;
    switch (e.kind) {
      case EventKind::kInvokeWrite:
        writes.push_back({e.value, last, {e.seq, kPending}});
        last = e.value;
        break;
      case EventKind::kRespondWrite:
        if (!writes.empty()) writes.back().iv.respond = e.seq;
        break;
      case EventKind::kInvokeRead:
        open_read[e.pid.value] = e.seq;
        break;
      case EventKind::kRespondRead: {
        auto it = open_read.find(e.pid.value);
        if (it == open_read.end()) break;
        reads[e.pid.value].push_back({{it->second, e.seq}, e.value});
        open_read.erase(it);
        break;
      }
      default:
        break;
    }
  }
  for (const auto& w : writes) {
    if (w.value == w.before) continue;
    for (const auto& [reader, rs] : reads) {
      const R* newer = nullptr;
      for (const auto& r : rs) {
        if (!concurrent(r.iv, w.iv)) continue;
        if (r.value == w.value) {
          if (!newer) newer = &r;
        } else if (r.value == w.before && newer && precedes(newer->iv, r.iv)) {
          return {true,
                  {w.iv.invoke, newer->iv.respond, r.iv.respond},
                  "p" + std::to_string(reader) + " read " + detail::wstr(w.value).substr(1) + " then " +
                      detail::wstr(w.before).substr(1) + " from R" + std::to_string(reg.value)};
        }
      }
    }
  }
  return {false, {}, "no inversion"};
}

inline InversionResult check_new_old_inversion_all(const Trace& t) {
  for (std::uint32_t i = 0; i < t.config.n; ++i) {
    auto r = check_new_old_inversion(t, ProcessId(i));
    if (r.found) return r;
  }
  return {false, {}, "no inversion"};
}

// ---------------------------------------------------------------------------
// Aggregation
// ---------------------------------------------------------------------------

/// Every monitor, in a fixed order. Liveness monitors report VACUOUS on
/// truncated traces.
inline std::vector<Verdict> run_all_monitors(const Trace& t) {
  std::vector<Verdict> out;
  out.push_back(check_well_formed(t));
  out.push_back(check_regular_all(t));
  out.push_back(check_validity(t));
  out.push_back(check_agreement(t));
  for (auto& v : check_observation0(t)) out.push_back(std::move(v));
  out.push_back(check_lemma_bl1(t));
  out.push_back(check_lemma_bl1_5(t));
  out.push_back(check_lemma_bl2(t));
  out.push_back(check_lemma_bl2_prime(t));
  out.push_back(check_corollary(t));
  out.push_back(check_lemma_bl3_5(t));
  out.push_back(check_lemma_bl3(t));
  out.push_back(check_lemma_bl4(t));
  out.push_back(check_lemma_bc1(t));
  return out;
}

/// Monitors needed for safety in the explorer: validity, agreement, and the
/// decision/write exclusion.
inline std::vector<Verdict> run_safety_monitors(const Trace& t) {
  return {check_validity(t), check_agreement(t), check_lemma_bl3_5(t)};
}

inline bool any_violation(const std::vector<Verdict>& vs) {
  return std::any_of(vs.begin(), vs.end(), [](const Verdict& v) { return v.violated(); });
}

}  // namespace regcons

#endif  // REGCONS_MONITORS_HPP_
