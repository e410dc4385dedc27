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

#ifndef REGCONS_EXPLORER_HPP_
#define REGCONS_EXPLORER_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "regcons/core.hpp"
#include "regcons/monitors.hpp"
#include "regcons/system.hpp"

namespace regcons {

struct ExplorationConfig {
  std::uint32_t n = 2;
  std::vector<Prefer> proposals;
  RegisterModel model = RegisterModel::kRegular;
  std::uint64_t max_events = 200;
  Round round_cap = 4;
  std::uint32_t crash_budget = 0;
  std::optional<std::string> search_goal;  // "new_old_inversion"
  std::uint64_t node_budget = 50'000'000;
  bool memoize = true;
  bool all_monitors = false;   // otherwise validity, agreement, bl3_5
  std::size_t max_reports = 8; // traces kept per violation / witness list
  std::function<void(const Trace&, bool complete)> on_leaf;  // optional observer
};

struct ExplorationReport {
  std::uint64_t executions_explored = 0;  // leaves: complete or cut off
  std::uint64_t complete_executions = 0;
  std::uint64_t nodes = 0;
  std::uint64_t memo_hits = 0;
  std::uint64_t truncated = 0;  // branches cut by round_cap or max_events
  std::uint64_t violation_count = 0;
  std::uint64_t witness_count = 0;
  std::vector<std::pair<std::string, Trace>> violations;
  std::vector<std::pair<std::string, Trace>> witnesses;
};

namespace detail {

inline void put(std::string& k, std::uint64_t x) {
  do {
    k.push_back(static_cast<char>((x & 0x7f) | (x > 0x7f ? 0x80 : 0)));
    x >>= 7;
  } while (x != 0);
}

inline void put(std::string& k, RegisterValue v) {
  k.push_back(static_cast<char>(v.prefer));
  put(k, v.round);
}

/// State identity up to sequence numbers. Besides the live state it records
/// what the safety monitors depend on from the past: which (prefer, round)
/// pairs were ever written and which decisions were made.
class StateKey {
 public:
  void note(const TraceEvent& e) {
    if (e.kind == EventKind::kInvokeWrite) {
      written_ |= bit(e.value);
    } else if (e.kind == EventKind::kDecide) {
      decided_ |= bit(e.value);
    }
  }

  std::string encode(const SystemState& st) const {
    std::string k;
    k.reserve(64);
    put(k, written_);
    put(k, decided_);
    put(k, st.crashes());
    for (const auto& p : st.processes()) {
      k.push_back(static_cast<char>(p.phase));
      k.push_back(static_cast<char>(p.site));
      put(k, p.outgoing);
      put(k, p.captured);
      put(k, p.reading.value);
      for (const auto& v : p.partial) {
        if (v) {
          put(k, *v);
        } else {
          k.push_back('\x7f');
        }
      }
    }
    if (st.config().model == RegisterModel::kLinearizable) {
      encode_lin(k, st);
    } else {
      for (const auto& r : st.registers()) {
        put(k, r.current);
        if (r.pending_write) {
          put(k, *r.pending_write);
        } else {
          k.push_back('\x7f');
        }
        for (const auto& pr : r.pending_reads) {
          put(k, pr.reader.value);
          put(k, pr.candidates.size());
          for (auto v : pr.candidates) put(k, v);
        }
        k.push_back('|');
      }
    }
    return k;
  }

 private:
  // Rounds above 20 share a bit; exploration bounds keep rounds small.
  static std::uint64_t bit(RegisterValue v) {
    return std::uint64_t{1} << (static_cast<unsigned>(v.prefer) * 21 + std::min<Round>(v.round, 20));
  }

  static void encode_lin(std::string& k, const SystemState& st) {
    const auto& lin = st.linearization();
    const auto& open = lin.open_ops();
    for (std::size_t i = 0; i < open.size(); ++i) {
      const auto& o = open[i];
      put(k, o.pid.value);
      put(k, o.reg.value);
      k.push_back(static_cast<char>(o.is_write * 4 + o.value_fixed * 2 + o.interval.complete()));
      put(k, o.value);
      for (std::size_t j = 0; j < open.size(); ++j) k.push_back(precedes(open[j].interval, o.interval) ? '1' : '0');
    }
    k.push_back('|');
    for (std::uint32_t r = 0; r < st.n(); ++r) put(k, lin.latest(ProcessId(r)));
    for (const auto& p : st.processes()) {
      if (p.phase != Phase::kAwaitRead) continue;
      if (auto v = lin.committed_read_value(st.pending_op(p.pid))) {
        put(k, p.pid.value);
        put(k, *v);
      }
    }
  }

  std::uint64_t written_ = 0;
  std::uint64_t decided_ = 0;
};

class Explorer {
 public:
  explicit Explorer(const ExplorationConfig& cfg) : cfg_(cfg) {
    sys_.n = cfg.n;
    sys_.proposals = cfg.proposals.empty() ? alternating_proposals(cfg.n) : cfg.proposals;
    sys_.model = cfg.model;
    sys_.adversary = "explorer";
    sys_.max_events = cfg.max_events;
    sys_.crash_budget = cfg.crash_budget;
    sys_.round_cap = cfg.round_cap;
    validate(sys_);
    if (cfg.search_goal && *cfg.search_goal != "new_old_inversion") {
      throw Error(ErrorCode::kConfig, "unknown search goal '" + *cfg.search_goal + "'");
    }
    mode_ = cfg.model == RegisterModel::kLinearizable ? ChoiceMode::kLazy : ChoiceMode::kEager;
  }

  ExplorationReport run() {
    SystemState root(sys_);
    path_.clear();
    dfs(root, StateKey{});
    return std::move(report_);
  }

 private:
  void dfs(const SystemState& st, const StateKey& key) {
    if (++report_.nodes > cfg_.node_budget) {
      throw Error(ErrorCode::kBoundTooLarge,
                  "exploration exceeded the node budget of " + std::to_string(cfg_.node_budget));
    }
    if (st.finished()) {
      leaf(true);
      return;
    }
    if (path_.size() >= cfg_.max_events) {
      ++report_.truncated;
      leaf(false);
      return;
    }
    if (cfg_.memoize) {
      auto [it, fresh] = memo_.try_emplace(key.encode(st), path_.size());
      if (!fresh) {
        if (it->second <= path_.size()) {
          ++report_.memo_hits;
          return;
        }
        it->second = path_.size();
      }
    }
    bool expanded = false;
    for (const auto& c : st.enabled_choices(mode_)) {
      if (c.kind == ChoiceKind::kFireInvoke && cfg_.round_cap != 0) {
        auto w = st.next_write(c.pid);
        if (w && w->round > cfg_.round_cap) {
          ++report_.truncated;
          continue;
        }
      }
      const bool flip = c.kind == ChoiceKind::kFireLocal && st.process(c.pid).phase == Phase::kFlip;
      if (flip) {
        for (Prefer coin : {Prefer::kZero, Prefer::kOne}) expanded |= step(st, key, c, coin);
      } else {
        expanded |= step(st, key, c, std::nullopt);
      }
    }
    if (!expanded) leaf(false);
  }

  bool step(const SystemState& st, const StateKey& key, const ScheduleChoice& c, std::optional<Prefer> coin) {
    SystemState next = st;
    const auto events = next.apply(c, coin);
    StateKey k = key;
    for (const auto& e : events) {
      path_.push_back(e);
      k.note(e);
    }
    if (cfg_.search_goal && !events.empty() && events.back().kind == EventKind::kRespondRead) {
      check_goal(next, events.back());
    }
    dfs(next, k);
    path_.resize(path_.size() - events.size());
    return true;
  }

  /// An inversion needs a read that returned something older than the
  /// newest write invoked on its register, so only such reads trigger the
  /// full scan.
  void check_goal(const SystemState& st, const TraceEvent& read) {
    const auto& reg = st.registers()[read.target.value];
    const RegisterValue newest = reg.pending_write ? *reg.pending_write : reg.current;
    if (st.config().model != RegisterModel::kLinearizable && read.value == newest) return;
    Trace t{sys_, path_};
    auto r = check_new_old_inversion(t, read.target);
    if (!r.found) return;
    ++report_.witness_count;
    if (report_.witnesses.size() < cfg_.max_reports) report_.witnesses.emplace_back(*cfg_.search_goal, std::move(t));
  }

  void leaf(bool complete) {
    ++report_.executions_explored;
    if (complete) ++report_.complete_executions;
    Trace t{sys_, path_};
    if (cfg_.on_leaf) cfg_.on_leaf(t, complete);
    const auto verdicts = cfg_.all_monitors ? run_all_monitors(t) : run_safety_monitors(t);
    for (const auto& v : verdicts) {
      if (!v.violated()) continue;
      ++report_.violation_count;
      if (report_.violations.size() < cfg_.max_reports) report_.violations.emplace_back(v.name, t);
    }
  }

  ExplorationConfig cfg_;
  SystemConfig sys_;
  ChoiceMode mode_ = ChoiceMode::kEager;
  std::vector<TraceEvent> path_;
  std::unordered_map<std::string, std::size_t> memo_;
  ExplorationReport report_;
};

}  // namespace detail

/// Depth-first enumeration of every adversary choice and both outcomes of
/// every coin, within the configured bounds. Choices are visited in sorted
/// order so the report is deterministic.
inline ExplorationReport explore(const ExplorationConfig& cfg) {
  if (cfg.n == 0 || cfg.max_events == 0) throw Error(ErrorCode::kConfig, "n and max_events must be >= 1");
  return detail::Explorer(cfg).run();
}

}  // namespace regcons

#endif  // REGCONS_EXPLORER_HPP_
