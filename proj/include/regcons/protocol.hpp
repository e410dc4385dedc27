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

// Per-process state machine of the randomized consensus loop:
//
//   R[p] <- (v, 1)
//   loop:
//     read all R[*]; (x, r) <- R[p]
//     if leader and every disagreeing process trails by >= 2: decide x
//     elif the leaders agree on v*:  R[p] <- (v*, r+1)
//     elif x != bot:                 R[p] <- (bot, r)
//     else:                          R[p] <- (flip(), r+1)
//
// Each register access is split into an invocation and a response so an
// adversary can interleave other processes between them.

#ifndef REGCONS_PROTOCOL_HPP_
#define REGCONS_PROTOCOL_HPP_

#include <algorithm>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "regcons/core.hpp"

namespace regcons {

/// Values collected by one pass over all registers, indexed by owner.
using View = std::vector<RegisterValue>;

inline Round max_round(const View& view) {
  Round best = 0;
  for (const auto& v : view) best = std::max(best, v.round);
  return best;
}

/// Processes whose round is maximal in `view`.
inline std::vector<ProcessId> leaders(const View& view) {
  const Round top = max_round(view);
  std::vector<ProcessId> out;
  for (std::uint32_t i = 0; i < view.size(); ++i) {
    if (view[i].round == top) out.emplace_back(i);
  }
  return out;
}

/// The common non-bot preference of all leaders, if there is one.
inline std::optional<Prefer> leaders_agree(const View& view) {
  std::optional<Prefer> common;
  for (ProcessId l : leaders(view)) {
    const Prefer p = view[l.value].prefer;
    if (p == Prefer::kBot) return std::nullopt;
    if (common && *common != p) return std::nullopt;
    common = p;
  }
  return common;
}

struct DecideStep {
  Prefer value;
  Round round;
  friend bool operator==(const DecideStep&, const DecideStep&) = default;
};

struct WriteStep {
  RegisterValue value;
  LineSite site;
  friend bool operator==(const WriteStep&, const WriteStep&) = default;
};

/// Write (flip(), round); the coin is drawn when the step executes.
struct FlipStep {
  Round round;
  friend bool operator==(const FlipStep&, const FlipStep&) = default;
};

using Step = std::variant<DecideStep, WriteStep, FlipStep>;

/// What process `self` does after reading `view`. A process that holds bot
/// never agrees with anyone, so a paused process within one round blocks a
/// decision.
inline Step evaluate(ProcessId self, const View& view) {
  if (self.value >= view.size()) {
    throw Error(ErrorCode::kInvalidArgument, "view does not contain the evaluating process");
  }
  const RegisterValue mine = view[self.value];
  if (!mine.valid() || mine.round == 0) {
    throw Error(ErrorCode::kInvalidArgument, "evaluating process has not written yet");
  }
  const Round top = max_round(view);
  if (mine.round == top && mine.prefer != Prefer::kBot) {
    const bool blocked = std::any_of(view.begin(), view.end(), [&](const RegisterValue& other) {
      return other.prefer != mine.prefer && mine.round < other.round + 2;
    });
    if (!blocked) return DecideStep{mine.prefer, mine.round};
  }
  if (auto agreed = leaders_agree(view)) {
    return WriteStep{{*agreed, mine.round + 1}, LineSite::kAgreeWrite};
  }
  if (mine.prefer != Prefer::kBot) {
    return WriteStep{{Prefer::kBot, mine.round}, LineSite::kPauseWrite};
  }
  return FlipStep{mine.round + 1};
}

/// Next register to read under `order`, skipping ones already in `have`.
inline std::optional<ProcessId> next_pending_read_target(std::span<const std::optional<RegisterValue>> have,
                                                         std::span<const ProcessId> order) {
  for (ProcessId p : order) {
    if (p.value < have.size() && !have[p.value]) return p;
  }
  return std::nullopt;
}

enum class Phase : std::uint8_t {
  kWrite,      // next action invokes `outgoing`
  kAwaitWrite, // write of `outgoing` is pending
  kRead,       // next action invokes a read of some unread register
  kAwaitRead,  // read of `reading` is pending
  kFlip,       // next action flips the coin for round `outgoing.round`
  kDecide,     // next action decides `outgoing.prefer`
  kDecided,
  kCrashed,
};

inline std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::kWrite: return "write";
    case Phase::kAwaitWrite: return "await_write";
    case Phase::kRead: return "read";
    case Phase::kAwaitRead: return "await_read";
    case Phase::kFlip: return "flip";
    case Phase::kDecide: return "decide";
    case Phase::kDecided: return "decided";
    case Phase::kCrashed: return "crashed";
  }
  return "?";
}

struct ProcessState {
  ProcessId pid;
  Prefer proposal = Prefer::kZero;
  Phase phase = Phase::kWrite;
  RegisterValue outgoing;  // value to write, decision, or flip round
  LineSite site = LineSite::kProposeWrite;
  std::vector<std::optional<RegisterValue>> partial;  // current pass over R[*]
  ProcessId reading;
  RegisterValue captured;  // (x, r) of the last completed pass
  std::uint32_t iteration = 0;

  bool halted() const noexcept { return phase == Phase::kDecided || phase == Phase::kCrashed; }

  bool view_complete() const {
    return std::all_of(partial.begin(), partial.end(), [](const auto& v) { return v.has_value(); });
  }

  View view() const {
    View out;
    out.reserve(partial.size());
    for (const auto& v : partial) {
      if (!v) throw Error(ErrorCode::kInvalidArgument, "view is incomplete");
      out.push_back(*v);
    }
    return out;
  }

  friend bool operator==(const ProcessState&, const ProcessState&) = default;
};

/// Initial state of process `pid` proposing `proposal` among `n` processes.
inline ProcessState init_process(ProcessId pid, Prefer proposal, std::uint32_t n) {
  if (!is_binary(proposal)) throw Error(ErrorCode::kInvalidArgument, "proposal must be 0 or 1");
  if (pid.value >= n) throw Error(ErrorCode::kInvalidArgument, "pid out of range");
  ProcessState s;
  s.pid = pid;
  s.proposal = proposal;
  s.phase = Phase::kWrite;
  s.outgoing = {proposal, 1};
  s.site = LineSite::kProposeWrite;
  s.partial.assign(n, std::nullopt);
  return s;
}

/// A pass over the registers has finished: capture (x, r) and plan the step.
inline void finish_pass(ProcessState& s) {
  const View view = s.view();
  s.captured = view[s.pid.value];
  const Step step = evaluate(s.pid, view);
  if (const auto* d = std::get_if<DecideStep>(&step)) {
    s.phase = Phase::kDecide;
    s.outgoing = {d->value, d->round};
    s.site = LineSite::kDecide;
  } else if (const auto* w = std::get_if<WriteStep>(&step)) {
    s.phase = Phase::kWrite;
    s.outgoing = w->value;
    s.site = w->site;
  } else {
    s.phase = Phase::kFlip;
    s.outgoing = {Prefer::kBot, std::get<FlipStep>(step).round};
    s.site = LineSite::kCoinWrite;
  }
}

/// Starts the next pass over the registers after a write completes.
inline void begin_pass(ProcessState& s) {
  std::fill(s.partial.begin(), s.partial.end(), std::nullopt);
  s.phase = Phase::kRead;
  ++s.iteration;
}

}  // namespace regcons

#endif  // REGCONS_PROTOCOL_HPP_
