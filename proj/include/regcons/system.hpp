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

#ifndef REGCONS_SYSTEM_HPP_
#define REGCONS_SYSTEM_HPP_

#include <algorithm>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "regcons/core.hpp"
#include "regcons/protocol.hpp"
#include "regcons/registers.hpp"

namespace regcons {

enum class ChoiceKind : std::uint8_t {
  kFireInvoke,
  kFireRespond,
  kFireLocal,
  kCommit,
  kCrash,
};

inline std::string_view to_string(ChoiceKind k) {
  switch (k) {
    case ChoiceKind::kFireInvoke: return "FIRE_INVOKE";
    case ChoiceKind::kFireRespond: return "FIRE_RESPOND";
    case ChoiceKind::kFireLocal: return "FIRE_LOCAL";
    case ChoiceKind::kCommit: return "COMMIT_LINEARIZATION";
    case ChoiceKind::kCrash: return "CRASH";
  }
  return "?";
}

/// One adversary decision. `target` is the register for read invocations and
/// commitments; `value` the result of a read response; `op` the operation
/// being committed. A `lazy` response on a linearizable register leaves the
/// operation uncommitted.
struct ScheduleChoice {
  ChoiceKind kind = ChoiceKind::kFireInvoke;
  ProcessId pid;
  ProcessId target;
  RegisterValue value;
  OpId op = 0;
  bool lazy = false;

  static ScheduleChoice invoke(ProcessId p) { return {ChoiceKind::kFireInvoke, p, p, {}, 0, false}; }
  static ScheduleChoice invoke_read(ProcessId p, ProcessId reg) {
    return {ChoiceKind::kFireInvoke, p, reg, {}, 0, false};
  }
  static ScheduleChoice respond(ProcessId p, RegisterValue v = {}, bool lazy = false) {
    return {ChoiceKind::kFireRespond, p, p, v, 0, lazy};
  }
  static ScheduleChoice local(ProcessId p) { return {ChoiceKind::kFireLocal, p, p, {}, 0, false}; }
  static ScheduleChoice commit(ProcessId owner, ProcessId reg, OpId op) {
    return {ChoiceKind::kCommit, owner, reg, {}, op, false};
  }
  static ScheduleChoice crash(ProcessId p) { return {ChoiceKind::kCrash, p, p, {}, 0, false}; }

  friend auto operator<=>(const ScheduleChoice& a, const ScheduleChoice& b) {
    return std::tie(a.pid, a.kind, a.value, a.target, a.op, a.lazy) <=>
           std::tie(b.pid, b.kind, b.value, b.target, b.op, b.lazy);
  }
  friend bool operator==(const ScheduleChoice&, const ScheduleChoice&) = default;
};

inline std::string describe(const ScheduleChoice& c) {
  std::string out(to_string(c.kind));
  out += " p" + std::to_string(c.pid.value);
  if (c.kind == ChoiceKind::kFireInvoke || c.kind == ChoiceKind::kCommit) {
    out += " R" + std::to_string(c.target.value);
  }
  if (c.kind == ChoiceKind::kCommit) out += " op" + std::to_string(c.op);
  if (c.kind == ChoiceKind::kFireRespond) {
    out += ' ';
    out += prefer_char(c.value.prefer);
    out += ',' + std::to_string(c.value.round);
    if (c.lazy) out += " lazy";
  }
  return out;
}

/// Eager: linearizable operations are committed no later than their
/// response. Lazy: responses may leave operations uncommitted and explicit
/// commitments are offered for every committable operation.
enum class ChoiceMode : std::uint8_t { kEager, kLazy };

/// All process states and shared registers of one execution. The trace is
/// kept by the driver; `apply` returns the events each step emits.
class SystemState {
 public:
  explicit SystemState(const SystemConfig& cfg) : config_(cfg) {
    validate(cfg);
    for (std::uint32_t i = 0; i < cfg.n; ++i) {
      processes_.push_back(init_process(ProcessId(i), cfg.proposals[i], cfg.n));
      registers_.emplace_back(ProcessId(i));
    }
    pending_op_.assign(cfg.n, 0);
    if (cfg.model == RegisterModel::kLinearizable) lin_ = Linearization(cfg.n);
  }

  const SystemConfig& config() const noexcept { return config_; }
  std::uint32_t n() const noexcept { return config_.n; }
  const std::vector<ProcessState>& processes() const noexcept { return processes_; }
  const ProcessState& process(ProcessId p) const { return processes_.at(p.value); }
  const std::vector<RegisterState>& registers() const noexcept { return registers_; }
  const Linearization& linearization() const noexcept { return lin_; }
  Seq next_seq() const noexcept { return next_seq_; }
  std::uint32_t crashes() const noexcept { return crashes_; }
  std::uint32_t coins_drawn() const noexcept { return coins_drawn_; }

  /// Invocation seq of `p`'s pending register operation.
  OpId pending_op(ProcessId p) const { return pending_op_.at(p.value); }

  bool finished() const {
    return std::all_of(processes_.begin(), processes_.end(),
                       [](const ProcessState& s) { return s.halted(); });
  }

  /// Value of the next write `p` would invoke, if its next action is a write.
  std::optional<RegisterValue> next_write(ProcessId p) const {
    const auto& s = process(p);
    if (s.phase == Phase::kWrite) return s.outgoing;
    return std::nullopt;
  }

  /// Legal results for `p`'s pending read if it responded now.
  std::vector<RegisterValue> read_options(ProcessId p, ChoiceMode mode = ChoiceMode::kEager) const {
    const auto& s = process(p);
    if (s.phase != Phase::kAwaitRead) return {};
    switch (config_.model) {
      case RegisterModel::kRegular:
        return registers_[s.reading.value].legal_values(p);
      case RegisterModel::kAtomic:
        return {registers_[s.reading.value].current};
      case RegisterModel::kLinearizable: {
        const OpId op = pending_op(p);
        if (auto fixed = lin_.committed_read_value(op)) return {*fixed};
        if (mode == ChoiceMode::kLazy) return lin_.feasible_read_values(op, next_seq_);
        return {lin_.latest(s.reading)};
      }
    }
    return {};
  }

  /// Every choice enabled in this state, sorted by (pid, kind, value).
  std::vector<ScheduleChoice> enabled_choices(ChoiceMode mode = ChoiceMode::kEager) const {
    std::vector<ScheduleChoice> out;
    const bool lin = config_.model == RegisterModel::kLinearizable;
    for (const auto& s : processes_) {
      if (s.halted()) continue;
      switch (s.phase) {
        case Phase::kWrite:
          out.push_back(ScheduleChoice::invoke(s.pid));
          break;
        case Phase::kRead:
          for (std::uint32_t t = 0; t < n(); ++t) {
            if (!s.partial[t]) out.push_back(ScheduleChoice::invoke_read(s.pid, ProcessId(t)));
          }
          break;
        case Phase::kAwaitWrite: {
          const bool lazy = lin && mode == ChoiceMode::kLazy && lin_.is_open(pending_op(s.pid));
          out.push_back(ScheduleChoice::respond(s.pid, s.outgoing, lazy));
          break;
        }
        case Phase::kAwaitRead: {
          const bool lazy = lin && mode == ChoiceMode::kLazy && lin_.is_open(pending_op(s.pid));
          for (auto v : read_options(s.pid, mode)) out.push_back(ScheduleChoice::respond(s.pid, v, lazy));
          break;
        }
        case Phase::kFlip:
        case Phase::kDecide:
          out.push_back(ScheduleChoice::local(s.pid));
          break;
        case Phase::kDecided:
        case Phase::kCrashed:
          break;
      }
      if (crashes_ < config_.crash_budget) out.push_back(ScheduleChoice::crash(s.pid));
    }
    if (lin) {
      for (const auto& op : lin_.open_ops()) {
        if (mode == ChoiceMode::kEager && op.interval.complete()) continue;
        if (lin_.can_commit(op.id)) out.push_back(ScheduleChoice::commit(op.pid, op.reg, op.id));
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Reason `c` is not enabled, or nullopt if it is. Crashing a halted
  /// process is accepted as a no-op.
  std::optional<std::string> why_disabled(const ScheduleChoice& c) const {
    if (c.pid.value >= n()) return "pid out of range";
    const auto& s = process(c.pid);
    if (c.kind == ChoiceKind::kCrash) {
      if (s.halted()) return std::nullopt;
      if (crashes_ >= config_.crash_budget) return "crash budget exhausted";
      return std::nullopt;
    }
    if (c.kind == ChoiceKind::kCommit) {
      if (config_.model != RegisterModel::kLinearizable) return "commitments need the linearizable model";
      return lin_.commit_blocker(c.op);
    }
    if (s.halted()) return "process has halted";
    switch (c.kind) {
      case ChoiceKind::kFireInvoke:
        if (s.phase == Phase::kWrite) return std::nullopt;
        if (s.phase == Phase::kRead) {
          if (c.target.value >= n()) return "read target out of range";
          if (s.partial[c.target.value]) return "register already read in this pass";
          return std::nullopt;
        }
        return "no invocation enabled";
      case ChoiceKind::kFireRespond:
        if (s.phase != Phase::kAwaitWrite && s.phase != Phase::kAwaitRead) return "no pending operation";
        if (c.lazy && config_.model != RegisterModel::kLinearizable) return "lazy response needs linearizable model";
        return std::nullopt;
      case ChoiceKind::kFireLocal:
        if (s.phase == Phase::kFlip || s.phase == Phase::kDecide) return std::nullopt;
        return "no local step enabled";
      default:
        return "unknown choice";
    }
  }

  /// Executes `c`. A flip needs `coin`; other steps ignore it. Returns the
  /// emitted events (empty for commitments and no-op crashes).
  std::vector<TraceEvent> apply(const ScheduleChoice& c, std::optional<Prefer> coin = std::nullopt) {
    if (auto why = why_disabled(c)) {
      throw Error(ErrorCode::kAdversaryFault, describe(c) + ": " + *why);
    }
    std::vector<TraceEvent> out;
    auto& s = processes_[c.pid.value];
    switch (c.kind) {
      case ChoiceKind::kFireInvoke:
        if (s.phase == Phase::kWrite) {
          invoke_write(s, out);
        } else {
          invoke_read(s, c.target, out);
        }
        break;
      case ChoiceKind::kFireRespond:
        if (s.phase == Phase::kAwaitWrite) {
          respond_write(s, c.lazy, out);
        } else {
          respond_read(s, c.value, c.lazy, out);
        }
        break;
      case ChoiceKind::kFireLocal:
        if (s.phase == Phase::kDecide) {
          emit(out, s.pid, EventKind::kDecide, s.pid, s.outgoing, LineSite::kDecide);
          s.phase = Phase::kDecided;
        } else {
          if (!coin || !is_binary(*coin)) {
            throw Error(ErrorCode::kInvalidArgument, "flip step needs a binary coin");
          }
          ++coins_drawn_;
          s.outgoing = {*coin, s.outgoing.round};
          emit(out, s.pid, EventKind::kFlip, s.pid, s.outgoing, LineSite::kCoinWrite);
          s.phase = Phase::kWrite;
          s.site = LineSite::kCoinWrite;
        }
        break;
      case ChoiceKind::kCommit:
        lin_.commit(c.op);
        break;
      case ChoiceKind::kCrash:
        if (s.halted()) break;
        if (s.phase == Phase::kAwaitRead && config_.model != RegisterModel::kLinearizable) {
          registers_[s.reading.value].drop_read(s.pid);
        }
        ++crashes_;
        emit(out, s.pid, EventKind::kCrash, s.pid, RegisterValue::initial(), LineSite::kNone);
        s.phase = Phase::kCrashed;
        break;
    }
    return out;
  }

 private:
  void emit(std::vector<TraceEvent>& out, ProcessId pid, EventKind kind, ProcessId target,
            RegisterValue value, LineSite line) {
    out.push_back({next_seq_++, pid, kind, target, value, line});
  }

  void invoke_write(ProcessState& s, std::vector<TraceEvent>& out) {
    const Seq at = next_seq_;
    emit(out, s.pid, EventKind::kInvokeWrite, s.pid, s.outgoing, s.site);
    pending_op_[s.pid.value] = at;
    auto& reg = registers_[s.pid.value];
    switch (config_.model) {
      case RegisterModel::kAtomic:
        reg.invoke_write(s.outgoing, at);
        reg.respond_write();
        emit(out, s.pid, EventKind::kRespondWrite, s.pid, s.outgoing, s.site);
        begin_pass(s);
        return;
      case RegisterModel::kRegular:
        reg.invoke_write(s.outgoing, at);
        break;
      case RegisterModel::kLinearizable:
        lin_.invoke(at, s.pid, s.pid, true, s.outgoing);
        break;
    }
    s.phase = Phase::kAwaitWrite;
  }

  void respond_write(ProcessState& s, bool lazy, std::vector<TraceEvent>& out) {
    const Seq at = next_seq_;
    if (config_.model == RegisterModel::kLinearizable) {
      const OpId op = pending_op_[s.pid.value];
      if (!lazy && lin_.is_open(op)) lin_.commit(op);
      lin_.respond_write(op, at);
    } else {
      registers_[s.pid.value].respond_write();
    }
    emit(out, s.pid, EventKind::kRespondWrite, s.pid, s.outgoing, s.site);
    begin_pass(s);
  }

  void invoke_read(ProcessState& s, ProcessId target, std::vector<TraceEvent>& out) {
    const Seq at = next_seq_;
    emit(out, s.pid, EventKind::kInvokeRead, target, RegisterValue::initial(), LineSite::kRead);
    pending_op_[s.pid.value] = at;
    s.reading = target;
    switch (config_.model) {
      case RegisterModel::kAtomic: {
        auto& reg = registers_[target.value];
        reg.invoke_read(s.pid, at);
        const RegisterValue v = reg.respond_read(s.pid, {}, RegisterModel::kAtomic);
        emit(out, s.pid, EventKind::kRespondRead, target, v, LineSite::kRead);
        record_read(s, v);
        return;
      }
      case RegisterModel::kRegular:
        registers_[target.value].invoke_read(s.pid, at);
        break;
      case RegisterModel::kLinearizable:
        lin_.invoke(at, s.pid, target, false);
        break;
    }
    s.phase = Phase::kAwaitRead;
  }

  void respond_read(ProcessState& s, RegisterValue choice, bool lazy, std::vector<TraceEvent>& out) {
    const Seq at = next_seq_;
    RegisterValue v;
    if (config_.model == RegisterModel::kLinearizable) {
      const OpId op = pending_op_[s.pid.value];
      if (!lazy && lin_.is_open(op)) lin_.commit(op);
      if (auto fixed = lin_.committed_read_value(op)) {
        if (*fixed != choice) throw Error(ErrorCode::kIllegalChoice, "read value differs from its linearized value");
      }
      lin_.respond_read(op, at, choice);
      v = choice;
    } else {
      v = registers_[s.reading.value].respond_read(s.pid, choice, config_.model);
    }
    emit(out, s.pid, EventKind::kRespondRead, s.reading, v, LineSite::kRead);
    record_read(s, v);
  }

  void record_read(ProcessState& s, RegisterValue v) {
    s.partial[s.reading.value] = v;
    if (s.view_complete()) {
      finish_pass(s);
    } else {
      s.phase = Phase::kRead;
    }
  }

  SystemConfig config_;
  std::vector<ProcessState> processes_;
  std::vector<RegisterState> registers_;
  Linearization lin_;
  std::vector<OpId> pending_op_;
  Seq next_seq_ = 0;
  std::uint32_t crashes_ = 0;
  std::uint32_t coins_drawn_ = 0;
};

}  // namespace regcons

#endif  // REGCONS_SYSTEM_HPP_
