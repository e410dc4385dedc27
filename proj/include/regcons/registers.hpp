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

#ifndef REGCONS_REGISTERS_HPP_
#define REGCONS_REGISTERS_HPP_

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "regcons/core.hpp"

namespace regcons {

// ---------------------------------------------------------------------------
// History-based semantics
// ---------------------------------------------------------------------------

struct WriteRecord {
  RegisterValue value;
  OpInterval interval;
  std::uint32_t writer_seq = 0;
};

namespace detail {

inline void push_unique(std::vector<RegisterValue>& out, RegisterValue v) {
  if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
}

inline void check_sequential_writer(std::span<const WriteRecord> writes) {
  for (std::size_t i = 1; i < writes.size(); ++i) {
    const auto& prev = writes[i - 1].interval;
    const auto& cur = writes[i].interval;
    if (!prev.complete() || prev.respond >= cur.invoke) {
      throw Error(ErrorCode::kInvalidArgument,
                  "register writes overlap; the single writer must be sequential");
    }
  }
}

}  // namespace detail

/// Values a read may return on a regular register whose writes are `writes`
/// (ordered by invocation). `read.respond` is the response being assigned
/// now; writes invoked after it are ignored.
///
/// The result holds the value of the last write that precedes the read (or
/// `initial` when none does) followed by the values of every concurrent
/// write, oldest first. It is never empty.
inline std::vector<RegisterValue> legal_read_values(std::span<const WriteRecord> writes,
                                                    const OpInterval& read,
                                                    RegisterValue initial = RegisterValue::initial()) {
  if (!read.complete()) {
    throw Error(ErrorCode::kInvalidArgument, "legal_read_values needs the read's response time");
  }
  detail::check_sequential_writer(writes);
  // Invoked before the response: a prefix, since invocations are ordered.
  auto visible_end = std::partition_point(writes.begin(), writes.end(), [&](const WriteRecord& w) {
    return w.interval.invoke < read.respond;
  });
  // Completed before the read began: also a prefix (the writer is sequential).
  auto preceding_end = std::partition_point(writes.begin(), visible_end, [&](const WriteRecord& w) {
    return precedes(w.interval, read);
  });
  std::vector<RegisterValue> out;
  out.push_back(preceding_end == writes.begin() ? initial : std::prev(preceding_end)->value);
  for (auto it = preceding_end; it != visible_end; ++it) detail::push_unique(out, it->value);
  return out;
}

// ---------------------------------------------------------------------------
// Operational register (atomic / regular)
// ---------------------------------------------------------------------------

struct PendingRead {
  ProcessId reader;
  Seq invoke = 0;
  /// Values the read may still return: the register's completed value at
  /// invocation, plus every write that was pending then or invoked since.
  std::vector<RegisterValue> candidates;

  friend bool operator==(const PendingRead&, const PendingRead&) = default;
};

/// State of one SWMR register as the simulator needs it. Rather than the full
/// write history, it keeps just enough to resolve reads: the last completed
/// value, the pending write, and per pending read the legal candidates seen so
/// far. `check_regular` recomputes legality from the full history instead.
struct RegisterState {
  ProcessId owner;
  RegisterValue initial = RegisterValue::initial();
  RegisterValue current = RegisterValue::initial();
  std::optional<RegisterValue> pending_write;
  Seq pending_write_invoke = 0;
  std::uint32_t writes_invoked = 0;
  std::vector<PendingRead> pending_reads;  // sorted by reader, one per reader

  RegisterState() = default;
  explicit RegisterState(ProcessId own) : owner(own) {}

  void invoke_write(RegisterValue value, Seq seq) {
    if (pending_write) {
      throw Error(ErrorCode::kInvalidArgument, "owner already has a pending write");
    }
    pending_write = value;
    pending_write_invoke = seq;
    ++writes_invoked;
    for (auto& r : pending_reads) detail::push_unique(r.candidates, value);
  }

  void respond_write() {
    if (!pending_write) throw Error(ErrorCode::kInvalidArgument, "no pending write");
    current = *pending_write;
    pending_write.reset();
  }

  void invoke_read(ProcessId reader, Seq seq) {
    auto it = find_read(reader);
    if (it != pending_reads.end() && it->reader == reader) {
      throw Error(ErrorCode::kInvalidArgument, "reader already has a pending read");
    }
    PendingRead r{reader, seq, {current}};
    if (pending_write) detail::push_unique(r.candidates, *pending_write);
    pending_reads.insert(it, std::move(r));
  }

  const PendingRead* pending_read(ProcessId reader) const {
    auto it = std::lower_bound(pending_reads.begin(), pending_reads.end(), reader,
                               [](const PendingRead& r, ProcessId p) { return r.reader < p; });
    return it != pending_reads.end() && it->reader == reader ? &*it : nullptr;
  }

  /// Legal set for `reader`'s pending read if it responded now.
  const std::vector<RegisterValue>& legal_values(ProcessId reader) const {
    const auto* r = pending_read(reader);
    if (!r) throw Error(ErrorCode::kInvalidArgument, "no pending read for reader");
    return r->candidates;
  }

  /// Completes `reader`'s read. Regular registers return `choice`, which must
  /// be legal; atomic registers ignore it and return the current value.
  RegisterValue respond_read(ProcessId reader, RegisterValue choice, RegisterModel model) {
    auto it = find_read(reader);
    if (it == pending_reads.end() || it->reader != reader) {
      throw Error(ErrorCode::kInvalidArgument, "no pending read for reader");
    }
    RegisterValue out = current;
    if (model == RegisterModel::kRegular) {
      const auto& legal = it->candidates;
      if (std::find(legal.begin(), legal.end(), choice) == legal.end()) {
        throw Error(ErrorCode::kIllegalChoice, "read value outside the legal set");
      }
      out = choice;
    } else if (model == RegisterModel::kAtomic && pending_write) {
      // Atomic operations are instantaneous; a pending write is a model bug.
      throw Error(ErrorCode::kInvalidArgument, "atomic register with pending write");
    }
    pending_reads.erase(it);
    return out;
  }

  void drop_read(ProcessId reader) {
    auto it = find_read(reader);
    if (it != pending_reads.end() && it->reader == reader) pending_reads.erase(it);
  }

  friend bool operator==(const RegisterState&, const RegisterState&) = default;

 private:
  std::vector<PendingRead>::iterator find_read(ProcessId reader) {
    return std::lower_bound(pending_reads.begin(), pending_reads.end(), reader,
                            [](const PendingRead& r, ProcessId p) { return r.reader < p; });
  }
};

// ---------------------------------------------------------------------------
// Linearizable registers with a lazily committed linearization order
// ---------------------------------------------------------------------------

/// Operations are identified by the sequence number of their invocation.
using OpId = Seq;

struct LinOp {
  OpId id = 0;
  ProcessId pid;
  ProcessId reg;
  bool is_write = false;
  RegisterValue value;       // written value, or the read's result once fixed
  bool value_fixed = false;  // always true for writes
  OpInterval interval;

  friend bool operator==(const LinOp&, const LinOp&) = default;
};

struct CommittedOp {
  OpId id = 0;
  ProcessId pid;
  ProcessId reg;
  bool is_write = false;
  RegisterValue value;

  friend bool operator==(const CommittedOp&, const CommittedOp&) = default;
};

/// One global linearization order across all registers, built by appending
/// commitments. An operation may respond before it is committed; the order
/// stays consistent as long as some completion of it exists that respects
/// real-time precedence and read values, which every mutation re-checks.
class Linearization {
 public:
  Linearization() = default;
  explicit Linearization(std::uint32_t registers)
      : latest_(registers, RegisterValue::initial()) {}

  void invoke(OpId id, ProcessId pid, ProcessId reg, bool is_write, RegisterValue value = {}) {
    check_reg(reg);
    if (find(id)) throw Error(ErrorCode::kInvalidArgument, "duplicate operation id");
    LinOp op{id, pid, reg, is_write, is_write ? value : RegisterValue{}, is_write, {id, kPending}};
    open_.push_back(op);
  }

  /// Marks a write complete without committing it. Always feasible: a
  /// completed write can be linearized right after everything else.
  void respond_write(OpId id, Seq at) {
    LinOp* op = mutable_find(id);
    if (op && (!op->is_write || op->interval.complete())) op = nullptr;
    if (!op) {
      if (committed_respond(id, at)) return;
      throw Error(ErrorCode::kInvalidArgument, "no pending write with that id");
    }
    op->interval.respond = at;
  }

  /// Completes a read with `value`. A committed read must return its fixed
  /// value; an uncommitted one must leave the order completable.
  void respond_read(OpId id, Seq at, RegisterValue value) {
    LinOp* op = mutable_find(id);
    if (!op) {
      auto it = committed_reads_.find(id);
      if (it == committed_reads_.end()) {
        throw Error(ErrorCode::kInvalidArgument, "no pending read with that id");
      }
      if (it->second != value) {
        throw Error(ErrorCode::kIllegalChoice, "read value differs from its linearized value");
      }
      committed_reads_.erase(it);
      return;
    }
    if (op->is_write || op->interval.complete()) {
      throw Error(ErrorCode::kInvalidArgument, "no pending read with that id");
    }
    LinOp saved = *op;
    op->interval.respond = at;
    op->value = value;
    op->value_fixed = true;
    if (!feasible(open_, latest_)) {
      *op = saved;
      throw Error(ErrorCode::kIllegalChoice, "read value admits no linearization");
    }
  }

  /// Values an uncommitted pending read could return if it responded now.
  std::vector<RegisterValue> feasible_read_values(OpId id, Seq at) const {
    const LinOp* op = find(id);
    if (!op) {
      auto it = committed_reads_.find(id);
      if (it != committed_reads_.end()) return {it->second};
      throw Error(ErrorCode::kInvalidArgument, "no pending read with that id");
    }
    std::vector<RegisterValue> candidates{latest_[op->reg.value]};
    for (const auto& o : open_) {
      if (o.is_write && o.reg == op->reg) detail::push_unique(candidates, o.value);
    }
    std::vector<RegisterValue> out;
    std::vector<LinOp> probe = open_;
    LinOp& p = probe[static_cast<std::size_t>(op - open_.data())];
    p.interval.respond = at;
    p.value_fixed = true;
    for (auto v : candidates) {
      p.value = v;
      if (feasible(probe, latest_)) out.push_back(v);
    }
    return out;
  }

  /// Why `id` cannot be committed next, or nullopt if it can.
  std::optional<std::string> commit_blocker(OpId id) const {
    const LinOp* op = find(id);
    if (!op) return "operation is unknown or already committed";
    for (const auto& o : open_) {
      if (o.id != id && precedes(o.interval, op->interval)) {
        return "operation " + std::to_string(o.id) + " precedes it in real time";
      }
    }
    if (!op->is_write && op->value_fixed && op->value != latest_[op->reg.value]) {
      return "read result does not match the latest committed write";
    }
    std::vector<LinOp> rest;
    rest.reserve(open_.size());
    for (const auto& o : open_) {
      if (o.id != id) rest.push_back(o);
    }
    std::vector<RegisterValue> latest = latest_;
    if (op->is_write) latest[op->reg.value] = op->value;
    if (!feasible(rest, latest)) return "no completion of the order remains";
    return std::nullopt;
  }

  bool can_commit(OpId id) const { return !commit_blocker(id).has_value(); }

  /// Appends `id` to the linearization order.
  void commit(OpId id) {
    if (auto why = commit_blocker(id)) throw Error(ErrorCode::kOrderViolation, *why);
    apply_commit(id);
  }

  bool is_committed(OpId id) const { return find(id) == nullptr && known_.contains(id); }
  bool is_open(OpId id) const { return find(id) != nullptr; }

  const std::vector<CommittedOp>& order() const noexcept { return order_; }
  const std::vector<LinOp>& open_ops() const noexcept { return open_; }
  RegisterValue latest(ProcessId reg) const { return latest_.at(reg.value); }

  /// Uncommitted ops that already responded; eager adversaries keep this empty.
  std::size_t responded_uncommitted() const {
    return static_cast<std::size_t>(std::count_if(open_.begin(), open_.end(), [](const LinOp& o) {
      return o.interval.complete();
    }));
  }

  /// Result a committed-but-unresponded read will return.
  std::optional<RegisterValue> committed_read_value(OpId id) const {
    auto it = committed_reads_.find(id);
    if (it == committed_reads_.end()) return std::nullopt;
    return it->second;
  }

  /// Test hook: records a response without the feasibility check, so
  /// histories that are already inconsistent can be constructed.
  void force_respond(OpId id, Seq at) {
    LinOp* op = mutable_find(id);
    if (!op) throw Error(ErrorCode::kInvalidArgument, "unknown op");
    op->interval.respond = at;
  }

  friend bool operator==(const Linearization&, const Linearization&) = default;

 private:
  const LinOp* find(OpId id) const {
    auto it = std::find_if(open_.begin(), open_.end(), [&](const LinOp& o) { return o.id == id; });
    return it == open_.end() ? nullptr : &*it;
  }
  LinOp* mutable_find(OpId id) {
    auto it = std::find_if(open_.begin(), open_.end(), [&](const LinOp& o) { return o.id == id; });
    return it == open_.end() ? nullptr : &*it;
  }

  void check_reg(ProcessId reg) const {
    if (reg.value >= latest_.size()) throw Error(ErrorCode::kInvalidArgument, "register out of range");
  }

  bool committed_respond(OpId id, Seq) {
    // Writes committed before responding need no bookkeeping.
    return pending_committed_writes_.erase(id) > 0;
  }

  void apply_commit(OpId id) {
    auto it = std::find_if(open_.begin(), open_.end(), [&](const LinOp& o) { return o.id == id; });
    LinOp op = *it;
    open_.erase(it);
    known_.insert(id);
    if (op.is_write) {
      latest_[op.reg.value] = op.value;
      if (!op.interval.complete()) pending_committed_writes_.insert(id);
    } else {
      op.value = latest_[op.reg.value];
      if (!op.interval.complete()) committed_reads_[id] = op.value;
    }
    order_.push_back({op.id, op.pid, op.reg, op.is_write, op.value});
  }

  /// Does some ordering of `open` extend the committed order? Every responded
  /// op must be placed; pending writes may be placed when a read needs them;
  /// pending reads are left for later.
  static bool feasible(const std::vector<LinOp>& open, const std::vector<RegisterValue>& latest) {
    const std::size_t k = open.size();
    std::uint64_t required = 0;
    for (std::size_t i = 0; i < k && i < 64; ++i) {
      if (open[i].interval.complete()) required |= std::uint64_t{1} << i;
    }
    if (required == 0) return true;
    if (k > 63) throw Error(ErrorCode::kBoundTooLarge, "too many uncommitted operations");
    std::vector<std::uint64_t> preds(k, 0);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        if (i != j && precedes(open[j].interval, open[i].interval)) preds[i] |= std::uint64_t{1} << j;
      }
    }
    std::unordered_set<std::uint64_t> seen;
    return search(open, latest, 0, required, preds, seen);
  }

  static bool search(const std::vector<LinOp>& open, const std::vector<RegisterValue>& latest,
                     std::uint64_t placed, std::uint64_t required,
                     const std::vector<std::uint64_t>& preds, std::unordered_set<std::uint64_t>& seen) {
    if ((placed & required) == required) return true;
    if (!seen.insert(placed).second) return false;
    for (std::size_t i = 0; i < open.size(); ++i) {
      const std::uint64_t bit = std::uint64_t{1} << i;
      if (placed & bit) continue;
      const LinOp& op = open[i];
      if (!op.interval.complete() && !op.is_write) continue;
      if ((preds[i] & placed) != preds[i]) continue;
      if (!op.is_write && op.value != value_after(open, latest, op.reg, placed)) continue;
      if (search(open, latest, placed | bit, required, preds, seen)) return true;
    }
    return false;
  }

  static RegisterValue value_after(const std::vector<LinOp>& open, const std::vector<RegisterValue>& latest,
                                   ProcessId reg, std::uint64_t placed) {
    // Writes to one register are placed in invocation order (the owner is
    // sequential), so the latest placed one has the largest id.
    const LinOp* best = nullptr;
    for (std::size_t i = 0; i < open.size(); ++i) {
      if (!(placed & (std::uint64_t{1} << i))) continue;
      const LinOp& op = open[i];
      if (op.is_write && op.reg == reg && (!best || op.id > best->id)) best = &op;
    }
    return best ? best->value : latest[reg.value];
  }

  std::vector<RegisterValue> latest_;
  std::vector<LinOp> open_;
  std::vector<CommittedOp> order_;
  std::unordered_set<OpId> known_;
  std::unordered_set<OpId> pending_committed_writes_;
  std::map<OpId, RegisterValue> committed_reads_;
};

// ---------------------------------------------------------------------------
// Post-hoc regularity oracle
// ---------------------------------------------------------------------------

/// Rebuilds the write history of `reg` from `trace` and checks every
/// completed read of it against `legal_read_values`.
inline Verdict check_regular(const Trace& trace, ProcessId reg) {
  const std::string name = "regular[" + std::to_string(reg.value) + "]";
  std::vector<WriteRecord> writes;
  struct Read {
    OpInterval interval;
    RegisterValue value;
  };
  std::map<std::uint32_t, Seq> open_reads;
  std::vector<Read> reads;
  for (const auto& e : trace.events) {
    if (e.target != reg) continue;
    switch (e.kind) {
      case EventKind::kInvokeWrite:
        writes.push_back({e.value, {e.seq, kPending}, static_cast<std::uint32_t>(writes.size())});
        break;
      case EventKind::kRespondWrite:
        if (!writes.empty() && !writes.back().interval.complete()) writes.back().interval.respond = e.seq;
        break;
      case EventKind::kInvokeRead:
        open_reads[e.pid.value] = e.seq;
        break;
      case EventKind::kRespondRead: {
        auto it = open_reads.find(e.pid.value);
        if (it == open_reads.end()) {
          return Verdict::violation(name, {e.seq}, "read response without invocation");
        }
        reads.push_back({{it->second, e.seq}, e.value});
        open_reads.erase(it);
        break;
      }
      default:
        break;
    }
  }
  for (const auto& r : reads) {
    auto legal = legal_read_values(writes, r.interval);
    if (std::find(legal.begin(), legal.end(), r.value) == legal.end()) {
      return Verdict::violation(name, {r.interval.respond}, "read returned a value no write explains");
    }
  }
  if (reads.empty()) return Verdict::vacuous(name, "no completed reads");
  return Verdict::pass(name);
}

/// check_regular over every register, folded into one verdict.
inline Verdict check_regular_all(const Trace& trace) {
  bool any_reads = false;
  for (std::uint32_t i = 0; i < trace.config.n; ++i) {
    Verdict v = check_regular(trace, ProcessId(i));
    if (v.violated()) {
      v.name = "regular";
      v.note = "register " + std::to_string(i) + ": " + v.note;
      return v;
    }
    any_reads |= v.status == Status::kPass;
  }
  return any_reads ? Verdict::pass("regular") : Verdict::vacuous("regular", "no completed reads");
}

}  // namespace regcons

#endif  // REGCONS_REGISTERS_HPP_
