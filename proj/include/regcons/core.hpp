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

#ifndef REGCONS_CORE_HPP_
#define REGCONS_CORE_HPP_

#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace regcons {

enum class ErrorCode : std::uint8_t {
  kInvalidArgument,
  kIllegalChoice,
  kOrderViolation,
  kAdversaryFault,
  kScenarioBroken,
  kBoundTooLarge,
  kParse,
  kConfig,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::kIllegalChoice: return "ILLEGAL_CHOICE";
    case ErrorCode::kOrderViolation: return "ORDER_VIOLATION";
    case ErrorCode::kAdversaryFault: return "ADVERSARY_FAULT";
    case ErrorCode::kScenarioBroken: return "SCENARIO_BROKEN";
    case ErrorCode::kBoundTooLarge: return "BOUND_TOO_LARGE";
    case ErrorCode::kParse: return "PARSE";
    case ErrorCode::kConfig: return "CONFIG";
  }
  return "UNKNOWN";
}

/// Every failure in the library is reported through this exception; `code()`
/// identifies the contract that was broken.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// ---------------------------------------------------------------------------
// Register contents
// ---------------------------------------------------------------------------

/// Preference field of a register: a binary value or the "paused" marker.
enum class Prefer : std::uint8_t { kZero = 0, kOne = 1, kBot = 2 };

inline constexpr bool is_binary(Prefer p) noexcept { return p != Prefer::kBot; }

inline Prefer complement(Prefer v) {
  if (v == Prefer::kBot) {
    throw Error(ErrorCode::kInvalidArgument, "complement of BOT is undefined");
  }
  return v == Prefer::kZero ? Prefer::kOne : Prefer::kZero;
}

inline constexpr Prefer prefer_of(int bit) noexcept {
  return bit == 0 ? Prefer::kZero : Prefer::kOne;
}

inline char prefer_char(Prefer p) noexcept {
  switch (p) {
    case Prefer::kZero: return '0';
    case Prefer::kOne: return '1';
    case Prefer::kBot: return 'B';
  }
  return '?';
}

using Round = std::uint32_t;

/// The (prefer, round) pair stored in each single-writer register.
struct RegisterValue {
  Prefer prefer = Prefer::kBot;
  Round round = 0;

  static constexpr RegisterValue initial() noexcept { return {Prefer::kBot, 0}; }

  /// Round 0 is reserved for the initial value.
  constexpr bool valid() const noexcept {
    return round > 0 || prefer == Prefer::kBot;
  }

  friend constexpr auto operator<=>(const RegisterValue&,
                                    const RegisterValue&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const RegisterValue& v) {
  return os << '(' << prefer_char(v.prefer) << ',' << v.round << ')';
}

/// Process identifier in [0, n).
struct ProcessId {
  std::uint32_t value = 0;

  constexpr explicit ProcessId(std::uint32_t v = 0) noexcept : value(v) {}
  friend constexpr auto operator<=>(const ProcessId&, const ProcessId&) = default;
};

inline std::ostream& operator<<(std::ostream& os, ProcessId pid) {
  return os << 'p' << pid.value;
}

// ---------------------------------------------------------------------------
// Operation intervals
// ---------------------------------------------------------------------------

/// Global logical clock: one trace event per tick.
using Seq = std::uint64_t;

inline constexpr Seq kPending = std::numeric_limits<Seq>::max();

struct OpInterval {
  Seq invoke = 0;
  Seq respond = kPending;

  constexpr bool complete() const noexcept { return respond != kPending; }
  friend constexpr bool operator==(const OpInterval&, const OpInterval&) = default;
};

/// `a` precedes `b` iff `a` responded before `b` was invoked.
inline constexpr bool precedes(const OpInterval& a, const OpInterval& b) noexcept {
  return a.complete() && a.respond < b.invoke;
}

inline constexpr bool concurrent(const OpInterval& a, const OpInterval& b) noexcept {
  return !precedes(a, b) && !precedes(b, a);
}

// ---------------------------------------------------------------------------
// Trace events
// ---------------------------------------------------------------------------

enum class EventKind : std::uint8_t {
  kInvokeWrite,
  kRespondWrite,
  kInvokeRead,
  kRespondRead,
  kFlip,
  kDecide,
  kCrash,
};

/// Program location that produced an event. Write sites follow the four
/// write statements of the consensus loop.
enum class LineSite : std::uint8_t {
  kProposeWrite,  // W<v,1>
  kAgreeWrite,    // W<v*,r+1>
  kPauseWrite,    // W<bot,r>
  kCoinWrite,     // W<flip(),r+1>
  kRead,
  kDecide,
  kNone,
};

inline std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::kInvokeWrite: return "INVOKE_WRITE";
    case EventKind::kRespondWrite: return "RESPOND_WRITE";
    case EventKind::kInvokeRead: return "INVOKE_READ";
    case EventKind::kRespondRead: return "RESPOND_READ";
    case EventKind::kFlip: return "FLIP";
    case EventKind::kDecide: return "DECIDE";
    case EventKind::kCrash: return "CRASH";
  }
  return "?";
}

inline std::string_view to_string(LineSite s) {
  switch (s) {
    case LineSite::kProposeWrite: return "W<v,1>";
    case LineSite::kAgreeWrite: return "W<v*,r+1>";
    case LineSite::kPauseWrite: return "W<bot,r>";
    case LineSite::kCoinWrite: return "W<flip,r+1>";
    case LineSite::kRead: return "READ";
    case LineSite::kDecide: return "DECIDE";
    case LineSite::kNone: return "NONE";
  }
  return "?";
}

struct TraceEvent {
  Seq seq = 0;
  ProcessId pid;
  EventKind kind = EventKind::kCrash;
  ProcessId target;  // register owner; the acting process for local events
  RegisterValue value;
  LineSite line = LineSite::kNone;

  bool is_write_invoke() const noexcept { return kind == EventKind::kInvokeWrite; }
  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

enum class RegisterModel : std::uint8_t { kAtomic, kRegular, kLinearizable };

inline std::string_view to_string(RegisterModel m) {
  switch (m) {
    case RegisterModel::kAtomic: return "atomic";
    case RegisterModel::kRegular: return "regular";
    case RegisterModel::kLinearizable: return "linearizable";
  }
  return "?";
}

inline RegisterModel parse_model(std::string_view name) {
  if (name == "atomic") return RegisterModel::kAtomic;
  if (name == "regular") return RegisterModel::kRegular;
  if (name == "linearizable") return RegisterModel::kLinearizable;
  throw Error(ErrorCode::kConfig, "unknown register model '" + std::string(name) + "'");
}

/// Parameters of one simulated execution. Serialized in the trace header so a
/// trace file is self-describing and replayable.
struct SystemConfig {
  std::uint32_t n = 2;
  std::vector<Prefer> proposals;  // size n, binary values only
  RegisterModel model = RegisterModel::kRegular;
  std::string adversary = "round_robin";
  std::uint64_t seed = 0;
  std::uint64_t max_events = 100000;
  std::uint32_t crash_budget = 0;
  Round round_cap = 0;  // 0 = unbounded

  friend bool operator==(const SystemConfig&, const SystemConfig&) = default;
};

inline void validate(const SystemConfig& cfg) {
  if (cfg.n == 0) throw Error(ErrorCode::kConfig, "n must be >= 1");
  if (cfg.proposals.size() != cfg.n) {
    throw Error(ErrorCode::kConfig, "expected " + std::to_string(cfg.n) +
                                        " proposals, got " +
                                        std::to_string(cfg.proposals.size()));
  }
  for (Prefer p : cfg.proposals) {
    if (!is_binary(p)) throw Error(ErrorCode::kConfig, "proposals must be 0 or 1");
  }
  if (cfg.max_events == 0) throw Error(ErrorCode::kConfig, "max_events must be >= 1");
  if (cfg.crash_budget > cfg.n) {
    throw Error(ErrorCode::kConfig, "crash_budget exceeds n");
  }
}

/// Default proposal vector: alternating 0,1,0,... so both values are present
/// whenever n >= 2.
inline std::vector<Prefer> alternating_proposals(std::uint32_t n) {
  std::vector<Prefer> out;
  out.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) out.push_back(prefer_of(static_cast<int>(i % 2)));
  return out;
}

struct Trace {
  SystemConfig config;
  std::vector<TraceEvent> events;

  friend bool operator==(const Trace&, const Trace&) = default;
};

// ---------------------------------------------------------------------------
// Monitor results
// ---------------------------------------------------------------------------

enum class Status : std::uint8_t { kPass, kViolation, kVacuous };

inline std::string_view to_string(Status s) {
  switch (s) {
    case Status::kPass: return "PASS";
    case Status::kViolation: return "VIOLATION";
    case Status::kVacuous: return "VACUOUS";
  }
  return "?";
}

/// A VIOLATION always carries at least one witness event index.
struct Verdict {
  std::string name;
  Status status = Status::kPass;
  std::vector<Seq> witness;
  std::string note;

  static Verdict pass(std::string name, std::string note = {}) {
    return {std::move(name), Status::kPass, {}, std::move(note)};
  }
  static Verdict vacuous(std::string name, std::string note = {}) {
    return {std::move(name), Status::kVacuous, {}, std::move(note)};
  }
  static Verdict violation(std::string name, std::vector<Seq> witness, std::string note) {
    if (witness.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "violation of " + name + " without witness");
    }
    return {std::move(name), Status::kViolation, std::move(witness), std::move(note)};
  }

  bool violated() const noexcept { return status == Status::kViolation; }
};

}  // namespace regcons

template <>
struct std::hash<regcons::RegisterValue> {
  std::size_t operator()(const regcons::RegisterValue& v) const noexcept {
    return (static_cast<std::size_t>(v.round) << 2) ^ static_cast<std::size_t>(v.prefer);
  }
};

#endif  // REGCONS_CORE_HPP_
