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

#ifndef REGCONS_HARNESS_HPP_
#define REGCONS_HARNESS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

#include "regcons/adversary.hpp"
#include "regcons/core.hpp"
#include "regcons/monitors.hpp"
#include "regcons/system.hpp"
#include "regcons/trace_io.hpp"

namespace regcons {

// ---------------------------------------------------------------------------
// Coins
// ---------------------------------------------------------------------------

/// Draws the outcome of a flip when, and only when, the flip step fires.
class CoinSource {
 public:
  virtual ~CoinSource() = default;
  virtual Prefer flip(std::span<const TraceEvent> trace, ProcessId p, Round round) = 0;
};

class FairCoin : public CoinSource {
 public:
  explicit FairCoin(std::uint64_t seed) : rng_(seed) {}
  Prefer flip(std::span<const TraceEvent>, ProcessId, Round) override {
    return rng_.coin() ? Prefer::kOne : Prefer::kZero;
  }

 private:
  Rng rng_;
};

/// Value of the first completed W<-,r> in `trace`, if any.
inline std::optional<RegisterValue> first_completed_write(std::span<const TraceEvent> trace, Round r) {
  for (const auto& e : trace) {
    if (e.kind == EventKind::kRespondWrite && e.value.round == r) return e.value;
  }
  return std::nullopt;
}

/// Fair except at `round`, where every flip returns the value of the first
/// completed W<-,round-1> (or its complement when `invert`).
class ForcedCoin : public CoinSource {
 public:
  ForcedCoin(std::uint64_t seed, Round round, bool invert) : fair_(seed), round_(round), invert_(invert) {
    if (round < 2) throw Error(ErrorCode::kInvalidArgument, "forced round must be >= 2");
  }

  Prefer flip(std::span<const TraceEvent> trace, ProcessId p, Round round) override {
    if (round != round_) return fair_.flip(trace, p, round);
    auto first = first_completed_write(trace, round - 1);
    // A flipper completed its own W<-,round-1>, so one exists; its value is
    // binary because bot writes follow a completed value write of the round.
    if (!first || !is_binary(first->prefer)) {
      throw Error(ErrorCode::kInvalidArgument, "no completed value write precedes the forced flip");
    }
    return invert_ ? complement(first->prefer) : first->prefer;
  }

 private:
  FairCoin fair_;
  Round round_;
  bool invert_;
};

// ---------------------------------------------------------------------------
// Driver
// ---------------------------------------------------------------------------

/// One execution: adversary picks, the state machine steps, coins are drawn
/// at flip time. Stops when every process halted, when `max_events` is
/// reached, or before a write above `round_cap`.
class Simulation {
 public:
  Simulation(const SystemConfig& cfg, std::unique_ptr<Adversary> adversary, std::unique_ptr<CoinSource> coins)
      : state_(cfg), adversary_(std::move(adversary)), coins_(std::move(coins)) {
    trace_.config = cfg;
  }

  explicit Simulation(const SystemConfig& cfg)
      : Simulation(cfg, make_adversary(cfg.adversary, cfg.seed, cfg.crash_budget),
                   std::make_unique<FairCoin>(mix_seed(cfg.seed, kCoinStream))) {}

  /// Executes one adversary choice. Returns false once the run is over.
  bool step() {
    if (done()) return false;
    const AdversaryContext ctx(state_, trace_.events);
    const ScheduleChoice c = adversary_->choose(ctx);
    if (c.kind == ChoiceKind::kFireInvoke && trace_.config.round_cap != 0) {
      auto w = state_.next_write(c.pid);
      if (w && w->round > trace_.config.round_cap) {
        round_capped_ = true;
        return false;
      }
    }
    std::optional<Prefer> coin;
    if (c.kind == ChoiceKind::kFireLocal && c.pid.value < state_.n() && state_.process(c.pid).phase == Phase::kFlip) {
      coin = coins_->flip(trace_.events, c.pid, state_.process(c.pid).outgoing.round);
    }
    const auto events = state_.apply(c, coin);
    trace_.events.insert(trace_.events.end(), events.begin(), events.end());
    idle_ = events.empty() ? idle_ + 1 : 0;
    if (idle_ > kMaxIdleChoices) throw Error(ErrorCode::kAdversaryFault, "adversary makes no progress");
    return !done();
  }

  void run() {
    while (step()) {
    }
  }

  bool done() const { return state_.finished() || capped(); }
  bool capped() const { return round_capped_ || (!state_.finished() && trace_.events.size() >= trace_.config.max_events); }

  const Trace& trace() const noexcept { return trace_; }
  Trace take_trace() { return std::move(trace_); }
  const SystemState& state() const noexcept { return state_; }
  Adversary& adversary() noexcept { return *adversary_; }

 private:
  static constexpr std::uint64_t kMaxIdleChoices = 100000;

  SystemState state_;
  Trace trace_;
  std::unique_ptr<Adversary> adversary_;
  std::unique_ptr<CoinSource> coins_;
  std::uint64_t idle_ = 0;
  bool round_capped_ = false;
};

/// Runs `config` with its seed replaced by `seed`.
inline Trace run_once(SystemConfig config, std::uint64_t seed) {
  config.seed = seed;
  Simulation sim(config);
  sim.run();
  return sim.take_trace();
}

inline Trace run_once(const SystemConfig& config) { return run_once(config, config.seed); }

// ---------------------------------------------------------------------------
// Statistics
// ---------------------------------------------------------------------------

/// One-sided Clopper-Pearson lower bound for a binomial proportion at
/// confidence `1 - alpha`.
inline double clopper_pearson_lower(std::uint64_t successes, std::uint64_t trials, double alpha) {
  if (trials == 0) throw Error(ErrorCode::kInvalidArgument, "no trials");
  if (successes > trials) throw Error(ErrorCode::kInvalidArgument, "successes exceed trials");
  if (successes == 0) return 0.0;
  return boost::math::ibeta_inv(static_cast<double>(successes), static_cast<double>(trials - successes + 1), alpha);
}

struct MatchCount {
  std::uint64_t observations = 0;
  std::uint64_t matches = 0;
};

/// Per round r >= 2 that has a completed W<-,r-1> and at least one round-r
/// flip: does every round-r flip equal the first completed W<-,r-1> value?
inline std::map<Round, MatchCount> coin_matches(const Trace& t) {
  std::map<Round, const TraceEvent*> first_done;
  std::map<Round, std::vector<Prefer>> flips;
  for (const auto& e : t.events) {
    if (e.kind == EventKind::kRespondWrite) first_done.emplace(e.value.round, &e);
    if (e.kind == EventKind::kFlip) flips[e.value.round].push_back(e.value.prefer);
  }
  std::map<Round, MatchCount> out;
  for (const auto& [r, fs] : flips) {
    if (r < 2) continue;
    auto it = first_done.find(r - 1);
    if (it == first_done.end()) continue;
    const Prefer v = it->second->value.prefer;
    auto& m = out[r];
    ++m.observations;
    if (std::all_of(fs.begin(), fs.end(), [&](Prefer f) { return f == v; })) ++m.matches;
  }
  return out;
}

struct RunStats {
  std::uint32_t n = 0;
  std::uint64_t runs = 0;
  std::uint64_t decided_runs = 0;  // every process decided or crashed
  std::uint64_t capped_runs = 0;
  std::uint64_t events = 0;
  std::map<Round, std::uint64_t> decision_round_histogram;  // one count per DECIDE event
  std::map<Round, MatchCount> per_round_match;
  std::map<std::string, std::uint64_t> violations;  // monitor -> runs violating it
  std::map<std::string, std::uint64_t> vacuous;
  std::vector<std::uint64_t> violating_seeds;  // first few, ascending

  double epsilon_bound() const { return std::ldexp(1.0, -static_cast<int>(n)); }

  MatchCount match_total() const {
    MatchCount t;
    for (const auto& [r, m] : per_round_match) {
      t.observations += m.observations;
      t.matches += m.matches;
    }
    return t;
  }

  double match_frequency() const {
    const auto t = match_total();
    return t.observations == 0 ? 0.0 : static_cast<double>(t.matches) / static_cast<double>(t.observations);
  }

  double match_lower_bound(double confidence = 0.99) const {
    const auto t = match_total();
    return t.observations == 0 ? 0.0 : clopper_pearson_lower(t.matches, t.observations, 1.0 - confidence);
  }

  std::uint64_t total_violations() const {
    std::uint64_t s = 0;
    for (const auto& [k, v] : violations) s += v;
    return s;
  }

  /// Associative, commutative merge.
  void merge(const RunStats& o) {
    n = std::max(n, o.n);
    runs += o.runs;
    decided_runs += o.decided_runs;
    capped_runs += o.capped_runs;
    events += o.events;
    for (const auto& [r, c] : o.decision_round_histogram) decision_round_histogram[r] += c;
    for (const auto& [r, m] : o.per_round_match) {
      per_round_match[r].observations += m.observations;
      per_round_match[r].matches += m.matches;
    }
    for (const auto& [k, v] : o.violations) violations[k] += v;
    for (const auto& [k, v] : o.vacuous) vacuous[k] += v;
    violating_seeds.insert(violating_seeds.end(), o.violating_seeds.begin(), o.violating_seeds.end());
    std::sort(violating_seeds.begin(), violating_seeds.end());
    if (violating_seeds.size() > kKeptSeeds) violating_seeds.resize(kKeptSeeds);
  }

  /// Adds one finished run; `verdicts` may be empty when monitors are off.
  void add(const Trace& t, const std::vector<Verdict>& verdicts) {
    n = std::max(n, t.config.n);
    ++runs;
    events += t.events.size();
    if (trace_complete(t)) {
      ++decided_runs;
    } else {
      ++capped_runs;
    }
    for (const auto& e : t.events) {
      if (e.kind == EventKind::kDecide) ++decision_round_histogram[e.value.round];
    }
    for (const auto& [r, m] : coin_matches(t)) {
      per_round_match[r].observations += m.observations;
      per_round_match[r].matches += m.matches;
    }
    bool bad = false;
    for (const auto& v : verdicts) {
      if (v.violated()) {
        ++violations[v.name];
        bad = true;
      } else {
        violations.try_emplace(v.name, 0);
        if (v.status == Status::kVacuous) ++vacuous[v.name];
      }
    }
    if (bad && violating_seeds.size() < kKeptSeeds) violating_seeds.push_back(t.config.seed);
  }

  /// Flat key=value report, one pair per line, keys sorted within groups.
  std::string to_kv() const {
    std::ostringstream os;
    auto num = [](double x) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.6f", x);
      return std::string(buf);
    };
    const auto total = match_total();
    os << "n=" << n << '\n'
       << "runs=" << runs << '\n'
       << "decided_runs=" << decided_runs << '\n'
       << "capped_runs=" << capped_runs << '\n'
       << "events=" << events << '\n';
    for (const auto& [r, c] : decision_round_histogram) os << "decision_round." << r << '=' << c << '\n';
    for (const auto& [r, m] : per_round_match) {
      os << "match.round." << r << ".observations=" << m.observations << '\n'
         << "match.round." << r << ".matches=" << m.matches << '\n';
    }
    os << "match.observations=" << total.observations << '\n'
       << "match.matches=" << total.matches << '\n'
       << "match.frequency=" << num(match_frequency()) << '\n'
       << "match.lower_bound_99=" << num(match_lower_bound()) << '\n'
       << "epsilon_bound=" << num(epsilon_bound()) << '\n';
    for (const auto& [k, v] : violations) os << "violations." << k << '=' << v << '\n';
    os << "violations.total=" << total_violations() << '\n';
    return os.str();
  }

  static constexpr std::size_t kKeptSeeds = 16;
};

struct CampaignOptions {
  bool monitors = true;
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Runs seeds base_seed .. base_seed+runs-1 and aggregates. Work is split
/// into contiguous seed blocks per thread; merging is order-independent, so
/// the result does not depend on the thread count.
inline RunStats run_campaign(const SystemConfig& config, std::uint64_t runs, std::uint64_t base_seed,
                             CampaignOptions opts = {}) {
  if (runs == 0) throw Error(ErrorCode::kInvalidArgument, "a campaign needs at least one run");
  validate(config);
  unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, runs));
  std::vector<RunStats> parts(threads);
  std::vector<std::exception_ptr> errors(threads);
  auto work = [&](unsigned w) {
    try {
      const std::uint64_t lo = runs * w / threads;
      const std::uint64_t hi = runs * (w + 1) / threads;
      for (std::uint64_t i = lo; i < hi; ++i) {
        const Trace t = run_once(config, base_seed + i);
        parts[w].add(t, opts.monitors ? run_all_monitors(t) : std::vector<Verdict>{});
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  RunStats total;
  total.n = config.n;
  for (const auto& p : parts) total.merge(p);
  return total;
}

// ---------------------------------------------------------------------------
// Forced-coin experiment
// ---------------------------------------------------------------------------

struct VerdictTally {
  std::uint64_t pass = 0;
  std::uint64_t violation = 0;
  std::uint64_t vacuous = 0;

  void add(const Verdict& v) {
    if (v.status == Status::kPass) ++pass;
    if (v.status == Status::kViolation) ++violation;
    if (v.status == Status::kVacuous) ++vacuous;
  }
};

struct ForcedCoinReport {
  Round round = 0;
  bool inverted = false;
  std::uint64_t runs = 0;      // accepted runs: at least one round-r flip
  std::uint64_t skipped = 0;   // seeds whose run never flipped at round r
  std::uint64_t capped = 0;
  std::uint64_t antecedent_fired = 0;
  VerdictTally bl4;
  VerdictTally bc1;
  std::vector<std::uint64_t> violating_seeds;

  std::string to_kv() const {
    std::ostringstream os;
    os << "round=" << round << '\n'
       << "inverted=" << (inverted ? 1 : 0) << '\n'
       << "runs=" << runs << '\n'
       << "skipped=" << skipped << '\n'
       << "capped=" << capped << '\n'
       << "antecedent_fired=" << antecedent_fired << '\n'
       << "bl4.pass=" << bl4.pass << "\nbl4.violation=" << bl4.violation << "\nbl4.vacuous=" << bl4.vacuous << '\n'
       << "bc1.pass=" << bc1.pass << "\nbc1.violation=" << bc1.violation << "\nbc1.vacuous=" << bc1.vacuous << '\n';
    return os.str();
  }
};

/// Collects `runs` executions that flip at least once at round `r`, with the
/// round-r coin forced to the first completed W<-,r-1> value (or its
/// complement), and checks the two coin lemmas restricted to round r.
/// Seeds that never reach a round-r flip are skipped and counted.
inline ForcedCoinReport forced_coin_experiment(const SystemConfig& config, Round r, std::uint64_t runs,
                                               bool invert = false, std::uint64_t base_seed = 0,
                                               std::uint64_t max_attempts = 0) {
  if (r < 2) throw Error(ErrorCode::kInvalidArgument, "forced round must be >= 2");
  if (runs == 0) throw Error(ErrorCode::kInvalidArgument, "need at least one run");
  validate(config);
  if (max_attempts == 0) max_attempts = runs * 10000;
  ForcedCoinReport rep;
  rep.round = r;
  rep.inverted = invert;
  for (std::uint64_t k = 0; rep.runs < runs; ++k) {
    if (k >= max_attempts) {
      throw Error(ErrorCode::kBoundTooLarge, "round " + std::to_string(r) + " reached too rarely");
    }
    SystemConfig cfg = config;
    cfg.seed = base_seed + k;
    Simulation sim(cfg, make_adversary(cfg.adversary, cfg.seed, cfg.crash_budget),
                   std::make_unique<ForcedCoin>(mix_seed(cfg.seed, kCoinStream), r, invert));
    sim.run();
    const Trace& t = sim.trace();
    const bool reached = std::any_of(t.events.begin(), t.events.end(), [&](const TraceEvent& e) {
      return e.kind == EventKind::kFlip && e.value.round == r;
    });
    if (!reached) {
      ++rep.skipped;
      continue;
    }
    ++rep.runs;
    if (sim.capped()) ++rep.capped;
    if (antecedent_fired(t, r)) ++rep.antecedent_fired;
    const Verdict a = check_lemma_bl4(t, r);
    const Verdict b = check_lemma_bc1(t, r);
    rep.bl4.add(a);
    rep.bc1.add(b);
    if ((a.violated() || b.violated()) && rep.violating_seeds.size() < RunStats::kKeptSeeds) {
      rep.violating_seeds.push_back(cfg.seed);
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Scripted linearization attack
// ---------------------------------------------------------------------------

struct AttackReport {
  bool applicable = true;
  std::string note;
  std::uint64_t runs = 0;
  std::uint64_t coin_zero = 0;
  std::uint64_t coin_one = 0;
  std::uint64_t linearized_differs = 0;   // (i) first linearized W<-,1> value != coin
  std::uint64_t completed_before_flip = 0; // (ii) first completed W<-,1> precedes the flip
  std::uint64_t completed_runs = 0;
  std::map<std::string, std::uint64_t> violations;
  std::vector<std::uint64_t> failing_seeds;

  std::string to_kv() const {
    std::ostringstream os;
    os << "applicable=" << (applicable ? 1 : 0) << '\n';
    if (!note.empty()) os << "note=" << note << '\n';
    os << "runs=" << runs << '\n'
       << "coin_zero=" << coin_zero << '\n'
       << "coin_one=" << coin_one << '\n'
       << "linearized_first_differs_from_coin=" << linearized_differs << '\n'
       << "completed_first_before_flip=" << completed_before_flip << '\n'
       << "completed_runs=" << completed_runs << '\n';
    for (const auto& [k, v] : violations) os << "violations." << k << '=' << v << '\n';
    return os.str();
  }
};

struct AttackOutcome {
  Trace trace;
  Prefer coin = Prefer::kBot;
  std::optional<RegisterValue> first_linearized;
  std::optional<Seq> first_completed;
  std::optional<Seq> flip;
};

/// One scripted run. The victim's round-2 coin write is the round-r flip of
/// the scenario with r-1 = 1.
inline AttackOutcome run_attack(SystemConfig cfg) {
  cfg.adversary = "appendix_attack";
  Simulation sim(cfg);
  sim.run();
  AttackOutcome out;
  auto* adv = dynamic_cast<AppendixAttackAdversary*>(&sim.adversary());
  if (!adv || !adv->victim_coin()) throw Error(ErrorCode::kScenarioBroken, "victim never flipped");
  out.coin = *adv->victim_coin();
  for (const auto& op : sim.state().linearization().order()) {
    if (op.is_write && op.value.round == 1) {
      out.first_linearized = op.value;
      break;
    }
  }
  for (const auto& e : sim.trace().events) {
    if (!out.first_completed && e.kind == EventKind::kRespondWrite && e.value.round == 1) out.first_completed = e.seq;
    if (!out.flip && e.kind == EventKind::kFlip && e.pid == AppendixAttackAdversary::kVictim && e.value.round == 2) {
      out.flip = e.seq;
    }
  }
  out.trace = sim.take_trace();
  return out;
}

inline AttackReport attack_demo(std::uint64_t runs, std::uint32_t n = 2,
                                RegisterModel model = RegisterModel::kLinearizable, std::uint64_t base_seed = 0,
                                std::uint64_t max_events = 100000) {
  if (runs == 0) throw Error(ErrorCode::kInvalidArgument, "need at least one run");
  AttackReport rep;
  if (model == RegisterModel::kRegular) {
    rep.applicable = false;
    rep.note = "regular registers have no linearization order to reorder";
    return rep;
  }
  for (std::uint64_t k = 0; k < runs; ++k) {
    SystemConfig cfg;
    cfg.n = n;
    cfg.proposals = alternating_proposals(n);
    cfg.model = model;
    cfg.adversary = "appendix_attack";
    cfg.seed = base_seed + k;
    cfg.max_events = max_events;
    const AttackOutcome o = run_attack(cfg);
    ++rep.runs;
    ++(o.coin == Prefer::kZero ? rep.coin_zero : rep.coin_one);
    const bool i = o.first_linearized && o.first_linearized->prefer != o.coin;
    const bool ii = o.first_completed && o.flip && *o.first_completed < *o.flip;
    rep.linearized_differs += i;
    rep.completed_before_flip += ii;
    if ((!i || !ii) && rep.failing_seeds.size() < RunStats::kKeptSeeds) rep.failing_seeds.push_back(cfg.seed);
    if (trace_complete(o.trace)) ++rep.completed_runs;
    for (const auto& v : run_all_monitors(o.trace)) {
      if (v.violated()) ++rep.violations[v.name];
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// key=value configuration files
// ---------------------------------------------------------------------------

/// Settings shared by the CLI subcommands; every field may come from a
/// config file and be overridden by flags.
struct Settings {
  SystemConfig system;
  std::uint64_t runs = 1000;
  std::string trace_out;
};

inline std::vector<Prefer> parse_proposal_list(const std::string& text) {
  try {
    return parse_proposals(text);
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfig, e.what());
  }
}

/// Applies one key=value pair. Unknown keys are errors.
inline void apply_setting(Settings& s, const std::string& key, const std::string& value) {
  auto integer = [&](auto& field) {
    using T = std::remove_reference_t<decltype(field)>;
    try {
      field = detail::parse_int<T>(value, key);
    } catch (const Error&) {
      throw Error(ErrorCode::kConfig, "bad integer for " + key + ": '" + value + "'");
    }
  };
  if (key == "n") {
    integer(s.system.n);
  } else if (key == "proposals") {
    s.system.proposals = parse_proposal_list(value);
  } else if (key == "model") {
    s.system.model = parse_model(value);
  } else if (key == "adversary") {
    s.system.adversary = value;
  } else if (key == "seed") {
    integer(s.system.seed);
  } else if (key == "max_events") {
    integer(s.system.max_events);
  } else if (key == "crash_budget") {
    integer(s.system.crash_budget);
  } else if (key == "round_cap") {
    integer(s.system.round_cap);
  } else if (key == "runs") {
    integer(s.runs);
  } else if (key == "trace_out") {
    s.trace_out = value;
  } else {
    throw Error(ErrorCode::kConfig, "unknown config key '" + key + "'");
  }
}

/// Reads `key = value` lines; blank lines and `#` comments are ignored.
inline void load_settings(Settings& s, std::istream& in) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string x) {
      const auto b = x.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string{};
      return x.substr(b, x.find_last_not_of(" \t\r") - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kConfig, "line " + std::to_string(lineno) + ": expected key=value");
    }
    apply_setting(s, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

inline void load_settings_file(Settings& s, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfig, "cannot open config file " + path);
  load_settings(s, in);
}

}  // namespace regcons

#endif  // REGCONS_HARNESS_HPP_
