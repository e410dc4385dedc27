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

// Command line front end. Exit codes: 0 clean, 1 monitor violation,
// 2 configuration error.

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "regcons/regcons.hpp"

namespace {

using namespace regcons;

constexpr int kClean = 0;
constexpr int kViolation = 1;
constexpr int kConfigError = 2;

/// Flags shared by the simulation subcommands. Values are kept as text and
/// applied over the config file in one place.
struct CommonFlags {
  std::string config;
  std::map<std::string, std::string> given;

  void add(CLI::App* app, bool with_runs = true) {
    app->add_option("--config", config, "key=value config file; flags override it");
    flag(app, "--n", "n", "number of processes");
    flag(app, "--proposals", "proposals", "comma-separated 0/1 proposals (default alternating)");
    flag(app, "--model", "model", "atomic | regular | linearizable");
    flag(app, "--adversary", "adversary",
         "round_robin | uniform_random | stale_read | disagreement_maximizer | appendix_attack");
    flag(app, "--seed", "seed", "run seed (campaigns: first seed)");
    if (with_runs) flag(app, "--runs", "runs", "number of runs");
    flag(app, "--max-events", "max_events", "event cap per run");
    flag(app, "--crash-budget", "crash_budget", "maximum crashes per run");
    flag(app, "--round-cap", "round_cap", "stop before writes above this round (0 = none)");
    flag(app, "--trace-out", "trace_out", "trace output file (explore: directory)");
  }

  Settings resolve() const {
    Settings s;
    if (!config.empty()) load_settings_file(s, config);
    for (const auto& [k, v] : given) apply_setting(s, k, v);
    if (s.system.proposals.empty()) s.system.proposals = alternating_proposals(s.system.n);
    validate(s.system);
    return s;
  }

 private:
  void flag(CLI::App* app, const std::string& name, const std::string& key, const std::string& help) {
    app->add_option_function<std::string>(name, [this, key](const std::string& v) { given[key] = v; }, help);
  }
};

bool print_verdicts(const std::vector<Verdict>& verdicts) {
  bool bad = false;
  for (const auto& v : verdicts) {
    std::cout << v.name << ' ' << to_string(v.status);
    if (!v.witness.empty()) {
      std::cout << " witness=";
      for (std::size_t i = 0; i < v.witness.size(); ++i) std::cout << (i ? "," : "") << v.witness[i];
    }
    if (!v.note.empty()) std::cout << " (" << v.note << ')';
    std::cout << '\n';
    bad |= v.violated();
  }
  return bad;
}

int cmd_run(const CommonFlags& f) {
  const Settings s = f.resolve();
  const Trace t = run_once(s.system);
  if (!s.trace_out.empty()) {
    write_trace_file(s.trace_out, t);
  } else {
    write_trace(std::cout, t);
  }
  std::cout << "# events=" << t.events.size() << " complete=" << (trace_complete(t) ? 1 : 0) << '\n';
  const bool bad = print_verdicts(run_all_monitors(t));
  return bad ? kViolation : kClean;
}

int cmd_campaign(const CommonFlags& f, std::optional<Round> forced, bool invert, unsigned threads) {
  const Settings s = f.resolve();
  if (forced) {
    const auto rep = forced_coin_experiment(s.system, *forced, s.runs, invert, s.system.seed);
    std::cout << rep.to_kv();
    return rep.bl4.violation + rep.bc1.violation > 0 ? kViolation : kClean;
  }
  CampaignOptions opts;
  opts.threads = threads;
  const RunStats stats = run_campaign(s.system, s.runs, s.system.seed, opts);
  std::cout << stats.to_kv();
  return stats.total_violations() > 0 ? kViolation : kClean;
}

int cmd_explore(const CommonFlags& f, const std::string& goal, std::uint64_t budget, bool no_memo, bool all) {
  Settings s;
  if (!f.config.empty()) load_settings_file(s, f.config);
  s.system.max_events = 200;
  s.system.round_cap = 4;
  for (const auto& [k, v] : f.given) apply_setting(s, k, v);
  if (s.system.proposals.empty()) s.system.proposals = alternating_proposals(s.system.n);
  validate(s.system);
  ExplorationConfig cfg;
  cfg.n = s.system.n;
  cfg.proposals = s.system.proposals;
  cfg.model = s.system.model;
  cfg.max_events = s.system.max_events;
  cfg.round_cap = s.system.round_cap;
  cfg.crash_budget = s.system.crash_budget;
  if (!goal.empty()) cfg.search_goal = goal;
  cfg.node_budget = budget;
  cfg.memoize = !no_memo;
  cfg.all_monitors = all;
  const auto rep = explore(cfg);
  std::cout << "executions_explored=" << rep.executions_explored << '\n'
            << "complete_executions=" << rep.complete_executions << '\n'
            << "nodes=" << rep.nodes << '\n'
            << "memo_hits=" << rep.memo_hits << '\n'
            << "truncated=" << rep.truncated << '\n'
            << "violations=" << rep.violation_count << '\n'
            << "witnesses=" << rep.witness_count << '\n';
  if (!s.trace_out.empty()) {
    std::filesystem::create_directories(s.trace_out);
    std::size_t i = 0;
    for (const auto& [name, t] : rep.violations) {
      write_trace_file(s.trace_out + "/violation-" + std::to_string(i++) + "-" + name + ".trace", t);
    }
    i = 0;
    for (const auto& [name, t] : rep.witnesses) {
      write_trace_file(s.trace_out + "/witness-" + std::to_string(i++) + "-" + name + ".trace", t);
    }
  }
  return rep.violation_count > 0 ? kViolation : kClean;
}

int cmd_attack(const CommonFlags& f) {
  Settings s;
  s.system.model = RegisterModel::kLinearizable;
  if (!f.config.empty()) load_settings_file(s, f.config);
  for (const auto& [k, v] : f.given) apply_setting(s, k, v);
  const auto rep = attack_demo(s.runs, s.system.n, s.system.model, s.system.seed, s.system.max_events);
  std::cout << rep.to_kv();
  if (!rep.applicable) return kConfigError;
  return rep.linearized_differs == rep.runs && rep.completed_before_flip == rep.runs ? kClean : kViolation;
}

int cmd_check(const std::string& path) {
  const Trace t = read_trace_file(path);
  return print_verdicts(run_all_monitors(t)) ? kViolation : kClean;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized consensus over regular, atomic and linearizable registers"};
  app.require_subcommand(1);

  CommonFlags run_flags, campaign_flags, explore_flags, attack_flags;
  auto* run = app.add_subcommand("run", "simulate one execution and check it");
  run_flags.add(run, false);

  auto* campaign = app.add_subcommand("campaign", "seeded Monte Carlo runs with statistics");
  campaign_flags.add(campaign);
  std::optional<Round> forced;
  bool invert = false;
  unsigned threads = 0;
  campaign->add_option("--forced-round", forced, "force the coins of this round (>= 2)");
  campaign->add_flag("--invert", invert, "force the opposite value instead");
  campaign->add_option("--threads", threads, "worker threads (0 = all cores)");

  auto* exp = app.add_subcommand("explore", "bounded exhaustive exploration");
  explore_flags.add(exp, false);
  std::string goal;
  std::uint64_t budget = 50'000'000;
  bool no_memo = false, all = false;
  exp->add_option("--goal", goal, "search goal: new_old_inversion");
  exp->add_option("--node-budget", budget, "abort beyond this many nodes");
  exp->add_flag("--no-memo", no_memo, "disable state memoization");
  exp->add_flag("--all-monitors", all, "run every monitor on each execution");

  auto* attack = app.add_subcommand("attack", "scripted linearization-order attack");
  attack_flags.add(attack);

  auto* check = app.add_subcommand("check", "run all monitors on a trace file");
  std::string trace_path;
  check->add_option("trace", trace_path, "trace file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (*run) return cmd_run(run_flags);
    if (*campaign) return cmd_campaign(campaign_flags, forced, invert, threads);
    if (*exp) return cmd_explore(explore_flags, goal, budget, no_memo, all);
    if (*attack) return cmd_attack(attack_flags);
    if (*check) return cmd_check(trace_path);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }
  return kConfigError;
}
