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

// Line-oriented trace format.
//
//   # regcons-trace v1 n=2 model=regular adversary=round_robin seed=7 ...
//   <seq> <pid> <kind> <target> <prefer> <round> <line>
//
// prefer is one of 0, 1, B. Only complete events are ever written.

#ifndef REGCONS_TRACE_IO_HPP_
#define REGCONS_TRACE_IO_HPP_

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>

#include "regcons/core.hpp"

namespace regcons {

inline constexpr std::string_view kTraceMagic = "# regcons-trace v1";

namespace detail {

template <typename Int>
Int parse_int(std::string_view text, std::string_view what) {
  Int out{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::kParse, "bad " + std::string(what) + " '" + std::string(text) + "'");
  }
  return out;
}

inline Prefer parse_prefer(std::string_view text) {
  if (text == "0") return Prefer::kZero;
  if (text == "1") return Prefer::kOne;
  if (text == "B") return Prefer::kBot;
  throw Error(ErrorCode::kParse, "bad prefer '" + std::string(text) + "'");
}

inline EventKind parse_kind(std::string_view text) {
  for (auto k : {EventKind::kInvokeWrite, EventKind::kRespondWrite, EventKind::kInvokeRead,
                 EventKind::kRespondRead, EventKind::kFlip, EventKind::kDecide,
                 EventKind::kCrash}) {
    if (to_string(k) == text) return k;
  }
  throw Error(ErrorCode::kParse, "bad event kind '" + std::string(text) + "'");
}

inline LineSite parse_line(std::string_view text) {
  for (auto s : {LineSite::kProposeWrite, LineSite::kAgreeWrite, LineSite::kPauseWrite,
                 LineSite::kCoinWrite, LineSite::kRead, LineSite::kDecide, LineSite::kNone}) {
    if (to_string(s) == text) return s;
  }
  throw Error(ErrorCode::kParse, "bad line site '" + std::string(text) + "'");
}

}  // namespace detail

inline std::string format_proposals(const std::vector<Prefer>& proposals) {
  std::string out;
  for (std::size_t i = 0; i < proposals.size(); ++i) {
    if (i) out += ',';
    out += prefer_char(proposals[i]);
  }
  return out;
}

inline std::vector<Prefer> parse_proposals(std::string_view text) {
  std::vector<Prefer> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    auto token = text.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                    : comma - start);
    Prefer p = detail::parse_prefer(token);
    if (!is_binary(p)) throw Error(ErrorCode::kParse, "proposal must be 0 or 1");
    out.push_back(p);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline std::string format_header(const SystemConfig& cfg) {
  std::ostringstream os;
  os << kTraceMagic << " n=" << cfg.n << " model=" << to_string(cfg.model)
     << " adversary=" << cfg.adversary << " seed=" << cfg.seed
     << " max_events=" << cfg.max_events << " crash_budget=" << cfg.crash_budget
     << " round_cap=" << cfg.round_cap << " proposals=" << format_proposals(cfg.proposals);
  return os.str();
}

inline std::string format_event(const TraceEvent& e) {
  std::string out;
  out.reserve(48);
  out += std::to_string(e.seq);
  out += ' ';
  out += std::to_string(e.pid.value);
  out += ' ';
  out += to_string(e.kind);
  out += ' ';
  out += std::to_string(e.target.value);
  out += ' ';
  out += prefer_char(e.value.prefer);
  out += ' ';
  out += std::to_string(e.value.round);
  out += ' ';
  out += to_string(e.line);
  return out;
}

inline void write_trace(std::ostream& os, const Trace& trace) {
  os << format_header(trace.config) << '\n';
  for (const auto& e : trace.events) os << format_event(e) << '\n';
}

inline std::string to_text(const Trace& trace) {
  std::ostringstream os;
  write_trace(os, trace);
  return os.str();
}

inline SystemConfig parse_header(std::string_view line) {
  if (line.substr(0, kTraceMagic.size()) != kTraceMagic) {
    throw Error(ErrorCode::kParse, "missing trace header");
  }
  std::map<std::string, std::string, std::less<>> kv;
  std::istringstream is{std::string(line.substr(kTraceMagic.size()))};
  std::string token;
  while (is >> token) {
    auto eq = token.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::kParse, "bad header field '" + token + "'");
    kv[token.substr(0, eq)] = token.substr(eq + 1);
  }
  auto get = [&](std::string_view key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) throw Error(ErrorCode::kParse, "header missing '" + std::string(key) + "'");
    return it->second;
  };
  SystemConfig cfg;
  cfg.n = detail::parse_int<std::uint32_t>(get("n"), "n");
  cfg.model = parse_model(get("model"));
  cfg.adversary = get("adversary");
  cfg.seed = detail::parse_int<std::uint64_t>(get("seed"), "seed");
  cfg.max_events = detail::parse_int<std::uint64_t>(get("max_events"), "max_events");
  cfg.crash_budget = detail::parse_int<std::uint32_t>(get("crash_budget"), "crash_budget");
  cfg.round_cap = detail::parse_int<Round>(get("round_cap"), "round_cap");
  cfg.proposals = parse_proposals(get("proposals"));
  return cfg;
}

inline TraceEvent parse_event(std::string_view line) {
  std::istringstream is{std::string(line)};
  std::string seq, pid, kind, target, prefer, round, site, extra;
  if (!(is >> seq >> pid >> kind >> target >> prefer >> round >> site) || (is >> extra)) {
    throw Error(ErrorCode::kParse, "expected 7 fields in '" + std::string(line) + "'");
  }
  TraceEvent e;
  e.seq = detail::parse_int<Seq>(seq, "seq");
  e.pid = ProcessId(detail::parse_int<std::uint32_t>(pid, "pid"));
  e.kind = detail::parse_kind(kind);
  e.target = ProcessId(detail::parse_int<std::uint32_t>(target, "target"));
  e.value.prefer = detail::parse_prefer(prefer);
  e.value.round = detail::parse_int<Round>(round, "round");
  e.line = detail::parse_line(site);
  return e;
}

inline Trace read_trace(std::istream& is) {
  Trace trace;
  std::string line;
  if (!std::getline(is, line)) throw Error(ErrorCode::kParse, "empty trace");
  trace.config = parse_header(line);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    trace.events.push_back(parse_event(line));
  }
  return trace;
}

inline Trace read_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParse, "cannot open trace file " + path);
  return read_trace(in);
}

inline void write_trace_file(const std::string& path, const Trace& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kConfig, "cannot write trace file " + path);
  write_trace(out, trace);
}

}  // namespace regcons

#endif  // REGCONS_TRACE_IO_HPP_
