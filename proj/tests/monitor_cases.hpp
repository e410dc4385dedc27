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

// Hand-built traces per monitor: one it must pass (non-vacuously) and one
// it must flag, with the expected witness.

#ifndef REGCONS_TESTS_MONITOR_CASES_HPP_
#define REGCONS_TESTS_MONITOR_CASES_HPP_

#include <string>
#include <vector>

#include "test_util.hpp"

namespace regcons::testing {

struct MonitorCase {
  std::string monitor;
  Trace pass;
  Trace violation;
  std::vector<Seq> witness;
};

inline Verdict verdict_of(const std::string& monitor, const Trace& t) {
  return find_verdict(run_all_monitors(t), monitor);
}

inline std::vector<MonitorCase> monitor_cases() {
  using B = TraceBuilder;
  std::vector<MonitorCase> out;
  auto add = [&](std::string m, const B& pass, const B& bad, std::vector<Seq> w) {
    out.push_back({std::move(m), pass.build(), bad.build(), std::move(w)});
  };

  add("well_formed", B(1, {k0}).w(0, k0, 1).read(0, 0, k0, 1).decide(0, k0, 1),
      B(1, {k0}).w(0, k0, 1).decide(0, k0, 1), {2});

  // new value then old value while the write is pending: still regular
  add("regular", B(2).w(0, k0, 1).iw(0, k1, 2).read(1, 0, k1, 2).read(1, 0, k0, 1).rw(0, k1, 2),
      B(2).w(0, k0, 1).w(0, k0, 2).read(1, 0, k0, 1), {5});

  add("validity", B(1, {k0}).w(0, k0, 1).read(0, 0, k0, 1).decide(0, k0, 1), B(1, {k0}).decide(0, k1, 1), {0});

  add("agreement", B(2, {k1, k1}).decide(0, k1, 1).decide(1, k1, 1), B(2).decide(0, k0, 1).decide(1, k1, 1), {0, 1});

  add("obs1_a", B(1).iw(0, k0, 1), B(1).iw(0, kB, 0), {0});
  add("obs1_b", B(1).w(0, k0, 1).iw(0, k0, 2), B(1).w(0, k0, 1).iw(0, k0, 1), {0, 2});
  add("obs1_c", B(1).w(0, k0, 2).iw(0, kB, 2), B(1).w(0, k0, 2).iw(0, k1, 2), {0, 2});
  add("obs1_d", B(1).w(0, k0, 1).iw(0, k0, 2), B(1).w(0, k0, 2).iw(0, k0, 1), {0, 2});
  add("obs1_e_invoke", B(1).w(0, k0, 1).iw(0, kB, 1), B(1).iw(0, kB, 1), {0});
  add("obs1_e_complete", B(1).w(0, k0, 1).iw(0, kB, 1), B(1).iw(0, k0, 1).iw(0, kB, 1), {1});

  // p0 switches 0 -> 1; p1 wrote 1 at a high enough round before that
  add("bl1", B(2).w(1, k1, 1).w(0, k0, 1).w(0, k1, 2), B(2).w(0, k0, 1).w(0, k1, 2), {2});
  add("bl1_5", B(2).w(1, k1, 2).w(0, k0, 1).w(0, k1, 3), B(2).w(1, k1, 1).w(0, k0, 2).w(0, k1, 3), {4});

  add("bl2", B(1).w(0, k0, 1).w(0, k0, 2), B(1).w(0, k0, 1).w(0, k0, 3), {2});
  add("bl2_prime", B(2).w(0, k0, 1).w(1, k1, 1).iw(0, kB, 1), B(2).w(0, k0, 1).iw(0, kB, 1), {2});
  add("corollary", B(2).w(0, k0, 1).w(1, k1, 1).iw(0, k1, 2), B(2).w(0, k0, 1).iw(0, kB, 1), {2});

  add("bl3_5", B(1, {k0}).w(0, k0, 1).read(0, 0, k0, 1).decide(0, k0, 1), B(2).w(1, k1, 1).decide(0, k0, 1), {2, 0});

  // W<0,1> never appears, so whoever reaches round 2 must decide 1 there
  add("bl3",
      B(2, {k1, k1}).w(0, k1, 1).w(1, k1, 1).w(0, k1, 2).w(1, k1, 2).decide(0, k1, 2).decide(1, k1, 2),
      B(2, {k1, k1}).w(0, k1, 1).w(1, k1, 1).w(0, k1, 2).w(1, k1, 2).decide(0, k1, 2).w(1, k1, 3).decide(1, k1, 3),
      {6, 11});

  // first completed round-1 write is 0; round-2 coins all 0 (or none)
  add("bl4", B(2).w(0, k0, 1).w(1, k1, 1).flip(1, k0, 2).w(1, k0, 2, LineSite::kCoinWrite),
      B(2).w(0, k0, 1).w(1, k1, 1).w(1, k1, 2), {1, 4});
  add("bc1",
      B(2).w(0, k0, 1).w(1, k1, 1).flip(1, k0, 2).w(1, k0, 2, LineSite::kCoinWrite).decide(0, k0, 3).decide(1, k0, 3),
      B(2).w(0, k0, 1).w(1, k1, 1).flip(1, k0, 2).w(1, k0, 2, LineSite::kCoinWrite).decide(0, k0, 3).decide(1, k0, 4),
      {1, 8});
  return out;
}

}  // namespace regcons::testing

#endif  // REGCONS_TESTS_MONITOR_CASES_HPP_
