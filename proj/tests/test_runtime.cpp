/*
 * Copyright (c) 2026, The lcsim Authors
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

#include <doctest.h>

#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "lcsim/errors.hpp"
#include "lcsim/runtime.hpp"
#include "lcsim/trace_io.hpp"
#include "lcsim/verdict.hpp"

using namespace lcsim;

namespace {

Config make_cfg(int n, int k, int f, std::vector<int> inputs) {
  Config cfg;
  cfg.n = n;
  cfg.k = k;
  cfg.f = f;
  cfg.inputs = std::move(inputs);
  return cfg;
}

// Deterministic interleaving that drives both processes to an adopt tag with
// different values, exercising thread T and the tournament lock end to end:
// p2 collects before p1 writes (k=1 lets it through), both write A before
// either collects A, so both see two proposals and adopt their own value;
// p1 wins the lock and publishes via DEC.
std::vector<ScheduledAction> adopt_path_schedule() {
  auto M = [](int pid) { return ScheduledAction::step(pid, ThreadId::Main); };
  auto T = [](int pid) { return ScheduledAction::step(pid, ThreadId::T); };
  return {
      M(2), M(2), M(2), M(2),          // p2: line 1, collect [bot,1], min
      M(1), M(1), M(1), M(1),          // p1: line 1, collect [0,1], min
      M(1), M(2),                      // both write A
      M(1), M(1), M(2), M(2),          // both collect A (both multi)
      M(1), M(2),                      // both write B
      M(1), M(1), M(2), M(2),          // both collect B -> adopt(0), adopt(1)
      T(1), T(2), T(1), T(2),          // flags, turns (p2 wrote turn last)
      T(1), T(1),                      // p1 reads peer flag, turn -> acquires
      T(1), T(1),                      // p1: DEC still bot, write DEC <- 0
      M(1), M(2),                      // both read DEC = 0 and decide
  };
}

}  // namespace

TEST_CASE("lambda_of") {
  CHECK(lambda_of(9, 3) == 6);
  CHECK(lambda_of(5, 0) == 5);
  CHECK(lambda_of(5, 5) == 0);
  CHECK_THROWS_AS(lambda_of(5, 6), ConfigError);
  CHECK_THROWS_AS(lambda_of(0, 0), ConfigError);
}

TEST_CASE("init_system and config validation") {
  Config ok = make_cfg(2, 1, 1, {0, 1});
  SystemState s = init_system(ok);
  CHECK(s.procs.size() == 2);
  CHECK(s.procs[0].main_pc == ProcState::MainPc::L1Write);
  CHECK(s.procs[1].main_pc == ProcState::MainPc::L1Write);
  CHECK(s.participation_count() == 0);

  CHECK_THROWS_AS(init_system(make_cfg(3, 4, 0, {0, 0, 0})), ConfigError);
  CHECK_THROWS_AS(init_system(make_cfg(2, 1, 3, {0, 1})), ConfigError);
  CHECK_THROWS_AS(init_system(make_cfg(2, 1, 1, {0})), ConfigError);
  Config bad_steps = make_cfg(2, 1, 1, {0, 1});
  bad_steps.max_steps = 0;
  CHECK_THROWS_AS(validate_config(bad_steps), ConfigError);
}

TEST_CASE("lambda echoes in the trace header") {
  Config cfg = make_cfg(9, 3, 3, {0, 1, 0, 1, 0, 1, 0, 1, 0});
  Trace t = run_schedule(cfg, {});
  CHECK(trace_to_jsonl(t).find("\"lambda\":6") != std::string::npos);
}

TEST_CASE("enabled actions: fresh system offers every step and crash") {
  Config cfg = make_cfg(2, 1, 1, {0, 1});
  SystemState s = init_system(cfg);
  std::vector<ScheduledAction> expected = {
      ScheduledAction::step(1, ThreadId::Main),
      ScheduledAction::step(2, ThreadId::Main),
      ScheduledAction::crash(1),
      ScheduledAction::crash(2),
  };
  CHECK(enabled_actions(s, cfg) == expected);
}

TEST_CASE("enabled actions: crashes vanish once participation bypasses lambda") {
  Config cfg = make_cfg(2, 1, 1, {0, 1});  // lambda = 1
  SystemState s = init_system(cfg);
  apply_action(s, ScheduledAction::step(1, ThreadId::Main), cfg, nullptr);
  CHECK(s.participation_count() == 1);
  // At the threshold, crashing is still legal.
  bool crash_offered = false;
  for (const ScheduledAction& a : enabled_actions(s, cfg))
    crash_offered |= a.kind == ScheduledAction::Kind::Crash;
  CHECK(crash_offered);
  apply_action(s, ScheduledAction::step(2, ThreadId::Main), cfg, nullptr);
  CHECK(s.participation_count() == 2);
  for (const ScheduledAction& a : enabled_actions(s, cfg))
    CHECK(a.kind == ScheduledAction::Kind::Step);
  try {
    apply_action(s, ScheduledAction::crash(2), cfg, nullptr);
    FAIL("expected ScheduleError");
  } catch (const ScheduleError& e) {
    CHECK(e.rule() == "lambda-threshold");
  }
}

TEST_CASE("k=0 keeps crashes enabled at any time while budget remains") {
  Config cfg = make_cfg(2, 0, 1, {0, 1});  // lambda = n
  SystemState s = init_system(cfg);
  apply_action(s, ScheduledAction::step(1, ThreadId::Main), cfg, nullptr);
  apply_action(s, ScheduledAction::step(2, ThreadId::Main), cfg, nullptr);
  bool crash_offered = false;
  for (const ScheduledAction& a : enabled_actions(s, cfg))
    crash_offered |= a.kind == ScheduledAction::Kind::Crash;
  CHECK(crash_offered);
  apply_action(s, ScheduledAction::crash(1), cfg, nullptr);
  CHECK(s.crash_count == 1);
  try {
    apply_action(s, ScheduledAction::crash(2), cfg, nullptr);
    FAIL("expected ScheduleError");
  } catch (const ScheduleError& e) {
    CHECK(e.rule() == "crash-budget");
  }
}

TEST_CASE("first shared access marks participation") {
  Config cfg = make_cfg(2, 1, 1, {0, 1});
  SystemState s = init_system(cfg);
  AppliedEvent ev;
  apply_action(s, ScheduledAction::step(1, ThreadId::Main), cfg, &ev);
  CHECK(ev.access.kind == AccessKind::Write);
  CHECK(ev.access.reg.to_string() == "INPUT[1]");
  CHECK(s.participated(1));
  CHECK_FALSE(s.participated(2));
}

TEST_CASE("crashed processes cannot step; crash is absorbing") {
  Config cfg = make_cfg(2, 1, 2, {0, 1});
  SystemState s = init_system(cfg);
  apply_action(s, ScheduledAction::crash(2), cfg, nullptr);
  CHECK_THROWS_AS(apply_action(s, ScheduledAction::step(2, ThreadId::Main), cfg, nullptr),
                  ScheduleError);
  CHECK_THROWS_AS(apply_action(s, ScheduledAction::crash(2), cfg, nullptr),
                  ScheduleError);
}

TEST_CASE("solo random run is deterministic and decides its own input") {
  Config cfg = make_cfg(1, 0, 0, {7});
  cfg.seed = 12345;
  Trace t = run_random(cfg);
  CHECK(t.complete);
  REQUIRE(t.decisions.size() == 1);
  CHECK(t.decisions[0].pid == 1);
  CHECK(t.decisions[0].value == 7);
  CHECK(check_trace(t, cfg).all_pass());
}

TEST_CASE("same cfg and seed give byte-identical traces") {
  Config cfg = make_cfg(3, 1, 1, {0, 1, 1});
  cfg.seed = 42;
  cfg.crash_policy = CrashPolicy::random(0.1);
  Trace a = run_random(cfg);
  Trace b = run_random(cfg);
  CHECK(a.complete);
  CHECK(trace_to_jsonl(a) == trace_to_jsonl(b));
  CHECK(check_trace(a, cfg).no_violation());
}

TEST_CASE("replaying a trace's own actions reproduces it byte for byte") {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    Config cfg = make_cfg(3, 1, 1, {0, 1, 1});
    cfg.seed = seed;
    cfg.crash_policy = CrashPolicy::random(0.2);
    Trace t = run_random(cfg);
    Trace r = run_schedule(cfg, t.actions);
    CHECK(trace_to_jsonl(t) == trace_to_jsonl(r));
  }
}

TEST_CASE("schedules violating budget or threshold fail with position and rule") {
  Config cfg = make_cfg(2, 1, 1, {0, 1});
  // Budget: second crash with f = 1.
  std::vector<ScheduledAction> over_budget = {ScheduledAction::crash(1),
                                              ScheduledAction::crash(2)};
  try {
    run_schedule(cfg, over_budget);
    FAIL("expected ScheduleError");
  } catch (const ScheduleError& e) {
    CHECK(e.position() == 1);
    CHECK(e.rule() == "crash-budget");
  }
  // Threshold: crash after both processes participated (lambda = 1).
  std::vector<ScheduledAction> late_crash = {
      ScheduledAction::step(1, ThreadId::Main),
      ScheduledAction::step(2, ThreadId::Main),
      ScheduledAction::crash(1),
  };
  try {
    run_schedule(cfg, late_crash);
    FAIL("expected ScheduleError");
  } catch (const ScheduleError& e) {
    CHECK(e.position() == 2);
    CHECK(e.rule() == "lambda-threshold");
  }
}

TEST_CASE("crash before any step leaves the survivor a one-bot collect") {
  Config cfg = make_cfg(2, 1, 1, {3, 9});
  std::vector<ScheduledAction> sched = {ScheduledAction::crash(2)};
  for (int i = 0; i < 12; ++i) sched.push_back(ScheduledAction::step(1, ThreadId::Main));
  Trace t = run_schedule(cfg, sched);
  CHECK(t.complete);
  REQUIRE(t.decisions.size() == 1);
  CHECK(t.decisions[0].pid == 1);
  CHECK(t.decisions[0].value == 3);
  // The collect saw INPUT[2] = bot exactly once on its way through.
  bool saw_bot_read = false;
  for (const TraceEvent& e : t.events) {
    if (e.kind == TraceEvent::Kind::Access && e.op == AccessKind::Read && e.reg &&
        e.reg->to_string() == "INPUT[2]" && e.value && e.value->is_bot())
      saw_bot_read = true;
  }
  CHECK(saw_bot_read);
  CHECK(check_trace(t, cfg).all_pass());
}

TEST_CASE("adopt path: thread T, the lock, and DEC hand-off work end to end") {
  Config cfg = make_cfg(2, 1, 0, {0, 1});
  Trace t = run_schedule(cfg, adopt_path_schedule());
  CHECK(t.complete);
  std::map<int, int> decided;
  for (const DecisionRecord& d : t.decisions) decided[d.pid] = d.value;
  CHECK(decided == std::map<int, int>{{1, 0}, {2, 0}});
  CHECK(check_trace(t, cfg).all_pass());
  // Exactly one DEC write (the lock winner's), carrying the decided value.
  int dec_writes = 0;
  for (const TraceEvent& e : t.events) {
    if (e.kind == TraceEvent::Kind::Access && e.op == AccessKind::Write && e.reg &&
        e.reg->to_string() == "DEC") {
      ++dec_writes;
      CHECK(*e.value == Value::integer(0));
      CHECK(e.thread == ThreadId::T);
    }
  }
  CHECK(dec_writes == 1);
}

TEST_CASE("random-run property sweep: legality, purity, discipline") {
  std::mt19937_64 gen(99);
  int checked = 0;
  for (int iter = 0; iter < 120; ++iter) {
    int n = 1 + static_cast<int>(gen() % 4);
    int k = static_cast<int>(gen() % (n + 1));
    int f = static_cast<int>(gen() % (n + 1));
    std::vector<int> inputs;
    for (int i = 0; i < n; ++i) inputs.push_back(static_cast<int>(gen() % 3));
    Config cfg = make_cfg(n, k, f, inputs);
    cfg.seed = gen();
    cfg.max_steps = 20000;
    switch (iter % 4) {
      case 0: cfg.crash_policy = CrashPolicy::none(); break;
      case 1: cfg.crash_policy = CrashPolicy::eager(); break;
      case 2: cfg.crash_policy = CrashPolicy::random(0.1); break;
      case 3: cfg.crash_policy = CrashPolicy::latest_legal(); break;
    }
    Trace t = run_random(cfg);
    Verdict v = check_trace(t, cfg);
    CAPTURE(n);
    CAPTURE(k);
    CAPTURE(f);
    CAPTURE(cfg.seed);
    // Scheduler-produced traces always satisfy the failure model.
    CHECK(v.legality_pass);
    CHECK(v.validity_pass);
    CHECK(v.agreement_pass);

    // Step purity: one access record per scheduler tick.
    std::size_t access_or_crash = 0;
    for (const TraceEvent& e : t.events)
      if (e.kind != TraceEvent::Kind::Decide) ++access_or_crash;
    CHECK(access_or_crash == t.actions.size());

    // SWMR discipline on the statically owned arrays.
    int last_parts = 0;
    std::set<int> dec_values;
    for (const TraceEvent& e : t.events) {
      CHECK(e.parts >= last_parts);  // participation monotonicity
      last_parts = e.parts;
      if (e.kind != TraceEvent::Kind::Access || e.op != AccessKind::Write) continue;
      std::string reg = e.reg->to_string();
      if (reg.rfind("INPUT[", 0) == 0 || reg.rfind("AC.", 0) == 0) {
        CHECK(reg.find('[' + std::to_string(e.pid) + ']') != std::string::npos);
      }
      if (reg == "DEC") dec_values.insert(e.value->as_int());
    }
    CHECK(dec_values.size() <= 1);  // all DEC writes in a run carry one value
    ++checked;
  }
  CHECK(checked == 120);
}
