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

#include <set>

#include "lcsim/errors.hpp"
#include "lcsim/explorer.hpp"
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

}  // namespace

TEST_CASE("failure-free n=2 exploration passes and terminals agree") {
  Config cfg = make_cfg(2, 0, 0, {0, 1});
  int terminals = 0;
  ExplorationReport r = explore(cfg, kDefaultStateCap, [&](const SystemState& s) {
    ++terminals;
    auto d = s.decisions();
    REQUIRE(d.size() == 2);
    CHECK(d.at(1) == d.at(2));
  });
  CHECK(r.pass());
  CHECK(r.safety_violations.empty());
  CHECK(r.liveness_pass);
  CHECK(r.crash_edge_count == 0);
  CHECK(terminals > 0);
}

TEST_CASE("min rule: inputs (3,9) with k=0 can only decide 3") {
  Config cfg = make_cfg(2, 0, 0, {3, 9});
  ExplorationReport r = explore(cfg, kDefaultStateCap, [&](const SystemState& s) {
    for (auto [pid, val] : s.decisions()) CHECK(val == 3);
  });
  CHECK(r.pass());
}

TEST_CASE("crash edges respect the participation threshold") {
  Config cfg = make_cfg(2, 1, 1, {0, 1});  // lambda = 1
  ExplorationReport r = explore(cfg);
  CHECK(r.pass());
  CHECK(r.crash_edge_count > 0);
  CHECK(r.max_parts_at_crash <= 1);

  Config zero = make_cfg(2, 2, 2, {0, 1});  // lambda = 0: initial failures only
  ExplorationReport rz = explore(zero);
  CHECK(rz.pass());
  CHECK(rz.crash_edge_count > 0);
  CHECK(rz.max_parts_at_crash == 0);
}

TEST_CASE("two explorations of one cfg yield identical graphs") {
  Config cfg = make_cfg(2, 1, 1, {0, 1});
  ExplorationReport a = explore(cfg);
  ExplorationReport b = explore(cfg);
  CHECK(a.state_count == b.state_count);
  CHECK(a.transition_count == b.transition_count);
  CHECK(a.crash_edge_count == b.crash_edge_count);
}

TEST_CASE("state cap truncates honestly") {
  Config cfg = make_cfg(2, 1, 1, {0, 1});
  ExplorationReport r = explore(cfg, 50);
  CHECK(r.truncated);
  CHECK_FALSE(r.pass());
  CHECK(r.state_count <= 50);
}

TEST_CASE("tightness witness at (2,0,1): survivor loops in its collect") {
  Config cfg = make_cfg(2, 0, 1, {0, 1});
  TightnessWitness w = find_tightness_witness(cfg);
  REQUIRE(w.status == TightnessWitness::Status::Found);
  CHECK(w.report.safety_violations.empty());
  CHECK_FALSE(w.report.liveness_pass);

  // The witness prefix must replay legally and leave the undecided process
  // alive and undecided.
  Trace t = run_schedule(cfg, w.schedule);
  CHECK_FALSE(t.complete);
  Verdict v = check_trace(t, cfg);
  CHECK(v.legality_pass);
  bool witness_undecided = true, witness_crashed = false;
  for (const DecisionRecord& d : t.decisions)
    if (d.pid == w.undecided_pid) witness_undecided = false;
  for (const TraceEvent& e : t.events)
    if (e.kind == TraceEvent::Kind::Crash && e.pid == w.undecided_pid)
      witness_crashed = true;
  CHECK(witness_undecided);
  CHECK_FALSE(witness_crashed);
}

TEST_CASE("tightness witness requires f = k + 1") {
  Config cfg = make_cfg(2, 0, 0, {0, 1});
  CHECK_THROWS_AS(find_tightness_witness(cfg), ConfigError);
}

TEST_CASE("adopt-commit object: uniform proposals always commit") {
  int terminals = 0;
  ExplorationReport r =
      explore_adopt_commit(2, {4, 4}, kDefaultStateCap, [&](const AcSystemState& s) {
        ++terminals;
        for (const AcCursor& c : s.cursors) {
          CHECK(c.result.tag == AcTag::Commit);
          CHECK(c.result.value == Value::integer(4));
        }
      });
  CHECK(r.pass());
  CHECK(terminals > 0);
}

TEST_CASE("adopt-commit object: {0,1} passes all properties and reaches an adopt") {
  bool saw_adopt = false;
  ExplorationReport r =
      explore_adopt_commit(2, {0, 1}, kDefaultStateCap, [&](const AcSystemState& s) {
        for (const AcCursor& c : s.cursors)
          saw_adopt |= c.result.tag == AcTag::Adopt;
      });
  CHECK(r.pass());
  CHECK(r.safety_violations.empty());
  CHECK(saw_adopt);
}

TEST_CASE("lock object: n=2 and n=3 pass exclusion and always elect a winner") {
  for (int n : {2, 3}) {
    ExplorationReport r = explore_arm(n);
    CAPTURE(n);
    CHECK(r.pass());
    CHECK(r.safety_violations.empty());
    CHECK(r.liveness_pass);
  }
}

TEST_CASE("explore_object dispatches on the object kind") {
  CHECK(explore_object(ObjectKind::AdoptCommit, 2, {1, 1}).pass());
  CHECK(explore_object(ObjectKind::Arm, 2, {}).pass());
}

TEST_CASE("explorer rejects oversized domains") {
  Config cfg = make_cfg(2, 0, 0, {0, 1000});
  CHECK_THROWS_AS(explore(cfg), ConfigError);
}
