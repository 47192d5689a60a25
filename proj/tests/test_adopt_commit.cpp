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

#include <algorithm>
#include <functional>
#include <optional>
#include <vector>

#include "lcsim/adopt_commit.hpp"
#include "lcsim/errors.hpp"

using namespace lcsim;

namespace {

// Independent oracle: walk every interleaving of the cursors' fixed-length
// step sequences by plain depth-first search (no deduplication, no explorer
// machinery) and hand every completed outcome vector to `check`.
void for_all_completions(
    const std::vector<int>& proposals,
    const std::function<void(const std::vector<AcResult>&)>& check) {
  int n = static_cast<int>(proposals.size());
  RegisterFile file = new_register_file(n, 0);
  std::vector<AcCursor> cursors;
  for (int pid = 1; pid <= n; ++pid)
    cursors.push_back(ac_init(pid, Value::integer(proposals[pid - 1]), n));

  std::function<void(const RegisterFile&, const std::vector<AcCursor>&)> go =
      [&](const RegisterFile& f, const std::vector<AcCursor>& cs) {
        bool all_done = true;
        for (int i = 0; i < n; ++i) {
          if (cs[static_cast<std::size_t>(i)].done()) continue;
          all_done = false;
          RegisterFile f2 = f;
          std::vector<AcCursor> cs2 = cs;
          ac_step(cs2[static_cast<std::size_t>(i)], f2);
          go(f2, cs2);
        }
        if (all_done) {
          std::vector<AcResult> results;
          for (const AcCursor& c : cs) results.push_back(c.result);
          check(results);
        }
      };
  go(file, cursors);
}

int count_own_steps_to_done(AcCursor c, RegisterFile& file) {
  int steps = 0;
  while (!c.done()) {
    ac_step(c, file);
    ++steps;
  }
  return steps;
}

}  // namespace

TEST_CASE("ac_init positions the cursor; bot proposals are rejected") {
  AcCursor c = ac_init(1, Value::integer(5), 2);
  CHECK(c.pid == 1);
  CHECK(c.phase == AcCursor::Phase::WriteA);
  CHECK(c.proposal == Value::integer(5));
  AcCursor c2 = ac_init(2, Value::integer(0), 2);
  CHECK(c2.phase == AcCursor::Phase::WriteA);
  CHECK_THROWS_AS(ac_init(1, Value::bot(), 2), InternalFault);
}

TEST_CASE("solo ac_propose commits its own value") {
  RegisterFile file = new_register_file(1, 0);
  AcCursor c = ac_init(1, Value::integer(5), 1);
  std::optional<AcResult> result;
  int steps = 0;
  while (!c.done()) {
    AcStepOutcome out = ac_step(c, file);
    ++steps;
    if (out.result) result = out.result;
  }
  REQUIRE(result.has_value());
  CHECK(result->tag == AcTag::Commit);
  CHECK(result->value == Value::integer(5));
  CHECK(steps == ac_step_bound(1));
  CHECK_THROWS_AS(ac_step(c, file), InternalFault);  // one-shot
}

TEST_CASE("step bound formula matches a simulated solo run") {
  CHECK(ac_step_bound(1) == 4);
  CHECK(ac_step_bound(3) == 8);
  CHECK(ac_step_bound(9) == 20);
  for (int n : {1, 2, 3, 5, 9}) {
    RegisterFile file = new_register_file(n, 0);
    AcCursor c = ac_init(1, Value::integer(1), n);
    CHECK(count_own_steps_to_done(c, file) == ac_step_bound(n));
  }
}

TEST_CASE("same proposals commit in every interleaving (n=2)") {
  for_all_completions({4, 4}, [](const std::vector<AcResult>& rs) {
    for (const AcResult& r : rs) {
      CHECK(r.tag == AcTag::Commit);
      CHECK(r.value == Value::integer(4));
    }
  });
}

TEST_CASE("validity and weak agreement over all interleavings (n=2, {0,1})") {
  int adopt_outcomes = 0;
  int completions = 0;
  for_all_completions({0, 1}, [&](const std::vector<AcResult>& rs) {
    ++completions;
    std::optional<int> committed;
    for (const AcResult& r : rs) {
      int v = r.value.as_int();
      CHECK((v == 0 || v == 1));  // validity
      if (r.tag == AcTag::Commit) committed = v;
      if (r.tag == AcTag::Adopt) ++adopt_outcomes;
    }
    if (committed) {
      for (const AcResult& r : rs) CHECK(r.value.as_int() == *committed);
    }
  });
  CHECK(completions == 924);  // interleavings of two 6-step sequences
  CHECK(adopt_outcomes > 0);  // some schedule forces an adopt
}

TEST_CASE("wait-freedom: a cursor finishes in its own step bound no matter "
          "when the peer stalls") {
  // Peer p2 executes j of its steps and then stops (covers every crash
  // prefix); p1 must still finish in exactly 2n+2 own steps.
  int n = 2;
  for (int peer_steps = 0; peer_steps <= ac_step_bound(n); ++peer_steps) {
    RegisterFile file = new_register_file(n, 0);
    AcCursor p1 = ac_init(1, Value::integer(0), n);
    AcCursor p2 = ac_init(2, Value::integer(1), n);
    for (int j = 0; j < peer_steps && !p2.done(); ++j) ac_step(p2, file);
    CHECK(count_own_steps_to_done(p1, file) == ac_step_bound(n));
  }
}
