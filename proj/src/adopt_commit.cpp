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

#include "lcsim/adopt_commit.hpp"

#include <algorithm>

#include "lcsim/errors.hpp"

namespace lcsim {

AcCursor ac_init(int pid, const Value& proposal, int n) {
  if (!proposal.is_int())
    throw InternalFault("ac_init: proposal must be an integer, got " +
                        proposal.to_string());
  if (n < 1 || pid < 1 || pid > n) throw InternalFault("ac_init: pid out of range");
  AcCursor c;
  c.pid = pid;
  c.n = n;
  c.proposal = proposal;
  c.seen_a.assign(static_cast<std::size_t>(n), Value::bot());
  c.seen_b.assign(static_cast<std::size_t>(n), Value::bot());
  return c;
}

namespace {

AcResult decide_from_b(const AcCursor& c) {
  // Commit iff every non-bot B entry carries the single marker and one
  // common value; the writer's own entry is among them, so that value is its
  // own proposal whenever it wrote (single, v).
  bool all_single = true;
  std::optional<Value> common;
  std::optional<Value> lowest_single;
  for (const Value& e : c.seen_b) {
    if (e.is_bot()) continue;
    if (e.marker() == Marker::Single) {
      if (!lowest_single) lowest_single = Value::integer(e.as_int());
    } else {
      all_single = false;
    }
    if (!common) {
      common = Value::integer(e.as_int());
    } else if (common->as_int() != e.as_int()) {
      all_single = false;  // no single common value
    }
  }
  if (all_single && common) return AcResult{AcTag::Commit, *common};
  if (lowest_single) return AcResult{AcTag::Adopt, *lowest_single};
  return AcResult{AcTag::Adopt, c.proposal};
}

}  // namespace

AcStepOutcome ac_step(AcCursor& c, RegisterFile& file) {
  switch (c.phase) {
    case AcCursor::Phase::WriteA: {
      file.write(RegisterId::ac_a(c.pid), c.proposal, c.pid);
      c.phase = AcCursor::Phase::CollectA;
      c.j = 1;
      return {Access::write(RegisterId::ac_a(c.pid), c.proposal), std::nullopt};
    }
    case AcCursor::Phase::CollectA: {
      RegisterId reg = RegisterId::ac_a(c.j);
      Value v = file.read(reg);
      c.seen_a[static_cast<std::size_t>(c.j - 1)] = v;
      if (c.j < c.n) {
        ++c.j;
      } else {
        c.single_flag = std::all_of(c.seen_a.begin(), c.seen_a.end(), [&](const Value& e) {
          return e.is_bot() || e == c.proposal;
        });
        std::fill(c.seen_a.begin(), c.seen_a.end(), Value::bot());
        c.phase = AcCursor::Phase::WriteB;
      }
      return {Access::read(reg, v), std::nullopt};
    }
    case AcCursor::Phase::WriteB: {
      Value rec = Value::marked(c.single_flag ? Marker::Single : Marker::Multi,
                                c.proposal.as_int());
      file.write(RegisterId::ac_b(c.pid), rec, c.pid);
      c.phase = AcCursor::Phase::CollectB;
      c.j = 1;
      return {Access::write(RegisterId::ac_b(c.pid), rec), std::nullopt};
    }
    case AcCursor::Phase::CollectB: {
      RegisterId reg = RegisterId::ac_b(c.j);
      Value v = file.read(reg);
      c.seen_b[static_cast<std::size_t>(c.j - 1)] = v;
      if (c.j < c.n) {
        ++c.j;
        return {Access::read(reg, v), std::nullopt};
      }
      c.result = decide_from_b(c);
      std::fill(c.seen_b.begin(), c.seen_b.end(), Value::bot());
      c.phase = AcCursor::Phase::Done;
      return {Access::read(reg, v), c.result};
    }
    case AcCursor::Phase::Done:
      break;
  }
  throw InternalFault("ac_step: cursor already done");
}

int ac_step_bound(int n) {
  if (n < 1) throw InternalFault("ac_step_bound: n < 1");
  return 2 * n + 2;
}

}  // namespace lcsim
