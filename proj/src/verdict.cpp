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

#include "lcsim/verdict.hpp"

#include <algorithm>
#include <bit>

namespace lcsim {

namespace {

void check_legality(const Trace& t, const Config& cfg, Verdict& v) {
  std::uint32_t participated = 0;
  std::uint32_t crashed = 0;
  int crashes = 0;
  auto fail = [&](const TraceEvent& e, const std::string& rule) {
    if (!v.legality_pass) return;  // keep the first offending step
    v.legality_pass = false;
    v.legality_step = e.index;
    v.legality_rule = rule;
  };
  for (const TraceEvent& e : t.events) {
    if (e.pid < 1 || e.pid > cfg.n) {
      fail(e, "pid outside 1..n");
      continue;
    }
    std::uint32_t bit = 1u << (e.pid - 1);
    if (crashed & bit) {
      fail(e, "event by a crashed process (crash is absorbing)");
      continue;
    }
    if (e.kind == TraceEvent::Kind::Crash) {
      int parts = std::popcount(participated);
      if (parts > cfg.lambda())
        fail(e, "crash after participation bypassed lambda = " +
                    std::to_string(cfg.lambda()));
      if (crashes >= cfg.f)
        fail(e, "crash beyond budget f = " + std::to_string(cfg.f));
      crashed |= bit;
      ++crashes;
    } else if (e.kind == TraceEvent::Kind::Access && e.op != AccessKind::Local) {
      participated |= bit;
    }
    // Recorded counters must match the re-derivation.
    if (e.parts != std::popcount(participated))
      fail(e, "recorded participation count mismatch");
    if (e.crashes != crashes) fail(e, "recorded crash count mismatch");
  }
}

}  // namespace

Verdict check_trace(const Trace& t, const Config& cfg) {
  Verdict v;
  v.complete = t.complete;

  for (const DecisionRecord& d : t.decisions) {
    if (std::find(cfg.inputs.begin(), cfg.inputs.end(), d.value) == cfg.inputs.end()) {
      v.validity_pass = false;
      v.validity_witness = d;
      break;
    }
  }

  for (std::size_t i = 1; i < t.decisions.size(); ++i) {
    if (t.decisions[i].value != t.decisions[0].value) {
      v.agreement_pass = false;
      v.agreement_witness = {t.decisions[0], t.decisions[i]};
      break;
    }
  }

  check_legality(t, cfg, v);

  // Correct = never crashed in this trace.
  std::uint32_t crashed = 0;
  for (const TraceEvent& e : t.events) {
    if (e.kind == TraceEvent::Kind::Crash && e.pid >= 1 && e.pid <= cfg.n)
      crashed |= 1u << (e.pid - 1);
  }
  std::uint32_t decided = 0;
  for (const DecisionRecord& d : t.decisions) {
    if (d.pid >= 1 && d.pid <= cfg.n) decided |= 1u << (d.pid - 1);
  }
  for (int pid = 1; pid <= cfg.n; ++pid) {
    std::uint32_t bit = 1u << (pid - 1);
    if (!(crashed & bit) && !(decided & bit)) v.undecided.push_back(pid);
  }
  if (!t.complete) {
    v.termination = Verdict::Termination::Inconclusive;
  } else if (v.undecided.empty()) {
    v.termination = Verdict::Termination::Pass;
  } else {
    // A trace claiming completion with undecided correct processes is
    // contradictory; honest runs never produce this.
    v.termination = Verdict::Termination::Fail;
  }
  return v;
}

}  // namespace lcsim
