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

#ifndef LCSIM_VERDICT_HPP
#define LCSIM_VERDICT_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lcsim/runtime.hpp"

namespace lcsim {

/// Evaluation of a finished trace against the agreement-problem definition
/// and the failure-model legality rules. Termination on a bounded run is
/// tri-state: a finite prefix can never refute liveness, so incomplete runs
/// are inconclusive (refutation is the explorer's job).
struct Verdict {
  enum class Termination : std::uint8_t { Pass = 0, Inconclusive = 1, Fail = 2 };

  bool validity_pass = true;
  std::optional<DecisionRecord> validity_witness;

  bool agreement_pass = true;
  std::optional<std::pair<DecisionRecord, DecisionRecord>> agreement_witness;

  Termination termination = Termination::Pass;
  std::vector<int> undecided;  // correct pids without a decision

  bool legality_pass = true;
  std::optional<std::uint64_t> legality_step;
  std::string legality_rule;

  bool complete = false;

  bool all_pass() const {
    return validity_pass && agreement_pass && legality_pass &&
           termination == Termination::Pass;
  }

  /// True when no safety or legality rule is violated (termination may be
  /// inconclusive).
  bool no_violation() const {
    return validity_pass && agreement_pass && legality_pass &&
           termination != Termination::Fail;
  }
};

/// Pure check of a trace against cfg: validity, agreement, termination, and
/// a re-derivation of the crash-legality rules from the event stream.
Verdict check_trace(const Trace& t, const Config& cfg);

}  // namespace lcsim

#endif  // LCSIM_VERDICT_HPP
