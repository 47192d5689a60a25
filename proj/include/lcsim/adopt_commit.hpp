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

#ifndef LCSIM_ADOPT_COMMIT_HPP
#define LCSIM_ADOPT_COMMIT_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "lcsim/registers.hpp"
#include "lcsim/value.hpp"

namespace lcsim {

enum class AcTag : std::uint8_t { Commit = 0, Adopt = 1 };

struct AcResult {
  AcTag tag = AcTag::Adopt;
  Value value;

  friend bool operator==(const AcResult&, const AcResult&) = default;
};

/// Wait-free one-shot adopt-commit, built from two SWMR register arrays:
///
///   1. write A[pid] <- v
///   2. collect A[1..n]; saw only own value => single, else multi
///   3. write B[pid] <- (single|multi, v)
///   4. collect B[1..n]; all entries (single, w) with one w => (commit, w);
///      some entry (single, w) => (adopt, w), lowest index;
///      otherwise (adopt, v)
///
/// Each step performs exactly one register access; the terminal decision is
/// fused with the last B read, so a cursor finishes in exactly
/// ac_step_bound(n) of its own steps. The scheduler owns all interleaving.
struct AcCursor {
  enum class Phase : std::uint8_t {
    WriteA = 0,
    CollectA = 1,
    WriteB = 2,
    CollectB = 3,
    Done = 4
  };

  int pid = 0;
  int n = 0;
  Value proposal;
  Phase phase = Phase::WriteA;
  int j = 1;                 // collect index, 1..n
  bool single_flag = false;  // set at the end of the A collect
  std::vector<Value> seen_a; // scratch, cleared when a collect completes
  std::vector<Value> seen_b;
  AcResult result;           // valid once phase == Done

  bool done() const noexcept { return phase == Phase::Done; }

  friend bool operator==(const AcCursor&, const AcCursor&) = default;
};

/// Cursor for a one-shot ac_propose(v). The proposal must be an integer.
AcCursor ac_init(int pid, const Value& proposal, int n);

struct AcStepOutcome {
  Access access;
  std::optional<AcResult> result;  // set exactly once, on the final step
};

/// Advance the cursor by one atomic register access. Stepping a Done cursor
/// is an internal fault.
AcStepOutcome ac_step(AcCursor& c, RegisterFile& file);

/// Exact per-process step count of the construction: 2n + 2.
int ac_step_bound(int n);

}  // namespace lcsim

#endif  // LCSIM_ADOPT_COMMIT_HPP
