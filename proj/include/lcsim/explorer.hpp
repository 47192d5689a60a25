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

#ifndef LCSIM_EXPLORER_HPP
#define LCSIM_EXPLORER_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lcsim/adopt_commit.hpp"
#include "lcsim/arm_mutex.hpp"
#include "lcsim/runtime.hpp"

namespace lcsim {

inline constexpr std::uint64_t kDefaultStateCap = 5'000'000;

struct SafetyViolation {
  std::string property;  // "validity" | "agreement" | "mutual-exclusion"
  std::string detail;
  std::uint64_t state_digest = 0;
  std::vector<ScheduledAction> prefix;  // replayable path from the initial state
};

/// A reachable bottom strongly connected component in which some non-crashed
/// process never decides: under fairness a run trapped there refutes
/// termination.
struct BadScc {
  std::uint64_t state_digest = 0;  // representative member
  std::uint64_t scc_size = 0;
  int undecided_pid = 0;
  std::vector<ScheduledAction> prefix;
};

struct ExplorationReport {
  std::uint64_t state_count = 0;
  std::uint64_t transition_count = 0;
  bool truncated = false;  // state cap hit; results are partial, never a pass
  std::vector<SafetyViolation> safety_violations;
  bool liveness_pass = false;  // meaningful only when not truncated
  std::vector<BadScc> bad_sccs;
  std::uint64_t crash_edge_count = 0;
  int max_parts_at_crash = -1;  // participation count at the latest crash edge

  bool pass() const {
    return !truncated && safety_violations.empty() && liveness_pass;
  }
};

/// Bounded exhaustive search over all schedules and legal crash choices,
/// with canonical deduplication. Safety (validity + agreement over recorded
/// decisions) is checked on every reachable state. Liveness passes iff every
/// bottom SCC is a terminal state with all non-crashed processes decided.
/// `terminal_visitor`, when set, is called once per terminal state.
ExplorationReport explore(
    const Config& cfg, std::uint64_t state_cap = kDefaultStateCap,
    const std::function<void(const SystemState&)>& terminal_visitor = {});

struct TightnessWitness {
  enum class Status : std::uint8_t { Found = 0, None = 1, Inconclusive = 2 };

  Status status = Status::None;
  std::vector<ScheduledAction> schedule;  // prefix reaching the bad bottom SCC
  int undecided_pid = 0;
  ExplorationReport report;
};

/// Witness search at the boundary budget f = k + 1: explores and extracts
/// one bad bottom SCC with a concrete schedule prefix. Status None means the
/// exploration passed outright, i.e. the configuration tolerated f = k + 1;
/// callers surface that prominently.
TightnessWitness find_tightness_witness(const Config& cfg,
                                        std::uint64_t state_cap = kDefaultStateCap);

// Standalone object exploration: all interleavings of the objects' own step
// cursors, no crash edges (safety over every reachable state covers every
// crash pattern, since a crashed process's run is a prefix).

struct AcSystemState {
  RegisterFile file;
  std::vector<AcCursor> cursors;

  friend bool operator==(const AcSystemState&, const AcSystemState&) = default;
};

struct ArmSystemState {
  RegisterFile file;
  std::vector<ArmCursor> cursors;

  friend bool operator==(const ArmSystemState&, const ArmSystemState&) = default;
};

/// Checks Termination (each cursor finishes in exactly ac_step_bound(n) own
/// steps), Validity, Obligation, and Weak agreement across all
/// interleavings.
ExplorationReport explore_adopt_commit(
    int n, const std::vector<int>& proposals,
    std::uint64_t state_cap = kDefaultStateCap,
    const std::function<void(const AcSystemState&)>& terminal_visitor = {});

/// Checks at-most-one-acquire on every path, and that every bottom SCC of
/// the crash-free object graph contains an acquirer.
ExplorationReport explore_arm(int n, std::uint64_t state_cap = kDefaultStateCap);

enum class ObjectKind : std::uint8_t { AdoptCommit = 0, Arm = 1 };

ExplorationReport explore_object(ObjectKind object, int n,
                                 const std::vector<int>& proposals,
                                 std::uint64_t state_cap = kDefaultStateCap);

}  // namespace lcsim

#endif  // LCSIM_EXPLORER_HPP
