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

#ifndef LCSIM_CONSENSUS_HPP
#define LCSIM_CONSENSUS_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "lcsim/adopt_commit.hpp"
#include "lcsim/arm_mutex.hpp"
#include "lcsim/registers.hpp"

namespace lcsim {

enum class ThreadId : std::uint8_t { Main = 0, T = 1 };

/// One process of the consensus algorithm, as a two-thread state machine
/// with one shared access (or one local transition) per step.
///
/// Main thread:
///   L1Write    write INPUT[pid] <- in
///   L2Read(j)  read INPUT[j]; at j = n, exit the collect loop iff at most k
///              entries are bot, else restart a fresh collect (check fused
///              with the last read)
///   L3Min      val <- min over the collect (local)
///   L4Ac       one adopt-commit step; on (commit, v) go decide via DEC, on
///              (adopt, v) launch thread T and wait on DEC
///   L5WriteDec write DEC <- res, then L5ReadDec: read DEC and decide it
///   L7ReadDec  read DEC; once non-bot, kill T and decide (same step)
///
/// Thread T (launched only on adopt):
///   Arm        one tournament-lock step; the unique winner proceeds
///   ReadDec    read DEC; bot => WriteDec, else Done
///   WriteDec   write DEC <- res, then Done
struct ProcState {
  enum class MainPc : std::uint8_t {
    L1Write = 0,
    L2Read = 1,
    L3Min = 2,
    L4Ac = 3,
    L5WriteDec = 4,
    L5ReadDec = 5,
    L7ReadDec = 6,
    Decided = 7
  };

  enum class ThreadT : std::uint8_t {
    NotLaunched = 0,
    Arm = 1,
    ReadDec = 2,
    WriteDec = 3,
    Done = 4,
    Killed = 5
  };

  int pid = 0;
  int n = 0;
  int k = 0;
  Value input;                  // in_i

  MainPc main_pc = MainPc::L1Write;
  std::vector<Value> collected; // input_i[1..n], reset on each fresh collect
  int collect_j = 1;
  Value val;                    // val_i, set at L3Min
  std::optional<AcTag> tag;     // tag_i
  Value res;                    // res_i, bot until the adopt-commit returns
  Value decided_value;          // set with main_pc == Decided
  std::optional<AcCursor> ac;   // live during L4Ac

  ThreadT thread_t = ThreadT::NotLaunched;
  std::optional<ArmCursor> arm; // live while thread_t == Arm

  bool decided() const noexcept { return main_pc == MainPc::Decided; }

  friend bool operator==(const ProcState&, const ProcState&) = default;
};

ProcState proc_init(int pid, const Value& input, int n, int k);

struct EnabledThreads {
  bool main = false;
  bool t = false;

  bool none() const noexcept { return !main && !t; }
  bool has(ThreadId id) const noexcept { return id == ThreadId::Main ? main : t; }
};

/// Main is enabled until the process decides; T while it sits in the lock,
/// the DEC check, or the DEC write.
EnabledThreads enabled_threads(const ProcState& p);

struct ProcStepResult {
  Access access;
  std::optional<Value> decided;  // decision produced by this step
};

/// Execute one step of the given thread. Stepping a disabled thread is an
/// internal fault.
ProcStepResult proc_step(ProcState& p, ThreadId thread, RegisterFile& file);

}  // namespace lcsim

#endif  // LCSIM_CONSENSUS_HPP
