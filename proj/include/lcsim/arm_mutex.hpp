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

#ifndef LCSIM_ARM_MUTEX_HPP
#define LCSIM_ARM_MUTEX_HPP

#include <cstdint>

#include "lcsim/registers.hpp"

namespace lcsim {

/// One-shot acquire-restricted mutex: a tournament of two-process Peterson
/// locks with no release. At most one invoker ever returns from acquire();
/// the others keep spinning. Spin steps are reads only and always enabled.
///
/// Per node (side s, peer 1-s):
///   write flag[s] <- 1; write turn <- s;
///   read flag[peer]: bot           => advance
///   read turn:       turn != side  => advance, else spin again
///
/// Advancing past the top level acquires. Absent contenders (n not a power
/// of two) leave their flag at bot, so present contenders pass through.
struct ArmCursor {
  enum class Phase : std::uint8_t {
    WriteFlag = 0,
    WriteTurn = 1,
    ReadPeerFlag = 2,
    ReadTurn = 3,
    Acquired = 4
  };

  int pid = 0;
  int levels = 0;  // ceil(log2 n)
  int level = 0;
  int node = 0;
  int side = 0;
  Phase phase = Phase::WriteFlag;

  bool acquired() const noexcept { return phase == Phase::Acquired; }

  friend bool operator==(const ArmCursor&, const ArmCursor&) = default;
};

/// Cursor at pid's leaf: level 0, node (pid-1)/2, side (pid-1)%2. For n = 1
/// there is no tournament; the first step acquires.
ArmCursor arm_init(int pid, int n);

struct ArmStepOutcome {
  Access access;
  bool acquired = false;  // true on the step that wins past the top level
};

ArmStepOutcome arm_step(ArmCursor& c, RegisterFile& file);

}  // namespace lcsim

#endif  // LCSIM_ARM_MUTEX_HPP
