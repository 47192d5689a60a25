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

#include "lcsim/arm_mutex.hpp"

#include "lcsim/errors.hpp"

namespace lcsim {

ArmCursor arm_init(int pid, int n) {
  if (n < 1 || pid < 1 || pid > n) throw InternalFault("arm_init: pid out of range");
  ArmCursor c;
  c.pid = pid;
  c.levels = arm_level_count(n);
  c.level = 0;
  c.node = (pid - 1) / 2;
  c.side = (pid - 1) % 2;
  c.phase = ArmCursor::Phase::WriteFlag;
  return c;
}

namespace {

// Winner of node (level, node) feeds side node%2 of node/2 one level up;
// past the top level the cursor has acquired.
bool advance(ArmCursor& c) {
  ++c.level;
  if (c.level >= c.levels) {
    c.phase = ArmCursor::Phase::Acquired;
    return true;
  }
  c.side = c.node % 2;
  c.node /= 2;
  c.phase = ArmCursor::Phase::WriteFlag;
  return false;
}

}  // namespace

ArmStepOutcome arm_step(ArmCursor& c, RegisterFile& file) {
  if (c.acquired()) throw InternalFault("arm_step: cursor already acquired");
  if (c.levels == 0) {
    // Solo system: no tournament registers; the single step acquires.
    c.phase = ArmCursor::Phase::Acquired;
    return {Access::local(), true};
  }
  switch (c.phase) {
    case ArmCursor::Phase::WriteFlag: {
      RegisterId reg = RegisterId::arm(c.level, c.node, c.side);
      Value one = Value::integer(1);
      file.write(reg, one, c.pid);
      c.phase = ArmCursor::Phase::WriteTurn;
      return {Access::write(reg, one), false};
    }
    case ArmCursor::Phase::WriteTurn: {
      RegisterId reg = RegisterId::arm(c.level, c.node, kArmTurn);
      Value turn = Value::integer(c.side);
      file.write(reg, turn, c.pid);
      c.phase = ArmCursor::Phase::ReadPeerFlag;
      return {Access::write(reg, turn), false};
    }
    case ArmCursor::Phase::ReadPeerFlag: {
      RegisterId reg = RegisterId::arm(c.level, c.node, 1 - c.side);
      Value v = file.read(reg);
      bool won = false;
      if (v.is_bot()) {
        won = advance(c);
      } else {
        c.phase = ArmCursor::Phase::ReadTurn;
      }
      return {Access::read(reg, v), won};
    }
    case ArmCursor::Phase::ReadTurn: {
      RegisterId reg = RegisterId::arm(c.level, c.node, kArmTurn);
      Value v = file.read(reg);
      bool won = false;
      if (v.is_bot() || v.as_int() != c.side) {
        won = advance(c);
      } else {
        c.phase = ArmCursor::Phase::ReadPeerFlag;  // spin
      }
      return {Access::read(reg, v), won};
    }
    case ArmCursor::Phase::Acquired:
      break;
  }
  throw InternalFault("arm_step: bad phase");
}

}  // namespace lcsim
