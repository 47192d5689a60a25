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

#include "lcsim/consensus.hpp"

#include <algorithm>

#include "lcsim/errors.hpp"

namespace lcsim {

ProcState proc_init(int pid, const Value& input, int n, int k) {
  if (!input.is_int())
    throw InternalFault("proc_init: proposal must be an integer, got " +
                        input.to_string());
  if (n < 1 || pid < 1 || pid > n || k < 0 || k > n)
    throw InternalFault("proc_init: bad parameters");
  ProcState p;
  p.pid = pid;
  p.n = n;
  p.k = k;
  p.input = input;
  p.collected.assign(static_cast<std::size_t>(n), Value::bot());
  return p;
}

EnabledThreads enabled_threads(const ProcState& p) {
  EnabledThreads e;
  e.main = p.main_pc != ProcState::MainPc::Decided;
  e.t = p.thread_t == ProcState::ThreadT::Arm ||
        p.thread_t == ProcState::ThreadT::ReadDec ||
        p.thread_t == ProcState::ThreadT::WriteDec;
  return e;
}

namespace {

ProcStepResult step_main(ProcState& p, RegisterFile& file) {
  using MainPc = ProcState::MainPc;
  switch (p.main_pc) {
    case MainPc::L1Write: {
      RegisterId reg = RegisterId::input(p.pid);
      file.write(reg, p.input, p.pid);
      p.main_pc = MainPc::L2Read;
      p.collect_j = 1;
      return {Access::write(reg, p.input), std::nullopt};
    }
    case MainPc::L2Read: {
      RegisterId reg = RegisterId::input(p.collect_j);
      Value v = file.read(reg);
      p.collected[static_cast<std::size_t>(p.collect_j - 1)] = v;
      if (p.collect_j < p.n) {
        ++p.collect_j;
      } else {
        // Loop condition fused with the read of INPUT[n]: proceed iff the
        // collect holds at most k bot entries, else start a fresh collect.
        auto bots = std::count_if(p.collected.begin(), p.collected.end(),
                                  [](const Value& e) { return e.is_bot(); });
        if (bots <= p.k) {
          p.main_pc = MainPc::L3Min;
        } else {
          std::fill(p.collected.begin(), p.collected.end(), Value::bot());
          p.collect_j = 1;
        }
      }
      return {Access::read(reg, v), std::nullopt};
    }
    case MainPc::L3Min: {
      p.val = min_value(p.collected);
      if (!p.val.is_int())
        throw InternalFault("L3: collect contains no deposited value");
      p.ac = ac_init(p.pid, p.val, p.n);
      p.main_pc = MainPc::L4Ac;
      return {Access::local(), std::nullopt};
    }
    case MainPc::L4Ac: {
      AcStepOutcome out = ac_step(*p.ac, file);
      if (out.result) {
        p.tag = out.result->tag;
        p.res = out.result->value;
        p.ac.reset();
        if (*p.tag == AcTag::Commit) {
          p.main_pc = MainPc::L5WriteDec;
        } else {
          // Line 6: launch thread T, then wait on DEC at line 7.
          p.thread_t = ProcState::ThreadT::Arm;
          p.arm = arm_init(p.pid, p.n);
          p.main_pc = MainPc::L7ReadDec;
        }
      }
      return {out.access, std::nullopt};
    }
    case MainPc::L5WriteDec: {
      RegisterId reg = RegisterId::dec();
      file.write(reg, p.res, p.pid);
      p.main_pc = MainPc::L5ReadDec;
      return {Access::write(reg, p.res), std::nullopt};
    }
    case MainPc::L5ReadDec: {
      RegisterId reg = RegisterId::dec();
      Value d = file.read(reg);
      if (!d.is_int()) throw InternalFault("L5: DEC read back as bot");
      p.main_pc = MainPc::Decided;
      p.decided_value = d;
      return {Access::read(reg, d), d};
    }
    case MainPc::L7ReadDec: {
      RegisterId reg = RegisterId::dec();
      Value d = file.read(reg);
      if (d.is_bot()) return {Access::read(reg, d), std::nullopt};
      // kill(T) is atomic with the successful read: T never runs again.
      p.thread_t = ProcState::ThreadT::Killed;
      p.arm.reset();
      p.main_pc = MainPc::Decided;
      p.decided_value = d;
      return {Access::read(reg, d), d};
    }
    case MainPc::Decided:
      break;
  }
  throw InternalFault("proc_step: main thread not enabled");
}

ProcStepResult step_t(ProcState& p, RegisterFile& file) {
  using ThreadT = ProcState::ThreadT;
  switch (p.thread_t) {
    case ThreadT::Arm: {
      ArmStepOutcome out = arm_step(*p.arm, file);
      if (out.acquired) {
        p.arm.reset();
        p.thread_t = ThreadT::ReadDec;
      }
      return {out.access, std::nullopt};
    }
    case ThreadT::ReadDec: {
      RegisterId reg = RegisterId::dec();
      Value d = file.read(reg);
      p.thread_t = d.is_bot() ? ThreadT::WriteDec : ThreadT::Done;
      return {Access::read(reg, d), std::nullopt};
    }
    case ThreadT::WriteDec: {
      RegisterId reg = RegisterId::dec();
      file.write(reg, p.res, p.pid);
      p.thread_t = ThreadT::Done;
      return {Access::write(reg, p.res), std::nullopt};
    }
    case ThreadT::NotLaunched:
    case ThreadT::Done:
    case ThreadT::Killed:
      break;
  }
  throw InternalFault("proc_step: thread T not enabled");
}

}  // namespace

ProcStepResult proc_step(ProcState& p, ThreadId thread, RegisterFile& file) {
  if (!enabled_threads(p).has(thread))
    throw InternalFault("proc_step: thread not enabled for p" + std::to_string(p.pid));
  return thread == ThreadId::Main ? step_main(p, file) : step_t(p, file);
}

}  // namespace lcsim
