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

#ifndef LCSIM_RUNTIME_HPP
#define LCSIM_RUNTIME_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lcsim/consensus.hpp"
#include "lcsim/registers.hpp"

namespace lcsim {

/// When the adversary injects crashes during random runs. Legality is always
/// enforced on top: a crash can only hit a live, undecided process while the
/// participation count has not bypassed lambda and budget remains.
struct CrashPolicy {
  enum class Kind : std::uint8_t { None = 0, Eager = 1, Random = 2, LatestLegal = 3 };

  Kind kind = Kind::None;
  double p = 0.0;  // per-tick crash probability for Kind::Random

  static CrashPolicy none() { return {}; }
  static CrashPolicy eager() { return {Kind::Eager, 0.0}; }
  static CrashPolicy random(double p) { return {Kind::Random, p}; }
  static CrashPolicy latest_legal() { return {Kind::LatestLegal, 0.0}; }

  std::string to_string() const;
  static CrashPolicy parse(const std::string& s);  // throws ConfigError

  friend bool operator==(const CrashPolicy&, const CrashPolicy&) = default;
};

struct Config {
  int n = 0;
  int k = 0;
  int f = 0;                    // crash budget
  std::vector<int> inputs;      // one proposal per process
  std::uint64_t seed = 0;
  std::uint64_t max_steps = 100000;
  CrashPolicy crash_policy;

  int lambda() const noexcept { return n - k; }

  friend bool operator==(const Config&, const Config&) = default;
};

/// Participation threshold: crashes are legal only while the number of
/// participating processes is at most lambda = n - k.
int lambda_of(int n, int k);

/// Throws ConfigError naming the offending field.
void validate_config(const Config& cfg);

struct ScheduledAction {
  enum class Kind : std::uint8_t { Step = 0, Crash = 1 };

  Kind kind = Kind::Step;
  int pid = 0;
  ThreadId thread = ThreadId::Main;  // Step only

  static ScheduledAction step(int pid, ThreadId t) {
    return {Kind::Step, pid, t};
  }
  static ScheduledAction crash(int pid) {
    return {Kind::Crash, pid, ThreadId::Main};
  }

  friend bool operator==(const ScheduledAction&, const ScheduledAction&) = default;
};

struct SystemState {
  RegisterFile file;
  std::vector<ProcState> procs;
  std::uint32_t crashed_mask = 0;
  std::uint32_t participated_mask = 0;
  int crash_count = 0;

  bool crashed(int pid) const { return crashed_mask >> (pid - 1) & 1u; }
  bool participated(int pid) const { return participated_mask >> (pid - 1) & 1u; }
  int participation_count() const;

  /// All non-crashed processes have decided (vacuously true if none remain).
  bool all_correct_decided() const;

  std::map<int, int> decisions() const;  // pid -> decided value

  friend bool operator==(const SystemState&, const SystemState&) = default;
};

SystemState init_system(const Config& cfg);

/// Enabled actions in deterministic order: steps pid-major with Main before
/// T, then crashes by pid. A crash of p is offered iff p is live and
/// undecided, budget remains, and |participated| <= lambda.
std::vector<ScheduledAction> enabled_actions(const SystemState& s, const Config& cfg);

struct AppliedEvent {
  int pid = 0;
  ThreadId thread = ThreadId::Main;
  Access access;                 // Step actions only
  std::optional<Value> decided;  // decision made by this step
};

/// Apply one action in place; fills `ev` when non-null. Illegal actions
/// throw ScheduleError (position 0; run_schedule rethrows with the index).
void apply_action(SystemState& s, const ScheduledAction& a, const Config& cfg,
                  AppliedEvent* ev);

struct DecisionRecord {
  int pid = 0;
  int value = 0;
  std::uint64_t step_index = 0;

  friend bool operator==(const DecisionRecord&, const DecisionRecord&) = default;
};

struct TraceEvent {
  enum class Kind : std::uint8_t { Access = 0, Decide = 1, Crash = 2 };

  std::uint64_t index = 0;
  Kind kind = Kind::Access;
  int pid = 0;
  ThreadId thread = ThreadId::Main;            // Access/Decide
  AccessKind op = AccessKind::Local;           // Access only
  std::optional<RegisterId> reg;               // Access reads/writes
  std::optional<Value> value;                  // Access reads/writes + Decide
  int parts = 0;                               // participation count after the event
  int crashes = 0;                             // crash count after the event

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

struct Trace {
  Config cfg;
  std::vector<TraceEvent> events;
  std::vector<ScheduledAction> actions;  // scheduler ticks, replayable
  bool complete = false;
  std::vector<DecisionRecord> decisions;

  friend bool operator==(const Trace&, const Trace&) = default;
};

/// Seeded fair random run. Per tick the crash policy may pick a legal crash;
/// otherwise a uniformly random enabled step runs. Stops once every
/// non-crashed process has decided, or after max_steps ticks (complete =
/// false; a reported outcome, not an error).
Trace run_random(const Config& cfg);

/// Replay an explicit schedule. The first illegal action throws
/// ScheduleError citing its position and the violated rule.
Trace run_schedule(const Config& cfg, const std::vector<ScheduledAction>& schedule);

}  // namespace lcsim

#endif  // LCSIM_RUNTIME_HPP
