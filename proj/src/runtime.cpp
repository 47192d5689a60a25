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

#include "lcsim/runtime.hpp"

#include <bit>
#include <cstdio>
#include <random>

#include "lcsim/errors.hpp"

namespace lcsim {

std::string CrashPolicy::to_string() const {
  switch (kind) {
    case Kind::None:
      return "none";
    case Kind::Eager:
      return "eager";
    case Kind::LatestLegal:
      return "latest";
    case Kind::Random: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "random:%g", p);
      return buf;
    }
  }
  return "none";
}

CrashPolicy CrashPolicy::parse(const std::string& s) {
  if (s == "none") return none();
  if (s == "eager") return eager();
  if (s == "latest") return latest_legal();
  if (s.rfind("random:", 0) == 0) {
    try {
      std::size_t used = 0;
      double p = std::stod(s.substr(7), &used);
      if (used != s.size() - 7 || p < 0.0 || p > 1.0)
        throw ConfigError("crash_policy", "crash probability must be in [0,1]");
      return random(p);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError("crash_policy", "bad crash probability in '" + s + "'");
    }
  }
  throw ConfigError("crash_policy",
                    "unknown crash policy '" + s +
                        "' (expected none|eager|random:<p>|latest)");
}

int lambda_of(int n, int k) {
  if (n < 1) throw ConfigError("n", "process count must be at least 1");
  if (k < 0 || k > n) throw ConfigError("k", "failure bound must satisfy 0 <= k <= n");
  return n - k;
}

void validate_config(const Config& cfg) {
  lambda_of(cfg.n, cfg.k);
  if (cfg.n > 32) throw ConfigError("n", "at most 32 processes supported");
  if (cfg.f < 0 || cfg.f > cfg.n)
    throw ConfigError("f", "crash budget must satisfy 0 <= f <= n");
  if (static_cast<int>(cfg.inputs.size()) != cfg.n)
    throw ConfigError("inputs", "expected exactly n = " + std::to_string(cfg.n) +
                                    " input values, got " +
                                    std::to_string(cfg.inputs.size()));
  for (int v : cfg.inputs) {
    if (v < 0) throw ConfigError("inputs", "proposals must be nonnegative integers");
  }
  if (cfg.max_steps == 0) throw ConfigError("max_steps", "must be positive");
  if (cfg.crash_policy.kind == CrashPolicy::Kind::Random &&
      (cfg.crash_policy.p < 0.0 || cfg.crash_policy.p > 1.0))
    throw ConfigError("crash_policy", "crash probability must be in [0,1]");
}

int SystemState::participation_count() const {
  return std::popcount(participated_mask);
}

bool SystemState::all_correct_decided() const {
  for (const ProcState& p : procs) {
    if (!crashed(p.pid) && !p.decided()) return false;
  }
  return true;
}

std::map<int, int> SystemState::decisions() const {
  std::map<int, int> out;
  for (const ProcState& p : procs) {
    if (p.decided()) out[p.pid] = p.decided_value.as_int();
  }
  return out;
}

SystemState init_system(const Config& cfg) {
  validate_config(cfg);
  SystemState s;
  s.file = new_register_file(cfg.n, cfg.k);
  s.procs.reserve(static_cast<std::size_t>(cfg.n));
  for (int pid = 1; pid <= cfg.n; ++pid) {
    s.procs.push_back(proc_init(pid, Value::integer(cfg.inputs[static_cast<std::size_t>(pid - 1)]),
                                cfg.n, cfg.k));
  }
  return s;
}

namespace {

bool crash_allowed(const SystemState& s, const Config& cfg, int pid) {
  return !s.crashed(pid) && !s.procs[static_cast<std::size_t>(pid - 1)].decided() &&
         s.crash_count < cfg.f && s.participation_count() <= cfg.lambda();
}

}  // namespace

std::vector<ScheduledAction> enabled_actions(const SystemState& s, const Config& cfg) {
  std::vector<ScheduledAction> out;
  for (const ProcState& p : s.procs) {
    if (s.crashed(p.pid)) continue;
    EnabledThreads e = enabled_threads(p);
    if (e.main) out.push_back(ScheduledAction::step(p.pid, ThreadId::Main));
    if (e.t) out.push_back(ScheduledAction::step(p.pid, ThreadId::T));
  }
  for (const ProcState& p : s.procs) {
    if (crash_allowed(s, cfg, p.pid)) out.push_back(ScheduledAction::crash(p.pid));
  }
  return out;
}

void apply_action(SystemState& s, const ScheduledAction& a, const Config& cfg,
                  AppliedEvent* ev) {
  if (a.pid < 1 || a.pid > cfg.n)
    throw ScheduleError(0, "pid-range", "action names pid outside 1..n");
  if (a.kind == ScheduledAction::Kind::Crash) {
    if (s.crashed(a.pid))
      throw ScheduleError(0, "crash-absorbing", "p" + std::to_string(a.pid) +
                                                    " is already crashed");
    if (s.procs[static_cast<std::size_t>(a.pid - 1)].decided())
      throw ScheduleError(0, "crash-decided",
                          "p" + std::to_string(a.pid) + " has already decided");
    if (s.crash_count >= cfg.f)
      throw ScheduleError(0, "crash-budget",
                          "crash budget f = " + std::to_string(cfg.f) + " exhausted");
    if (s.participation_count() > cfg.lambda())
      throw ScheduleError(
          0, "lambda-threshold",
          "crash with " + std::to_string(s.participation_count()) +
              " participants bypasses lambda = " + std::to_string(cfg.lambda()));
    s.crashed_mask |= 1u << (a.pid - 1);
    ++s.crash_count;
    if (ev) {
      ev->pid = a.pid;
      ev->access = Access::local();
      ev->decided.reset();
    }
    return;
  }

  ProcState& p = s.procs[static_cast<std::size_t>(a.pid - 1)];
  if (s.crashed(a.pid))
    throw ScheduleError(0, "crash-absorbing",
                        "p" + std::to_string(a.pid) + " is crashed and cannot step");
  if (!enabled_threads(p).has(a.thread))
    throw ScheduleError(0, "thread-enabled",
                        "thread not enabled for p" + std::to_string(a.pid));
  ProcStepResult r = proc_step(p, a.thread, s.file);
  if (r.access.is_shared()) s.participated_mask |= 1u << (a.pid - 1);
  if (ev) {
    ev->pid = a.pid;
    ev->thread = a.thread;
    ev->access = r.access;
    ev->decided = r.decided;
  }
}

namespace {

// Deterministic bounded sampling; std::uniform_int_distribution is
// implementation-defined, so roll our own on top of mt19937_64.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t m) {
  std::uint64_t threshold = (0 - m) % m;
  for (;;) {
    std::uint64_t r = rng();
    if (r >= threshold) return r % m;
  }
}

double next_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

class TraceBuilder {
 public:
  explicit TraceBuilder(const Config& cfg) { trace_.cfg = cfg; }

  void record(const SystemState& s, const ScheduledAction& a, const AppliedEvent& ev) {
    trace_.actions.push_back(a);
    TraceEvent e;
    e.index = next_index_++;
    e.pid = ev.pid;
    e.parts = s.participation_count();
    e.crashes = s.crash_count;
    if (a.kind == ScheduledAction::Kind::Crash) {
      e.kind = TraceEvent::Kind::Crash;
      trace_.events.push_back(e);
      return;
    }
    e.kind = TraceEvent::Kind::Access;
    e.thread = ev.thread;
    e.op = ev.access.kind;
    if (ev.access.is_shared()) {
      e.reg = ev.access.reg;
      e.value = ev.access.value;
    }
    trace_.events.push_back(e);
    if (ev.decided) {
      TraceEvent d;
      d.index = next_index_++;
      d.kind = TraceEvent::Kind::Decide;
      d.pid = ev.pid;
      d.thread = ev.thread;
      d.value = *ev.decided;
      d.parts = e.parts;
      d.crashes = e.crashes;
      trace_.events.push_back(d);
      trace_.decisions.push_back(
          DecisionRecord{ev.pid, ev.decided->as_int(), d.index});
    }
  }

  Trace finish(const SystemState& s) {
    trace_.complete = s.all_correct_decided();
    return std::move(trace_);
  }

 private:
  Trace trace_;
  std::uint64_t next_index_ = 0;
};

}  // namespace

Trace run_random(const Config& cfg) {
  validate_config(cfg);
  SystemState s = init_system(cfg);
  TraceBuilder builder(cfg);
  std::mt19937_64 rng(cfg.seed);

  std::vector<ScheduledAction> steps, crashes;
  for (std::uint64_t tick = 0; tick < cfg.max_steps; ++tick) {
    if (s.all_correct_decided()) break;
    steps.clear();
    crashes.clear();
    for (const ScheduledAction& a : enabled_actions(s, cfg)) {
      (a.kind == ScheduledAction::Kind::Step ? steps : crashes).push_back(a);
    }

    std::optional<ScheduledAction> chosen;
    if (!crashes.empty()) {
      switch (cfg.crash_policy.kind) {
        case CrashPolicy::Kind::None:
          break;
        case CrashPolicy::Kind::Eager:
          chosen = crashes[bounded(rng, crashes.size())];
          break;
        case CrashPolicy::Kind::Random:
          if (next_unit(rng) < cfg.crash_policy.p)
            chosen = crashes[bounded(rng, crashes.size())];
          break;
        case CrashPolicy::Kind::LatestLegal:
          // Last tick at which crashing is still legal: one more first
          // access would push the participation count past lambda.
          if (s.participation_count() == cfg.lambda())
            chosen = crashes[bounded(rng, crashes.size())];
          break;
      }
    }
    if (!chosen) chosen = steps[bounded(rng, steps.size())];

    AppliedEvent ev;
    apply_action(s, *chosen, cfg, &ev);
    builder.record(s, *chosen, ev);
  }
  return builder.finish(s);
}

Trace run_schedule(const Config& cfg, const std::vector<ScheduledAction>& schedule) {
  validate_config(cfg);
  SystemState s = init_system(cfg);
  TraceBuilder builder(cfg);
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    AppliedEvent ev;
    try {
      apply_action(s, schedule[i], cfg, &ev);
    } catch (const ScheduleError& e) {
      throw ScheduleError(i, e.rule(),
                          "illegal action at position " + std::to_string(i) + ": " +
                              e.what() + " [rule: " + e.rule() + "]");
    }
    builder.record(s, schedule[i], ev);
  }
  return builder.finish(s);
}

}  // namespace lcsim
