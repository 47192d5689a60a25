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

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lcsim/errors.hpp"
#include "lcsim/explorer.hpp"
#include "lcsim/runtime.hpp"
#include "lcsim/trace_io.hpp"
#include "lcsim/verdict.hpp"

namespace {

using namespace lcsim;

// Exit codes: 0 all properties pass, 1 property violation, 2 configuration
// or usage error, 3 inconclusive (incomplete runs / truncated exploration).
constexpr int kExitPass = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInconclusive = 3;

struct Opts {
  int n = -1;
  int k = -1;
  int f = -1;
  std::string inputs;
  std::uint64_t seed = 0;
  std::uint64_t max_steps = 100000;
  std::string crash_policy;
  std::uint64_t state_cap = kDefaultStateCap;
  std::uint64_t runs = 1;
  std::string config_path;
  std::string trace_out;
  std::string schedule_in;
  std::string format = "summary";
};

void add_common(CLI::App* cmd, Opts& o) {
  cmd->add_option("--n", o.n, "process count");
  cmd->add_option("--k", o.k, "constrained-failure bound (0 <= k <= n)");
  cmd->add_option("--f", o.f, "crash budget (0 <= f <= n)");
  cmd->add_option("--inputs", o.inputs, "comma-separated proposals, one per process");
  cmd->add_option("--seed", o.seed, "base RNG seed");
  cmd->add_option("--max-steps", o.max_steps, "scheduler tick budget per run");
  cmd->add_option("--crash-policy", o.crash_policy,
                  "none | eager | random:<p> | latest");
  cmd->add_option("--config", o.config_path, "JSON config file; flags override it");
  cmd->add_option("--trace-out", o.trace_out, "write the trace/schedule artifact here");
  cmd->add_option("--format", o.format, "summary | jsonl")
      ->check(CLI::IsMember({"summary", "jsonl"}));
}

std::vector<int> parse_inputs(const std::string& s) {
  std::vector<int> out;
  std::size_t at = 0;
  while (at <= s.size()) {
    std::size_t comma = s.find(',', at);
    std::string tok = s.substr(at, comma == std::string::npos ? comma : comma - at);
    if (tok.empty()) throw ConfigError("inputs", "empty entry in --inputs");
    try {
      std::size_t used = 0;
      int v = std::stoi(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError("inputs", "bad integer '" + tok + "' in --inputs");
    }
    if (comma == std::string::npos) break;
    at = comma + 1;
  }
  return out;
}

Config build_config(const CLI::App* cmd, const Opts& o) {
  Config cfg;
  bool from_file = cmd->count("--config") > 0;
  if (from_file) cfg = load_config_file(o.config_path);
  if (cmd->count("--n")) cfg.n = o.n;
  if (cmd->count("--k")) cfg.k = o.k;
  if (cmd->count("--f")) cfg.f = o.f;
  if (cmd->count("--inputs")) cfg.inputs = parse_inputs(o.inputs);
  if (cmd->count("--seed") || !from_file) cfg.seed = o.seed;
  if (cmd->count("--max-steps") || !from_file) cfg.max_steps = o.max_steps;
  if (cmd->count("--crash-policy"))
    cfg.crash_policy = CrashPolicy::parse(o.crash_policy);
  if (!from_file) {
    if (!cmd->count("--n")) throw ConfigError("n", "missing --n (or --config)");
    if (!cmd->count("--k")) throw ConfigError("k", "missing --k (or --config)");
    if (!cmd->count("--f")) throw ConfigError("f", "missing --f (or --config)");
    if (!cmd->count("--inputs"))
      throw ConfigError("inputs", "missing --inputs (or --config)");
  }
  validate_config(cfg);
  return cfg;
}

void emit(const ojson& o) { std::cout << o.dump() << "\n"; }

int finish_single_run(const Config& cfg, const Trace& trace, const std::string& format,
                      const std::string& trace_out) {
  Verdict v = check_trace(trace, cfg);
  if (!trace_out.empty()) write_text_file(trace_out, trace_to_jsonl(trace));
  if (format == "jsonl") {
    std::cout << trace_to_jsonl(trace);
    ojson tail;
    tail["verdict"] = verdict_to_json(v);
    emit(tail);
  } else {
    ojson o;
    o["cfg"] = config_to_json(cfg);
    o["complete"] = trace.complete;
    ojson decisions = ojson::object();
    for (auto [pid, val] : [&] {
           std::map<int, int> m;
           for (const DecisionRecord& d : trace.decisions) m[d.pid] = d.value;
           return m;
         }())
      decisions[std::to_string(pid)] = val;
    o["decisions"] = decisions;
    o["verdict"] = verdict_to_json(v);
    emit(o);
  }
  if (!v.no_violation()) return kExitViolation;
  if (!v.all_pass()) return kExitInconclusive;
  return kExitPass;
}

int cmd_run(const CLI::App* cmd, const Opts& o) {
  Config cfg = build_config(cmd, o);
  return finish_single_run(cfg, run_random(cfg), o.format, o.trace_out);
}

int cmd_replay(const CLI::App* cmd, const Opts& o) {
  Config cfg = build_config(cmd, o);
  if (o.schedule_in.empty())
    throw ConfigError("schedule_in", "replay requires --schedule-in");
  std::vector<ScheduledAction> schedule = load_schedule_file(o.schedule_in);
  return finish_single_run(cfg, run_schedule(cfg, schedule), o.format, o.trace_out);
}

int cmd_stress(const CLI::App* cmd, const Opts& o) {
  Config base = build_config(cmd, o);
  std::uint64_t complete = 0, violations = 0;
  std::vector<std::uint64_t> incomplete_seeds;
  std::string first_bad_trace;
  for (std::uint64_t i = 0; i < o.runs; ++i) {
    Config cfg = base;
    cfg.seed = base.seed + i;  // deterministic per-run seeds
    Trace t = run_random(cfg);
    Verdict v = check_trace(t, cfg);
    if (!v.no_violation()) {
      ++violations;
      if (first_bad_trace.empty()) first_bad_trace = trace_to_jsonl(t);
    } else if (t.complete) {
      ++complete;
    } else {
      incomplete_seeds.push_back(cfg.seed);
    }
    if (o.format == "jsonl") {
      ojson line;
      line["run"] = i;
      line["seed"] = cfg.seed;
      line["complete"] = t.complete;
      line["all_pass"] = v.all_pass();
      emit(line);
    }
  }
  if (!o.trace_out.empty() && !first_bad_trace.empty())
    write_text_file(o.trace_out, first_bad_trace);
  ojson o_sum;
  o_sum["cfg"] = config_to_json(base);
  o_sum["runs"] = o.runs;
  o_sum["complete"] = complete;
  o_sum["incomplete"] = incomplete_seeds.size();
  o_sum["violations"] = violations;
  o_sum["incomplete_seeds"] = incomplete_seeds;
  emit(o_sum);
  if (violations > 0) return kExitViolation;
  if (!incomplete_seeds.empty()) return kExitInconclusive;
  return kExitPass;
}

int cmd_explore(const CLI::App* cmd, const Opts& o) {
  Config cfg = build_config(cmd, o);
  ExplorationReport report = explore(cfg, o.state_cap);
  ojson out;
  out["cfg"] = config_to_json(cfg);
  out["report"] = report_to_json(report);
  emit(out);
  bool violated = !report.safety_violations.empty() ||
                  (!report.truncated && !report.liveness_pass);
  if (violated) {
    if (!o.trace_out.empty()) {
      const std::vector<ScheduledAction>& prefix =
          !report.safety_violations.empty() ? report.safety_violations.front().prefix
                                            : report.bad_sccs.front().prefix;
      write_text_file(o.trace_out, schedule_to_json(prefix).dump() + "\n");
    }
    return kExitViolation;
  }
  if (report.truncated) return kExitInconclusive;
  return kExitPass;
}

int cmd_witness(const CLI::App* cmd, const Opts& o) {
  Config cfg = build_config(cmd, o);
  TightnessWitness w = find_tightness_witness(cfg, o.state_cap);
  emit(witness_to_json(w));
  switch (w.status) {
    case TightnessWitness::Status::Found:
      if (!o.trace_out.empty())
        write_text_file(o.trace_out, schedule_to_json(w.schedule).dump() + "\n");
      return kExitPass;
    case TightnessWitness::Status::None:
      std::cerr << "witness: exploration PASSED at f = k + 1 = " << cfg.f
                << " (n = " << cfg.n << ", k = " << cfg.k
                << "): no bad bottom SCC exists, so this configuration "
                   "tolerates the extra crash\n";
      return kExitViolation;
    case TightnessWitness::Status::Inconclusive:
      return kExitInconclusive;
  }
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simulator, property checker and explicit-state model checker "
               "for shared-memory consensus under participation-constrained "
               "crash failures"};
  app.require_subcommand(1);

  Opts o;
  CLI::App* run = app.add_subcommand("run", "one seeded random run + verdict");
  add_common(run, o);
  CLI::App* stress = app.add_subcommand("stress", "many seeded runs, aggregated");
  add_common(stress, o);
  stress->add_option("--runs", o.runs, "number of runs (seeds seed..seed+runs-1)");
  CLI::App* explore_cmd =
      app.add_subcommand("explore", "exhaustive bounded state-space exploration");
  add_common(explore_cmd, o);
  explore_cmd->add_option("--state-cap", o.state_cap, "maximum states to explore");
  CLI::App* replay = app.add_subcommand("replay", "replay an explicit schedule");
  add_common(replay, o);
  replay->add_option("--schedule-in", o.schedule_in, "JSON schedule file");
  CLI::App* witness =
      app.add_subcommand("witness", "search a termination refutation at f = k+1");
  add_common(witness, o);
  witness->add_option("--state-cap", o.state_cap, "maximum states to explore");

  try {
    app.parse(argc, argv);
    if (run->parsed()) return cmd_run(run, o);
    if (stress->parsed()) return cmd_stress(stress, o);
    if (explore_cmd->parsed()) return cmd_explore(explore_cmd, o);
    if (replay->parsed()) return cmd_replay(replay, o);
    if (witness->parsed()) return cmd_witness(witness, o);
    return kExitUsage;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "config error [" << e.field() << "]: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ScheduleError& e) {
    std::cerr << "schedule error at position " << e.position() << ": " << e.what()
              << "\n";
    return kExitUsage;
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InternalFault& e) {
    std::cerr << "internal fault: " << e.what() << "\n";
    return kExitUsage;
  }
}
