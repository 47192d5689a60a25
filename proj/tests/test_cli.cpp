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

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <string>

#include <nlohmann/json.hpp>

#include "lcsim/runtime.hpp"
#include "lcsim/trace_io.hpp"
#include "lcsim/verdict.hpp"

using namespace lcsim;

namespace {

struct CmdResult {
  int exit_code = -1;
  std::string out;
};

CmdResult run_cli(const std::string& args) {
  std::string cmd = std::string(LCSIM_BIN) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CmdResult r;
  char buf[4096];
  while (std::size_t got = fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, got);
  int status = pclose(pipe);
  r.exit_code = WEXITSTATUS(status);
  return r;
}

std::string tmp_path(const char* name) {
  return std::string("/tmp/lcsim_test_") + name;
}

}  // namespace

TEST_CASE("run: passing configuration exits 0 with a verdict") {
  CmdResult r = run_cli("run --n 3 --k 1 --f 1 --inputs 0,1,1 --seed 7");
  CHECK(r.exit_code == 0);
  nlohmann::json o = nlohmann::json::parse(r.out);
  CHECK(o["verdict"]["all_pass"] == true);
  CHECK(o["cfg"]["lambda"] == 2);
}

TEST_CASE("run: identical argv gives byte-identical output") {
  std::string args = "run --n 3 --k 1 --f 1 --inputs 0,1,1 --seed 9 "
                     "--crash-policy random:0.2 --format jsonl";
  CHECK(run_cli(args).out == run_cli(args).out);
}

TEST_CASE("run: incomplete run exits 3") {
  CmdResult r = run_cli("run --n 2 --k 0 --f 0 --inputs 0,1 --max-steps 3");
  CHECK(r.exit_code == 3);
}

TEST_CASE("usage and configuration errors exit 2") {
  CHECK(run_cli("run --n 3 --k 4 --f 0 --inputs 0,0,0").exit_code == 2);
  CHECK(run_cli("run --k 1 --f 0 --inputs 0,1").exit_code == 2);
  CHECK(run_cli("run --n 2 --k 1 --f 0 --inputs 0,1 --crash-policy hourly").exit_code ==
        2);
  CHECK(run_cli("replay --n 2 --k 1 --f 0 --inputs 0,1").exit_code == 2);
  CHECK(run_cli("frobnicate").exit_code == 2);
}

TEST_CASE("config file: flags override, missing fields are named") {
  std::string cfg_path = tmp_path("cfg.json");
  write_text_file(cfg_path,
                  R"({"n":9,"k":3,"f":3,"inputs":[0,1,0,1,0,1,0,1,0]})");
  CmdResult r = run_cli("run --config " + cfg_path + " --seed 3");
  CHECK(r.exit_code == 0);
  nlohmann::json o = nlohmann::json::parse(r.out);
  CHECK(o["cfg"]["n"] == 9);
  CHECK(o["cfg"]["lambda"] == 6);

  std::string bad_path = tmp_path("cfg_bad.json");
  write_text_file(bad_path, R"({"n":3,"k":1,"f":1})");
  CHECK(run_cli("run --config " + bad_path).exit_code == 2);
}

TEST_CASE("explore: lambda = 0 regime exits 0 with initial crashes only") {
  CmdResult r = run_cli("explore --n 2 --k 2 --f 2 --inputs 0,1");
  CHECK(r.exit_code == 0);
  nlohmann::json o = nlohmann::json::parse(r.out);
  CHECK(o["report"]["pass"] == true);
  CHECK(o["report"]["crash_edges"]["max_parts"] == 0);
}

TEST_CASE("witness: found schedule is written and replays to the stuck state") {
  std::string sched_path = tmp_path("witness.json");
  CmdResult r =
      run_cli("witness --n 2 --k 0 --f 1 --inputs 0,1 --trace-out " + sched_path);
  CHECK(r.exit_code == 0);
  nlohmann::json o = nlohmann::json::parse(r.out);
  REQUIRE(o["status"] == "found");
  int pid = o["undecided_pid"].get<int>();

  Config cfg;
  cfg.n = 2;
  cfg.k = 0;
  cfg.f = 1;
  cfg.inputs = {0, 1};
  Trace t = run_schedule(cfg, load_schedule_file(sched_path));
  CHECK_FALSE(t.complete);
  for (const DecisionRecord& d : t.decisions) CHECK(d.pid != pid);
}

TEST_CASE("witness: the boundary case n = k+1 reports none and exits 1") {
  CmdResult r = run_cli("witness --n 2 --k 1 --f 2 --inputs 0,1");
  CHECK(r.exit_code == 1);
  nlohmann::json o = nlohmann::json::parse(r.out);
  CHECK(o["status"] == "none");
  CHECK(o["report"]["pass"] == true);
}

TEST_CASE("replay: legal schedule round-trips through trace-out") {
  std::string sched_path = tmp_path("sched.json");
  write_text_file(sched_path, schedule_to_json({
                                  ScheduledAction::crash(2),
                              }).dump());
  std::string trace_path = tmp_path("replay_trace.jsonl");
  CmdResult r = run_cli("replay --n 2 --k 1 --f 1 --inputs 3,9 --schedule-in " +
                        sched_path + " --trace-out " + trace_path);
  CHECK(r.exit_code == 3);  // survivor not yet decided: inconclusive
  Trace t = trace_from_jsonl(read_text_file(trace_path));
  CHECK(t.actions.size() == 1);

  // An illegal schedule is a usage error, not a property violation.
  write_text_file(sched_path,
                  schedule_to_json({ScheduledAction::crash(1), ScheduledAction::crash(2)})
                      .dump());
  CmdResult bad = run_cli("replay --n 2 --k 1 --f 1 --inputs 3,9 --schedule-in " +
                          sched_path);
  CHECK(bad.exit_code == 2);
}

TEST_CASE("stress: small campaign aggregates and exits 0") {
  CmdResult r = run_cli(
      "stress --n 3 --k 1 --f 1 --inputs 0,1,1 --runs 25 --seed 100 "
      "--crash-policy random:0.05");
  CHECK(r.exit_code == 0);
  nlohmann::json o = nlohmann::json::parse(r.out);
  CHECK(o["runs"] == 25);
  CHECK(o["violations"] == 0);
  CHECK(o["complete"].get<int>() + o["incomplete"].get<int>() == 25);
}
