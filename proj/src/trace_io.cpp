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

#include "lcsim/trace_io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "lcsim/errors.hpp"

namespace lcsim {

namespace {

using nlohmann::json;

std::string hex_digest(std::uint64_t d) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(d));
  return buf;
}

const char* thread_name(ThreadId t) { return t == ThreadId::Main ? "main" : "T"; }

ThreadId thread_from_name(const std::string& s) {
  if (s == "main") return ThreadId::Main;
  if (s == "T") return ThreadId::T;
  throw FormatError("unknown thread name '" + s + "'");
}

const char* op_name(AccessKind k) {
  switch (k) {
    case AccessKind::Read:
      return "read";
    case AccessKind::Write:
      return "write";
    case AccessKind::Local:
      return "local";
  }
  return "?";
}

std::int64_t require_int(const json& j, const std::string& field) {
  if (!j.is_number_integer()) throw ConfigError(field, "expected an integer");
  return j.get<std::int64_t>();
}

}  // namespace

ojson value_to_json(const Value& v) {
  if (v.is_bot()) return "bot";
  if (v.is_marked()) {
    ojson o;
    o["m"] = v.marker() == Marker::Single ? "single" : "multi";
    o["v"] = v.as_int();
    return o;
  }
  return v.as_int();
}

Value value_from_json(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "bot") return Value::bot();
    throw FormatError("bad value string '" + j.get<std::string>() + "'");
  }
  if (j.is_number_integer()) return Value::integer(j.get<std::int32_t>());
  if (j.is_object() && j.contains("m") && j.contains("v")) {
    std::string m = j.at("m").get<std::string>();
    if (m != "single" && m != "multi") throw FormatError("bad marker '" + m + "'");
    return Value::marked(m == "single" ? Marker::Single : Marker::Multi,
                         j.at("v").get<std::int32_t>());
  }
  throw FormatError("unrecognized value encoding: " + j.dump());
}

ojson config_to_json(const Config& cfg) {
  ojson o;
  o["n"] = cfg.n;
  o["k"] = cfg.k;
  o["f"] = cfg.f;
  o["lambda"] = cfg.lambda();
  o["inputs"] = cfg.inputs;
  o["seed"] = cfg.seed;
  o["max_steps"] = cfg.max_steps;
  o["crash_policy"] = cfg.crash_policy.to_string();
  return o;
}

Config config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config", "expected a JSON object");
  static const std::set<std::string> known = {"n",    "k",         "f",
                                              "inputs", "lambda",  "seed",
                                              "max_steps", "crash_policy"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!known.count(it.key())) throw ConfigError(it.key(), "unknown config field");
  }
  for (const char* field : {"n", "k", "f", "inputs"}) {
    if (!j.contains(field))
      throw ConfigError(field, std::string("missing required field '") + field + "'");
  }
  Config cfg;
  cfg.n = static_cast<int>(require_int(j.at("n"), "n"));
  cfg.k = static_cast<int>(require_int(j.at("k"), "k"));
  cfg.f = static_cast<int>(require_int(j.at("f"), "f"));
  if (!j.at("inputs").is_array()) throw ConfigError("inputs", "expected an array");
  for (const json& e : j.at("inputs")) {
    cfg.inputs.push_back(static_cast<int>(require_int(e, "inputs")));
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned() && !j.at("seed").is_number_integer())
      throw ConfigError("seed", "expected an integer");
    cfg.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("max_steps")) {
    std::int64_t ms = require_int(j.at("max_steps"), "max_steps");
    if (ms <= 0) throw ConfigError("max_steps", "must be positive");
    cfg.max_steps = static_cast<std::uint64_t>(ms);
  }
  if (j.contains("crash_policy"))
    cfg.crash_policy = CrashPolicy::parse(j.at("crash_policy").get<std::string>());
  validate_config(cfg);
  if (j.contains("lambda") &&
      require_int(j.at("lambda"), "lambda") != cfg.lambda())
    throw ConfigError("lambda", "lambda must equal n - k = " +
                                    std::to_string(cfg.lambda()));
  return cfg;
}

Config load_config_file(const std::string& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("cannot parse ") + path + ": " + e.what());
  }
  return config_from_json(j);
}

namespace {

ojson event_to_json(const TraceEvent& e) {
  ojson o;
  o["i"] = e.index;
  o["act"] = e.kind == TraceEvent::Kind::Crash ? "crash" : "step";
  o["pid"] = e.pid;
  if (e.kind != TraceEvent::Kind::Crash) {
    o["thr"] = thread_name(e.thread);
    o["op"] = e.kind == TraceEvent::Kind::Decide ? "decide" : op_name(e.op);
    if (e.reg) o["reg"] = e.reg->to_string();
    if (e.value) o["val"] = value_to_json(*e.value);
  }
  o["parts"] = e.parts;
  o["crashes"] = e.crashes;
  return o;
}

RegisterId register_from_name(const std::string& s) {
  auto nums = [&](std::size_t from) {
    std::vector<int> out;
    int cur = -1;
    for (std::size_t i = from; i < s.size(); ++i) {
      char c = s[i];
      if (c == '[') {
        cur = 0;
      } else if (c == ']') {
        if (cur < 0) throw FormatError("bad register name '" + s + "'");
        out.push_back(cur);
        cur = -1;
      } else if (cur >= 0 && c >= '0' && c <= '9') {
        cur = cur * 10 + (c - '0');
      } else {
        throw FormatError("bad register name '" + s + "'");
      }
    }
    return out;
  };
  if (s == "DEC") return RegisterId::dec();
  if (s.rfind("INPUT[", 0) == 0) return RegisterId::input(nums(5).at(0));
  if (s.rfind("AC.A[", 0) == 0) return RegisterId::ac_a(nums(4).at(0));
  if (s.rfind("AC.B[", 0) == 0) return RegisterId::ac_b(nums(4).at(0));
  if (s.rfind("ARM[", 0) == 0) {
    std::vector<int> v = nums(3);
    if (v.size() != 3) throw FormatError("bad register name '" + s + "'");
    return RegisterId::arm(v[0], v[1], v[2]);
  }
  throw FormatError("unknown register '" + s + "'");
}

TraceEvent event_from_json(const json& j) {
  TraceEvent e;
  e.index = j.at("i").get<std::uint64_t>();
  e.pid = j.at("pid").get<int>();
  e.parts = j.at("parts").get<int>();
  e.crashes = j.at("crashes").get<int>();
  std::string act = j.at("act").get<std::string>();
  if (act == "crash") {
    e.kind = TraceEvent::Kind::Crash;
    return e;
  }
  if (act != "step") throw FormatError("unknown act '" + act + "'");
  e.thread = thread_from_name(j.at("thr").get<std::string>());
  std::string op = j.at("op").get<std::string>();
  if (op == "decide") {
    e.kind = TraceEvent::Kind::Decide;
    e.value = value_from_json(j.at("val"));
    return e;
  }
  e.kind = TraceEvent::Kind::Access;
  if (op == "read") {
    e.op = AccessKind::Read;
  } else if (op == "write") {
    e.op = AccessKind::Write;
  } else if (op == "local") {
    e.op = AccessKind::Local;
  } else {
    throw FormatError("unknown op '" + op + "'");
  }
  if (e.op != AccessKind::Local) {
    e.reg = register_from_name(j.at("reg").get<std::string>());
    e.value = value_from_json(j.at("val"));
  }
  return e;
}

}  // namespace

std::string trace_to_jsonl(const Trace& t) {
  std::string out;
  ojson header;
  header["cfg"] = config_to_json(t.cfg);
  out += header.dump();
  out += '\n';
  for (const TraceEvent& e : t.events) {
    out += event_to_json(e).dump();
    out += '\n';
  }
  ojson footer;
  footer["complete"] = t.complete;
  std::map<int, int> byPid;
  for (const DecisionRecord& d : t.decisions) byPid[d.pid] = d.value;
  ojson decisions = ojson::object();
  for (auto [pid, val] : byPid) decisions[std::to_string(pid)] = val;
  footer["decisions"] = decisions;
  out += footer.dump();
  out += '\n';
  return out;
}

Trace trace_from_jsonl(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<json> lines;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      lines.push_back(json::parse(line));
    } catch (const json::parse_error& e) {
      throw FormatError(std::string("bad trace line: ") + e.what());
    }
  }
  if (lines.size() < 2) throw FormatError("trace needs a header and a footer");
  if (!lines.front().contains("cfg")) throw FormatError("missing trace header");
  if (!lines.back().contains("complete")) throw FormatError("missing trace footer");

  Trace t;
  t.cfg = config_from_json(lines.front().at("cfg"));
  for (std::size_t i = 1; i + 1 < lines.size(); ++i) {
    t.events.push_back(event_from_json(lines[i]));
    const TraceEvent& e = t.events.back();
    if (e.kind == TraceEvent::Kind::Crash) {
      t.actions.push_back(ScheduledAction::crash(e.pid));
    } else if (e.kind == TraceEvent::Kind::Access) {
      t.actions.push_back(ScheduledAction::step(e.pid, e.thread));
    } else {
      t.decisions.push_back(DecisionRecord{e.pid, e.value->as_int(), e.index});
    }
  }
  t.complete = lines.back().at("complete").get<bool>();
  return t;
}

ojson schedule_to_json(const std::vector<ScheduledAction>& schedule) {
  ojson arr = ojson::array();
  for (const ScheduledAction& a : schedule) {
    ojson o;
    if (a.kind == ScheduledAction::Kind::Crash) {
      o["act"] = "crash";
      o["pid"] = a.pid;
    } else {
      o["act"] = "step";
      o["pid"] = a.pid;
      o["thr"] = thread_name(a.thread);
    }
    arr.push_back(std::move(o));
  }
  return arr;
}

std::vector<ScheduledAction> schedule_from_json(const json& j) {
  if (!j.is_array()) throw FormatError("schedule must be a JSON array");
  std::vector<ScheduledAction> out;
  for (const json& o : j) {
    std::string act = o.at("act").get<std::string>();
    int pid = o.at("pid").get<int>();
    if (act == "crash") {
      out.push_back(ScheduledAction::crash(pid));
    } else if (act == "step") {
      out.push_back(
          ScheduledAction::step(pid, thread_from_name(o.at("thr").get<std::string>())));
    } else {
      throw FormatError("unknown schedule action '" + act + "'");
    }
  }
  return out;
}

std::vector<ScheduledAction> load_schedule_file(const std::string& path) {
  try {
    return schedule_from_json(json::parse(read_text_file(path)));
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("cannot parse ") + path + ": " + e.what());
  }
}

ojson verdict_to_json(const Verdict& v) {
  auto decision = [](const DecisionRecord& d) {
    ojson o;
    o["pid"] = d.pid;
    o["val"] = d.value;
    o["step"] = d.step_index;
    return o;
  };
  ojson o;
  o["validity"]["pass"] = v.validity_pass;
  if (v.validity_witness) o["validity"]["witness"] = decision(*v.validity_witness);
  o["agreement"]["pass"] = v.agreement_pass;
  if (v.agreement_witness) {
    o["agreement"]["witness"]["a"] = decision(v.agreement_witness->first);
    o["agreement"]["witness"]["b"] = decision(v.agreement_witness->second);
  }
  switch (v.termination) {
    case Verdict::Termination::Pass:
      o["termination"]["status"] = "pass";
      break;
    case Verdict::Termination::Inconclusive:
      o["termination"]["status"] = "inconclusive";
      break;
    case Verdict::Termination::Fail:
      o["termination"]["status"] = "fail";
      break;
  }
  if (!v.undecided.empty()) o["termination"]["undecided"] = v.undecided;
  o["legality"]["pass"] = v.legality_pass;
  if (!v.legality_pass) {
    if (v.legality_step) o["legality"]["step"] = *v.legality_step;
    o["legality"]["rule"] = v.legality_rule;
  }
  o["complete"] = v.complete;
  o["all_pass"] = v.all_pass();
  return o;
}

ojson report_to_json(const ExplorationReport& r) {
  ojson o;
  o["states"] = r.state_count;
  o["transitions"] = r.transition_count;
  o["truncated"] = r.truncated;
  ojson viols = ojson::array();
  for (const SafetyViolation& v : r.safety_violations) {
    ojson e;
    e["property"] = v.property;
    e["detail"] = v.detail;
    e["state"] = hex_digest(v.state_digest);
    e["prefix"] = schedule_to_json(v.prefix);
    viols.push_back(std::move(e));
  }
  o["safety_violations"] = viols;
  if (r.truncated) {
    o["liveness"]["pass"] = nullptr;  // unknown on a partial graph
  } else {
    o["liveness"]["pass"] = r.liveness_pass;
  }
  ojson bad = ojson::array();
  for (const BadScc& b : r.bad_sccs) {
    ojson e;
    e["undecided_pid"] = b.undecided_pid;
    e["scc_size"] = b.scc_size;
    e["state"] = hex_digest(b.state_digest);
    e["prefix"] = schedule_to_json(b.prefix);
    bad.push_back(std::move(e));
  }
  o["liveness"]["bad_sccs"] = bad;
  o["crash_edges"]["count"] = r.crash_edge_count;
  o["crash_edges"]["max_parts"] = r.max_parts_at_crash;
  o["pass"] = r.pass();
  return o;
}

ojson witness_to_json(const TightnessWitness& w) {
  ojson o;
  switch (w.status) {
    case TightnessWitness::Status::Found:
      o["status"] = "found";
      break;
    case TightnessWitness::Status::None:
      o["status"] = "none";
      break;
    case TightnessWitness::Status::Inconclusive:
      o["status"] = "inconclusive";
      break;
  }
  if (w.status == TightnessWitness::Status::Found) {
    o["undecided_pid"] = w.undecided_pid;
    o["schedule"] = schedule_to_json(w.schedule);
  }
  o["report"] = report_to_json(w.report);
  return o;
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open " + path + " for writing");
  out << contents;
  if (!out) throw FormatError("failed writing " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace lcsim
