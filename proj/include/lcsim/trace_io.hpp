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

#ifndef LCSIM_TRACE_IO_HPP
#define LCSIM_TRACE_IO_HPP

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lcsim/explorer.hpp"
#include "lcsim/runtime.hpp"
#include "lcsim/verdict.hpp"

namespace lcsim {

using ojson = nlohmann::ordered_json;

// Register cell values render as "bot", a plain integer, or
// {"m":"single"|"multi","v":<int>} for adopt-commit phase-B records.
ojson value_to_json(const Value& v);
Value value_from_json(const nlohmann::json& j);  // throws FormatError

ojson config_to_json(const Config& cfg);

/// Strict parse: unknown or ill-typed fields throw ConfigError naming the
/// field. "lambda", if present, must equal n - k.
Config config_from_json(const nlohmann::json& j);
Config load_config_file(const std::string& path);

/// JSON Lines: a header record {"cfg":{...}}, one record per event, and a
/// footer {"complete":...,"decisions":{...}}. Serialization is canonical:
/// equal traces produce identical bytes.
std::string trace_to_jsonl(const Trace& t);
Trace trace_from_jsonl(const std::string& text);  // throws FormatError

ojson schedule_to_json(const std::vector<ScheduledAction>& schedule);
std::vector<ScheduledAction> schedule_from_json(const nlohmann::json& j);
std::vector<ScheduledAction> load_schedule_file(const std::string& path);

ojson verdict_to_json(const Verdict& v);
ojson report_to_json(const ExplorationReport& r);
ojson witness_to_json(const TightnessWitness& w);

void write_text_file(const std::string& path, const std::string& contents);
std::string read_text_file(const std::string& path);

}  // namespace lcsim

#endif  // LCSIM_TRACE_IO_HPP
