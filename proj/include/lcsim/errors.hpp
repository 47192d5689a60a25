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

#ifndef LCSIM_ERRORS_HPP
#define LCSIM_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lcsim {

/// Invalid user-supplied configuration (bad n/k/f, missing fields, ...).
/// Maps to exit code 2 in the CLI.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// An action in an explicit schedule violated a legality rule (crash budget,
/// participation threshold, disabled thread). Distinct from a property
/// violation: the schedule itself is inadmissible.
class ScheduleError : public std::runtime_error {
 public:
  ScheduleError(std::size_t position, std::string rule, const std::string& what)
      : std::runtime_error(what), position_(position), rule_(std::move(rule)) {}

  std::size_t position() const noexcept { return position_; }
  const std::string& rule() const noexcept { return rule_; }

 private:
  std::size_t position_;
  std::string rule_;
};

/// Programming error inside the simulator (SWMR violation, stepping a
/// finished cursor, unknown register). Never a legitimate run outcome.
class InternalFault : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Malformed trace / schedule / config file.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lcsim

#endif  // LCSIM_ERRORS_HPP
