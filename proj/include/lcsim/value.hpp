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

#ifndef LCSIM_VALUE_HPP
#define LCSIM_VALUE_HPP

#include <cstdint>
#include <span>
#include <string>

#include "lcsim/errors.hpp"

namespace lcsim {

/// Marker attached to second-phase adopt-commit records. Plain values carry
/// Marker::None.
enum class Marker : std::uint8_t { None = 0, Single = 1, Multi = 2 };

/// Contents of one atomic register cell: the default value bot, a
/// nonnegative integer, or a (marker, integer) record written by the
/// adopt-commit second phase. Bot is ordered greater than every integer, so
/// a minimum over a collect that saw at least one deposited value is always
/// an integer.
class Value {
 public:
  constexpr Value() noexcept = default;  // bot

  static constexpr Value bot() noexcept { return Value{}; }

  static Value integer(std::int32_t v) {
    if (v < 0) throw InternalFault("Value::integer: negative value");
    Value out;
    out.kind_ = Kind::Int;
    out.v_ = v;
    return out;
  }

  static Value marked(Marker m, std::int32_t v) {
    if (m == Marker::None) throw InternalFault("Value::marked: marker required");
    if (v < 0) throw InternalFault("Value::marked: negative value");
    Value out;
    out.kind_ = Kind::Int;
    out.marker_ = m;
    out.v_ = v;
    return out;
  }

  constexpr bool is_bot() const noexcept { return kind_ == Kind::Bot; }
  constexpr bool is_int() const noexcept {
    return kind_ == Kind::Int && marker_ == Marker::None;
  }
  constexpr bool is_marked() const noexcept {
    return kind_ == Kind::Int && marker_ != Marker::None;
  }

  std::int32_t as_int() const {
    if (kind_ != Kind::Int) throw InternalFault("Value::as_int on bot");
    return v_;
  }

  constexpr Marker marker() const noexcept { return marker_; }

  friend constexpr bool operator==(const Value& a, const Value& b) noexcept {
    return a.kind_ == b.kind_ && a.marker_ == b.marker_ && a.v_ == b.v_;
  }

  // Total order with bot maximal. Markers break ties between records that
  // carry the same integer; they never occur in min computations.
  friend constexpr bool operator<(const Value& a, const Value& b) noexcept {
    if (a.kind_ != b.kind_) return a.kind_ == Kind::Int;  // Int < Bot
    if (a.v_ != b.v_) return a.v_ < b.v_;
    return static_cast<std::uint8_t>(a.marker_) < static_cast<std::uint8_t>(b.marker_);
  }
  friend constexpr bool operator<=(const Value& a, const Value& b) noexcept {
    return a < b || a == b;
  }
  friend constexpr bool operator>(const Value& a, const Value& b) noexcept { return b < a; }
  friend constexpr bool operator>=(const Value& a, const Value& b) noexcept { return b <= a; }

  std::string to_string() const {
    if (is_bot()) return "bot";
    std::string s = std::to_string(v_);
    if (marker_ == Marker::Single) return "(single," + s + ")";
    if (marker_ == Marker::Multi) return "(multi," + s + ")";
    return s;
  }

 private:
  enum class Kind : std::uint8_t { Bot = 0, Int = 1 };

  Kind kind_ = Kind::Bot;
  Marker marker_ = Marker::None;
  std::int32_t v_ = 0;
};

/// Minimum under the Value order (bot maximal). The multiset must be
/// nonempty; if it contains at least one integer the result is an integer.
inline Value min_value(std::span<const Value> values) {
  if (values.empty()) throw InternalFault("min_value: empty multiset");
  Value best = values[0];
  for (const Value& v : values.subspan(1)) {
    if (v < best) best = v;
  }
  return best;
}

}  // namespace lcsim

#endif  // LCSIM_VALUE_HPP
