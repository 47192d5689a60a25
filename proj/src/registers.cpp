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

#include "lcsim/registers.hpp"

#include "lcsim/errors.hpp"

namespace lcsim {

namespace {

std::string oob(const RegisterId& id) {
  return "register out of bounds: " + id.to_string();
}

}  // namespace

RegisterId RegisterId::input(int i) {
  return RegisterId{RegObject::Input, static_cast<std::uint8_t>(i), 0, 0};
}

RegisterId RegisterId::dec() { return RegisterId{RegObject::Dec, 0, 0, 0}; }

RegisterId RegisterId::ac_a(int i) {
  return RegisterId{RegObject::AcA, static_cast<std::uint8_t>(i), 0, 0};
}

RegisterId RegisterId::ac_b(int i) {
  return RegisterId{RegObject::AcB, static_cast<std::uint8_t>(i), 0, 0};
}

RegisterId RegisterId::arm(int level, int node, int cell) {
  return RegisterId{RegObject::Arm, static_cast<std::uint8_t>(level),
                    static_cast<std::uint8_t>(node), static_cast<std::uint8_t>(cell)};
}

std::string RegisterId::to_string() const {
  switch (object) {
    case RegObject::Input:
      return "INPUT[" + std::to_string(a) + "]";
    case RegObject::Dec:
      return "DEC";
    case RegObject::AcA:
      return "AC.A[" + std::to_string(a) + "]";
    case RegObject::AcB:
      return "AC.B[" + std::to_string(a) + "]";
    case RegObject::Arm:
      return "ARM[" + std::to_string(a) + "][" + std::to_string(b) + "][" +
             std::to_string(c) + "]";
  }
  return "?";
}

int arm_level_count(int n) {
  if (n < 1) throw InternalFault("arm_level_count: n < 1");
  int levels = 0;
  int span = 1;
  while (span < n) {
    span <<= 1;
    ++levels;
  }
  return levels;
}

RegisterLayout::RegisterLayout(int n) : n_(n) {
  if (n < 1) throw InternalFault("RegisterLayout: n < 1");
  arm_levels_ = arm_level_count(n);
  // Slot order: INPUT[1..n], DEC, AC.A[1..n], AC.B[1..n], then ARM levels
  // bottom-up, nodes ascending, cells flag0/flag1/turn.
  arm_base_ = static_cast<std::size_t>(3 * n + 1);
  std::size_t at = arm_base_;
  arm_level_base_.resize(static_cast<std::size_t>(arm_levels_));
  for (int l = 0; l < arm_levels_; ++l) {
    arm_level_base_[static_cast<std::size_t>(l)] = at;
    at += static_cast<std::size_t>(arm_nodes(l)) * 3;
  }
  total_ = at;

  owners_.assign(total_, 0);
  ids_.resize(total_);
  for (int i = 1; i <= n; ++i) {
    ids_[static_cast<std::size_t>(i - 1)] = RegisterId::input(i);
    owners_[static_cast<std::size_t>(i - 1)] = i;  // INPUT[i] is SWMR, owner p_i
  }
  ids_[static_cast<std::size_t>(n)] = RegisterId::dec();  // DEC is MWMR
  for (int i = 1; i <= n; ++i) {
    ids_[static_cast<std::size_t>(n + i)] = RegisterId::ac_a(i);
    owners_[static_cast<std::size_t>(n + i)] = i;
    ids_[static_cast<std::size_t>(2 * n + i)] = RegisterId::ac_b(i);
    owners_[static_cast<std::size_t>(2 * n + i)] = i;
  }
  for (int l = 0; l < arm_levels_; ++l) {
    for (int m = 0; m < arm_nodes(l); ++m) {
      for (int c = 0; c < 3; ++c) {
        std::size_t s = arm_level_base_[static_cast<std::size_t>(l)] +
                        static_cast<std::size_t>(m) * 3 + static_cast<std::size_t>(c);
        ids_[s] = RegisterId::arm(l, m, c);
        // Leaf flags have a fixed contender; higher levels and turn cells
        // are written by whichever process reaches them.
        if (l == 0 && c != kArmTurn) {
          int pid = 2 * m + c + 1;
          owners_[s] = pid <= n ? pid : 0;
        }
      }
    }
  }
}

int RegisterLayout::arm_nodes(int level) const {
  if (level < 0 || level >= arm_levels_)
    throw InternalFault("arm_nodes: level out of range");
  return 1 << (arm_levels_ - 1 - level);
}

std::size_t RegisterLayout::slot(const RegisterId& id) const {
  switch (id.object) {
    case RegObject::Input:
      if (id.a < 1 || id.a > n_) throw InternalFault(oob(id));
      return static_cast<std::size_t>(id.a - 1);
    case RegObject::Dec:
      return static_cast<std::size_t>(n_);
    case RegObject::AcA:
      if (id.a < 1 || id.a > n_) throw InternalFault(oob(id));
      return static_cast<std::size_t>(n_ + id.a);
    case RegObject::AcB:
      if (id.a < 1 || id.a > n_) throw InternalFault(oob(id));
      return static_cast<std::size_t>(2 * n_ + id.a);
    case RegObject::Arm: {
      if (id.a >= arm_levels_ || id.b >= arm_nodes(id.a) || id.c > 2)
        throw InternalFault(oob(id));
      return arm_level_base_[id.a] + static_cast<std::size_t>(id.b) * 3 +
             static_cast<std::size_t>(id.c);
    }
  }
  throw InternalFault("slot: bad register object");
}

RegisterId RegisterLayout::id_of(std::size_t slot) const {
  if (slot >= total_) throw InternalFault("id_of: slot out of range");
  return ids_[slot];
}

Value RegisterFile::read(const RegisterId& id) const {
  return cells_[layout_->slot(id)];
}

void RegisterFile::write(const RegisterId& id, const Value& v, int writer_pid) {
  std::size_t s = layout_->slot(id);
  if (writer_pid < 1 || writer_pid > layout_->process_count())
    throw InternalFault("write: invalid writer pid");
  int owner = layout_->owner(s);
  if (owner != 0 && owner != writer_pid)
    throw InternalFault("SWMR violation: p" + std::to_string(writer_pid) +
                        " wrote " + id.to_string());
  cells_[s] = v;
}

std::uint64_t RegisterFile::canonical_hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t byte) {
    h ^= byte;
    h *= 1099511628211ULL;
  };
  for (const Value& v : cells_) {
    if (v.is_bot()) {
      mix(0);
      continue;
    }
    mix(1 + static_cast<std::uint64_t>(v.marker()));
    std::uint64_t x = static_cast<std::uint64_t>(static_cast<std::uint32_t>(v.as_int()));
    for (int i = 0; i < 4; ++i) mix((x >> (8 * i)) & 0xff);
  }
  return h;
}

RegisterFile new_register_file(int n, int k) {
  if (n < 1) throw ConfigError("n", "process count must be at least 1");
  if (k < 0 || k > n) throw ConfigError("k", "failure bound must satisfy 0 <= k <= n");
  RegisterFile f;
  f.layout_ = std::make_shared<const RegisterLayout>(n);
  f.cells_.assign(f.layout_->size(), Value::bot());
  return f;
}

}  // namespace lcsim
