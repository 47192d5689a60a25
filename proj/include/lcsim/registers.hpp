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

#ifndef LCSIM_REGISTERS_HPP
#define LCSIM_REGISTERS_HPP

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "lcsim/value.hpp"

namespace lcsim {

/// Register namespaces of the shared memory: the per-process proposal array,
/// the decision register, the two adopt-commit arrays, and the tournament
/// lock cells.
enum class RegObject : std::uint8_t { Input, Dec, AcA, AcB, Arm };

/// Cells of one tournament node: the two contender flags and the turn
/// register.
inline constexpr int kArmFlag0 = 0;
inline constexpr int kArmFlag1 = 1;
inline constexpr int kArmTurn = 2;

struct RegisterId {
  RegObject object = RegObject::Dec;
  // Input/AcA/AcB: a = 1-based process index. Arm: a = level, b = node,
  // c = cell (0-based).
  std::uint8_t a = 0, b = 0, c = 0;

  static RegisterId input(int i);
  static RegisterId dec();
  static RegisterId ac_a(int i);
  static RegisterId ac_b(int i);
  static RegisterId arm(int level, int node, int cell);

  /// Rendering used in traces: "INPUT[i]", "DEC", "AC.A[i]", "AC.B[i]",
  /// "ARM[l][m][c]".
  std::string to_string() const;

  friend bool operator==(const RegisterId&, const RegisterId&) = default;
};

/// Number of tournament levels for n contenders: ceil(log2 n), 0 when n = 1.
int arm_level_count(int n);

/// Static geometry and ownership of the whole register namespace for a
/// system of n processes. Preallocated once; shared by all copies of a
/// register file so state-space forks only copy cell contents.
class RegisterLayout {
 public:
  explicit RegisterLayout(int n);

  int process_count() const noexcept { return n_; }
  int arm_levels() const noexcept { return arm_levels_; }
  int arm_nodes(int level) const;

  std::size_t size() const noexcept { return total_; }
  std::size_t slot(const RegisterId& id) const;
  RegisterId id_of(std::size_t slot) const;

  /// Writer pid for SWMR cells, 0 for multi-writer cells.
  int owner(std::size_t slot) const { return owners_[slot]; }

 private:
  int n_ = 0;
  int arm_levels_ = 0;
  std::size_t arm_base_ = 0;
  std::size_t total_ = 0;
  std::vector<std::size_t> arm_level_base_;
  std::vector<int> owners_;
  std::vector<RegisterId> ids_;
};

/// All shared atomic registers of one system state. Reads and writes are
/// single atomic accesses; the runtime drives them one per step. Writes
/// enforce the SWMR ownership table. Cheap to copy.
class RegisterFile {
 public:
  RegisterFile() = default;

  const RegisterLayout& layout() const { return *layout_; }
  std::span<const Value> cells() const noexcept { return cells_; }

  Value read(const RegisterId& id) const;
  void write(const RegisterId& id, const Value& v, int writer_pid);

  /// Order-independent digest: equal files hash equal. FNV-1a over the cell
  /// contents in slot order.
  std::uint64_t canonical_hash() const;

  friend bool operator==(const RegisterFile& a, const RegisterFile& b) {
    return a.cells_ == b.cells_;
  }

  friend RegisterFile new_register_file(int n, int k);

 private:
  std::shared_ptr<const RegisterLayout> layout_;
  std::vector<Value> cells_;
};

/// Fresh register file for n processes under failure bound k: every cell
/// holds bot, ownership complete. Throws ConfigError for invalid (n, k).
RegisterFile new_register_file(int n, int k);

inline std::uint64_t canonical_hash(const RegisterFile& file) {
  return file.canonical_hash();
}

/// One shared-memory access performed by a step, for trace emission. Local
/// denotes a purely local transition (no register touched).
enum class AccessKind : std::uint8_t { Read, Write, Local };

struct Access {
  AccessKind kind = AccessKind::Local;
  RegisterId reg;
  Value value;

  static Access local() { return Access{}; }
  static Access read(RegisterId r, Value v) { return Access{AccessKind::Read, r, v}; }
  static Access write(RegisterId r, Value v) { return Access{AccessKind::Write, r, v}; }

  bool is_shared() const noexcept { return kind != AccessKind::Local; }
};

}  // namespace lcsim

#endif  // LCSIM_REGISTERS_HPP
