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

#include "lcsim/explorer.hpp"

#include <algorithm>
#include <deque>
#include <optional>
#include <unordered_map>

#include "lcsim/errors.hpp"

namespace lcsim {

namespace {

constexpr std::int32_t kMaxExplorerValue = 80;

std::uint8_t cell_byte(const Value& v) {
  if (v.is_bot()) return 0;
  std::int32_t x = v.as_int();
  if (x >= kMaxExplorerValue) throw InternalFault("explorer: cell value too large");
  return static_cast<std::uint8_t>(1 + 3 * x + static_cast<int>(v.marker()));
}

void put_cells(std::string& out, std::span<const Value> cells) {
  for (const Value& v : cells) out.push_back(static_cast<char>(cell_byte(v)));
}

void put_u32(std::string& out, std::uint32_t x) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>(x >> (8 * i) & 0xff));
}

std::uint64_t fnv64(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// Per-node facts consumed by the safety pass and the bottom-SCC analysis.
struct NodeInfo {
  bool terminal_live_ok = false;
  bool cycle_live_ok = false;
  std::uint8_t undecided_pid = 0;
  std::optional<SafetyViolation> safety;  // prefix filled in by the core
};

/// Frontier search with canonical-encoding deduplication, BFS parent links
/// for witness prefixes, and a CSR successor graph for the SCC pass. The
/// Model supplies:
///   State initial() const
///   void actions(const State&, std::vector<ScheduledAction>&) const
///   void apply(State&, const ScheduledAction&) const
///   void encode(const State&, std::string&) const
///   NodeInfo inspect(const State&) const
///   void on_terminal(const State&) const
template <class Model>
class Core {
 public:
  Core(const Model& model, std::uint64_t cap) : model_(model), cap_(cap) {}

  ExplorationReport run() {
    ExplorationReport report;
    discover(model_.initial(), UINT32_MAX, ScheduledAction{}, report);

    std::vector<ScheduledAction> acts;
    while (!frontier_.empty()) {
      if (report.truncated) break;
      auto [id, state] = std::move(frontier_.front());
      frontier_.pop_front();

      acts.clear();
      model_.actions(state, acts);
      offsets_.push_back(targets_.size());
      if (acts.empty()) {
        model_.on_terminal(state);
        continue;
      }
      for (const ScheduledAction& a : acts) {
        typename Model::State next = state;
        model_.apply(next, a);
        ++report.transition_count;
        if (a.kind == ScheduledAction::Kind::Crash) {
          ++report.crash_edge_count;
          report.max_parts_at_crash =
              std::max(report.max_parts_at_crash, parts_of(state));
        }
        std::uint32_t tid = discover(std::move(next), id, a, report);
        if (report.truncated) break;
        targets_.push_back(tid);
      }
    }
    // Close the offset table for nodes that were never expanded (possible
    // only when truncated).
    while (offsets_.size() < node_count_ + 1) offsets_.push_back(targets_.size());

    report.state_count = node_count_;
    if (!report.truncated) scc_pass(report);
    return report;
  }

 private:
  std::uint32_t discover(typename Model::State&& s, std::uint32_t parent,
                         const ScheduledAction& via, ExplorationReport& report) {
    buf_.clear();
    model_.encode(s, buf_);
    auto [it, inserted] = ids_.try_emplace(buf_, static_cast<std::uint32_t>(node_count_));
    if (!inserted) return it->second;
    if (node_count_ >= cap_) {
      report.truncated = true;
      ids_.erase(it);
      return UINT32_MAX;
    }
    std::uint32_t id = static_cast<std::uint32_t>(node_count_++);
    parents_.push_back({parent, via});
    std::uint64_t digest = fnv64(buf_);
    digests_.push_back(digest);

    NodeInfo info = model_.inspect(s);
    meta_.push_back(static_cast<std::uint8_t>((info.terminal_live_ok ? 1 : 0) |
                                              (info.cycle_live_ok ? 2 : 0)));
    undecided_.push_back(info.undecided_pid);
    if (info.safety) {
      info.safety->state_digest = digest;
      info.safety->prefix = prefix_of(id);
      report.safety_violations.push_back(std::move(*info.safety));
    }
    frontier_.emplace_back(id, std::move(s));
    return id;
  }

  int parts_of(const typename Model::State& s) const { return model_.parts_of(s); }

  std::vector<ScheduledAction> prefix_of(std::uint32_t id) const {
    std::vector<ScheduledAction> out;
    for (std::uint32_t at = id; at != 0 && parents_[at].first != UINT32_MAX;
         at = parents_[at].first) {
      out.push_back(parents_[at].second);
    }
    std::reverse(out.begin(), out.end());
    return out;
  }

  // Iterative Tarjan over the CSR graph, then bottom-SCC classification:
  // a bottom component passes iff it is a terminal state whose meta says
  // terminal-ok, or a cycle whose meta says cycle-ok.
  void scc_pass(ExplorationReport& report) {
    const std::uint32_t n = static_cast<std::uint32_t>(node_count_);
    std::vector<std::uint32_t> comp(n, UINT32_MAX), low(n), idx(n, UINT32_MAX);
    std::vector<std::uint32_t> stack, call_node, call_edge;
    std::vector<bool> onstack(n, false);
    std::uint32_t next_index = 0, comp_count = 0;

    for (std::uint32_t root = 0; root < n; ++root) {
      if (idx[root] != UINT32_MAX) continue;
      call_node.push_back(root);
      call_edge.push_back(0);
      while (!call_node.empty()) {
        std::uint32_t v = call_node.back();
        if (call_edge.back() == 0) {
          idx[v] = low[v] = next_index++;
          stack.push_back(v);
          onstack[v] = true;
        }
        bool descended = false;
        while (call_edge.back() < offsets_[v + 1] - offsets_[v]) {
          std::size_t e = offsets_[v] + call_edge.back()++;
          std::uint32_t w = targets_[e];
          if (idx[w] == UINT32_MAX) {
            call_node.push_back(w);
            call_edge.push_back(0);
            descended = true;
            break;
          }
          if (onstack[w]) low[v] = std::min(low[v], idx[w]);
        }
        if (descended) continue;
        if (low[v] == idx[v]) {
          for (;;) {
            std::uint32_t w = stack.back();
            stack.pop_back();
            onstack[w] = false;
            comp[w] = comp_count;
            if (w == v) break;
          }
          ++comp_count;
        }
        call_node.pop_back();
        call_edge.pop_back();
        if (!call_node.empty()) {
          std::uint32_t parent = call_node.back();
          low[parent] = std::min(low[parent], low[v]);
        }
      }
    }

    std::vector<std::uint8_t> has_out(comp_count, 0), has_cycle(comp_count, 0),
        cycle_ok(comp_count, 0);
    std::vector<std::uint64_t> size(comp_count, 0);
    std::vector<std::uint32_t> rep(comp_count, UINT32_MAX);
    for (std::uint32_t v = 0; v < n; ++v) {
      std::uint32_t c = comp[v];
      ++size[c];
      rep[c] = std::min(rep[c], v);
      if (meta_[v] & 2) cycle_ok[c] = 1;
      for (std::uint32_t e = offsets_[v]; e < offsets_[v + 1]; ++e) {
        if (comp[targets_[e]] != c)
          has_out[c] = 1;
        else
          has_cycle[c] = 1;
      }
    }

    report.liveness_pass = true;
    for (std::uint32_t c = 0; c < comp_count; ++c) {
      if (has_out[c]) continue;  // not a bottom SCC
      bool ok;
      if (!has_cycle[c]) {
        ok = size[c] == 1 && (meta_[rep[c]] & 1);
      } else {
        ok = cycle_ok[c] != 0;
      }
      if (ok) continue;
      report.liveness_pass = false;
      BadScc bad;
      bad.state_digest = digests_[rep[c]];
      bad.scc_size = size[c];
      bad.undecided_pid = undecided_[rep[c]];
      bad.prefix = prefix_of(rep[c]);
      report.bad_sccs.push_back(std::move(bad));
    }
    std::sort(report.bad_sccs.begin(), report.bad_sccs.end(),
              [](const BadScc& a, const BadScc& b) {
                if (a.prefix.size() != b.prefix.size())
                  return a.prefix.size() < b.prefix.size();
                return a.state_digest < b.state_digest;
              });
  }

  const Model& model_;
  std::uint64_t cap_;
  std::unordered_map<std::string, std::uint32_t> ids_;
  std::deque<std::pair<std::uint32_t, typename Model::State>> frontier_;
  std::vector<std::pair<std::uint32_t, ScheduledAction>> parents_;
  std::vector<std::uint8_t> meta_, undecided_;
  std::vector<std::uint64_t> digests_;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> targets_;
  std::size_t node_count_ = 0;
  std::string buf_;
};

void encode_ac_cursor(std::string& out, const AcCursor& c) {
  out.push_back(static_cast<char>(c.phase));
  out.push_back(static_cast<char>(c.j));
  out.push_back(c.single_flag ? 1 : 0);
  put_cells(out, c.seen_a);
  put_cells(out, c.seen_b);
  if (c.done()) {
    out.push_back(static_cast<char>(1 + static_cast<int>(c.result.tag)));
    out.push_back(static_cast<char>(cell_byte(c.result.value)));
  } else {
    out.push_back(0);
    out.push_back(0);
  }
}

void encode_arm_cursor(std::string& out, const ArmCursor& c) {
  out.push_back(static_cast<char>(c.level));
  out.push_back(static_cast<char>(c.node));
  out.push_back(static_cast<char>(c.side));
  out.push_back(static_cast<char>(c.phase));
}

struct ConsensusModel {
  using State = SystemState;

  Config cfg;
  std::function<void(const SystemState&)> terminal_visitor;

  State initial() const { return init_system(cfg); }

  void actions(const State& s, std::vector<ScheduledAction>& out) const {
    out = enabled_actions(s, cfg);
  }

  void apply(State& s, const ScheduledAction& a) const {
    apply_action(s, a, cfg, nullptr);
  }

  int parts_of(const State& s) const { return s.participation_count(); }

  void encode(const State& s, std::string& out) const {
    put_cells(out, s.file.cells());
    put_u32(out, s.crashed_mask);
    put_u32(out, s.participated_mask);
    for (const ProcState& p : s.procs) {
      out.push_back(static_cast<char>(p.main_pc));
      out.push_back(static_cast<char>(p.collect_j));
      put_cells(out, p.collected);
      out.push_back(static_cast<char>(cell_byte(p.val)));
      out.push_back(p.tag ? static_cast<char>(1 + static_cast<int>(*p.tag)) : 0);
      out.push_back(static_cast<char>(cell_byte(p.res)));
      out.push_back(static_cast<char>(cell_byte(p.decided_value)));
      out.push_back(static_cast<char>(p.thread_t));
      if (p.ac) {
        out.push_back(1);
        encode_ac_cursor(out, *p.ac);
      } else {
        out.push_back(0);
      }
      if (p.arm) {
        out.push_back(1);
        encode_arm_cursor(out, *p.arm);
      } else {
        out.push_back(0);
      }
    }
  }

  NodeInfo inspect(const State& s) const {
    NodeInfo info;
    info.terminal_live_ok = s.all_correct_decided();
    info.cycle_live_ok = false;
    for (const ProcState& p : s.procs) {
      if (!s.crashed(p.pid) && !p.decided()) {
        info.undecided_pid = static_cast<std::uint8_t>(p.pid);
        break;
      }
    }
    const ProcState* first_decided = nullptr;
    for (const ProcState& p : s.procs) {
      if (!p.decided()) continue;
      int v = p.decided_value.as_int();
      if (std::find(cfg.inputs.begin(), cfg.inputs.end(), v) == cfg.inputs.end()) {
        info.safety = SafetyViolation{
            "validity",
            "p" + std::to_string(p.pid) + " decided " + std::to_string(v) +
                ", which no process proposed",
            0,
            {}};
        break;
      }
      if (first_decided && first_decided->decided_value.as_int() != v) {
        info.safety = SafetyViolation{
            "agreement",
            "p" + std::to_string(first_decided->pid) + " decided " +
                std::to_string(first_decided->decided_value.as_int()) + " but p" +
                std::to_string(p.pid) + " decided " + std::to_string(v),
            0,
            {}};
        break;
      }
      if (!first_decided) first_decided = &p;
    }
    return info;
  }

  void on_terminal(const State& s) const {
    if (terminal_visitor) terminal_visitor(s);
  }
};

struct AcObjectModel {
  using State = AcSystemState;

  int n;
  std::vector<int> proposals;
  std::function<void(const AcSystemState&)> terminal_visitor;

  State initial() const {
    State s;
    s.file = new_register_file(n, 0);
    for (int pid = 1; pid <= n; ++pid) {
      s.cursors.push_back(
          ac_init(pid, Value::integer(proposals[static_cast<std::size_t>(pid - 1)]), n));
    }
    return s;
  }

  void actions(const State& s, std::vector<ScheduledAction>& out) const {
    out.clear();
    for (const AcCursor& c : s.cursors) {
      if (!c.done()) out.push_back(ScheduledAction::step(c.pid, ThreadId::Main));
    }
  }

  void apply(State& s, const ScheduledAction& a) const {
    ac_step(s.cursors[static_cast<std::size_t>(a.pid - 1)], s.file);
  }

  int parts_of(const State&) const { return 0; }

  void encode(const State& s, std::string& out) const {
    put_cells(out, s.file.cells());
    for (const AcCursor& c : s.cursors) encode_ac_cursor(out, c);
  }

  NodeInfo inspect(const State& s) const {
    NodeInfo info;
    info.terminal_live_ok = true;
    for (const AcCursor& c : s.cursors) {
      if (!c.done()) {
        info.terminal_live_ok = false;
        info.undecided_pid = static_cast<std::uint8_t>(c.pid);
        break;
      }
    }
    info.cycle_live_ok = false;  // wait-free object: cycles are never fine
    bool uniform = std::all_of(proposals.begin(), proposals.end(),
                               [&](int v) { return v == proposals[0]; });
    std::optional<std::int32_t> committed;
    for (const AcCursor& c : s.cursors) {
      if (c.done() && c.result.tag == AcTag::Commit)
        committed = c.result.value.as_int();
    }
    for (const AcCursor& c : s.cursors) {
      if (!c.done()) continue;
      std::int32_t v = c.result.value.as_int();
      bool is_commit = c.result.tag == AcTag::Commit;
      if (std::find(proposals.begin(), proposals.end(), v) == proposals.end()) {
        info.safety = SafetyViolation{
            "validity",
            "p" + std::to_string(c.pid) + " returned " + std::to_string(v) +
                ", which was never proposed",
            0,
            {}};
        return info;
      }
      if (uniform && !(is_commit && v == proposals[0])) {
        info.safety = SafetyViolation{
            "obligation",
            "uniform proposals but p" + std::to_string(c.pid) + " returned (" +
                (is_commit ? "commit" : "adopt") + "," + std::to_string(v) + ")",
            0,
            {}};
        return info;
      }
      if (committed && v != *committed) {
        info.safety = SafetyViolation{
            "weak-agreement",
            "a commit carries " + std::to_string(*committed) + " but p" +
                std::to_string(c.pid) + " returned " + std::to_string(v),
            0,
            {}};
        return info;
      }
    }
    return info;
  }

  void on_terminal(const State& s) const {
    if (terminal_visitor) terminal_visitor(s);
  }
};

struct ArmObjectModel {
  using State = ArmSystemState;

  int n;

  State initial() const {
    State s;
    s.file = new_register_file(n, 0);
    for (int pid = 1; pid <= n; ++pid) s.cursors.push_back(arm_init(pid, n));
    return s;
  }

  void actions(const State& s, std::vector<ScheduledAction>& out) const {
    out.clear();
    for (const ArmCursor& c : s.cursors) {
      if (!c.acquired()) out.push_back(ScheduledAction::step(c.pid, ThreadId::Main));
    }
  }

  void apply(State& s, const ScheduledAction& a) const {
    arm_step(s.cursors[static_cast<std::size_t>(a.pid - 1)], s.file);
  }

  int parts_of(const State&) const { return 0; }

  void encode(const State& s, std::string& out) const {
    put_cells(out, s.file.cells());
    for (const ArmCursor& c : s.cursors) encode_arm_cursor(out, c);
  }

  NodeInfo inspect(const State& s) const {
    NodeInfo info;
    int acquirers = 0;
    for (const ArmCursor& c : s.cursors) {
      if (c.acquired())
        ++acquirers;
      else if (info.undecided_pid == 0)
        info.undecided_pid = static_cast<std::uint8_t>(c.pid);
    }
    // Losers spin forever; a bottom component is healthy iff somebody won.
    info.terminal_live_ok = acquirers >= 1 || n == 0;
    info.cycle_live_ok = acquirers >= 1;
    if (acquirers > 1) {
      info.safety = SafetyViolation{
          "mutual-exclusion",
          std::to_string(acquirers) + " cursors acquired simultaneously",
          0,
          {}};
    }
    return info;
  }

  void on_terminal(const State&) const {}
};

void check_object_inputs(int n, const std::vector<int>* proposals) {
  if (n < 1) throw ConfigError("n", "process count must be at least 1");
  if (n > 8) throw ConfigError("n", "object exploration supports at most 8 processes");
  if (proposals) {
    if (static_cast<int>(proposals->size()) != n)
      throw ConfigError("proposals", "expected one proposal per process");
    for (int v : *proposals) {
      if (v < 0 || v >= kMaxExplorerValue)
        throw ConfigError("proposals", "explorer proposals must be in [0, " +
                                           std::to_string(kMaxExplorerValue) + ")");
    }
  }
}

}  // namespace

ExplorationReport explore(const Config& cfg, std::uint64_t state_cap,
                          const std::function<void(const SystemState&)>& terminal_visitor) {
  validate_config(cfg);
  if (cfg.n > 8) throw ConfigError("n", "exploration supports at most 8 processes");
  for (int v : cfg.inputs) {
    if (v >= kMaxExplorerValue)
      throw ConfigError("inputs", "explorer inputs must be in [0, " +
                                      std::to_string(kMaxExplorerValue) + ")");
  }
  ConsensusModel model{cfg, terminal_visitor};
  return Core<ConsensusModel>(model, state_cap).run();
}

TightnessWitness find_tightness_witness(const Config& cfg, std::uint64_t state_cap) {
  if (cfg.f != cfg.k + 1)
    throw ConfigError("f", "tightness search requires f = k + 1");
  TightnessWitness w;
  w.report = explore(cfg, state_cap);
  if (!w.report.bad_sccs.empty()) {
    w.status = TightnessWitness::Status::Found;
    w.schedule = w.report.bad_sccs.front().prefix;
    w.undecided_pid = w.report.bad_sccs.front().undecided_pid;
  } else if (w.report.truncated) {
    w.status = TightnessWitness::Status::Inconclusive;
  } else {
    w.status = TightnessWitness::Status::None;
  }
  return w;
}

ExplorationReport explore_adopt_commit(
    int n, const std::vector<int>& proposals, std::uint64_t state_cap,
    const std::function<void(const AcSystemState&)>& terminal_visitor) {
  check_object_inputs(n, &proposals);
  AcObjectModel model{n, proposals, terminal_visitor};
  return Core<AcObjectModel>(model, state_cap).run();
}

ExplorationReport explore_arm(int n, std::uint64_t state_cap) {
  check_object_inputs(n, nullptr);
  ArmObjectModel model{n};
  return Core<ArmObjectModel>(model, state_cap).run();
}

ExplorationReport explore_object(ObjectKind object, int n,
                                 const std::vector<int>& proposals,
                                 std::uint64_t state_cap) {
  if (object == ObjectKind::AdoptCommit)
    return explore_adopt_commit(n, proposals, state_cap);
  return explore_arm(n, state_cap);
}

}  // namespace lcsim
