// Copyright 2026 The firmfold Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Reference executor for IR and TR graphs.
//
// Execution walks the CFG from the start block. Values are computed on demand
// and memoized until their block is entered again. Phis are assigned on block
// entry, all at once, from the operand whose position matches the incoming
// control edge; a division by zero met while doing so poisons the Phi and
// traps only when the Phi is read. Loads are program inputs keyed by node id; Stores have no
// observable effect.
//
// Arithmetic is deliberately written independently of the folder so the two
// can check each other.

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "firmfold/ir.hpp"

namespace firmfold {

enum class Trap { DivideByZero, StepLimit };

inline constexpr std::string_view trapName(Trap t) {
  return t == Trap::DivideByZero ? "divide-by-zero" : "step-limit";
}

struct ExecResult {
  std::optional<std::int32_t> value;
  std::uint64_t steps = 0;
  std::optional<Trap> trapped;

  // Equal outcome: same value, or same trap reason. Step counts are ignored.
  bool sameOutcome(const ExecResult& o) const { return value == o.value && trapped == o.trapped; }
};

inline std::string describe(const ExecResult& r) {
  if (r.trapped) return "trap: " + std::string(trapName(*r.trapped));
  return std::to_string(*r.value);
}

// Malformed graph or missing input; distinct from a program trap.
class ExecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Inputs = std::map<NodeId, std::int32_t>;

inline constexpr std::uint64_t kDefaultMaxSteps = 1'000'000;

namespace detail {

struct TrapSignal {
  Trap trap;
};

class Executor {
 public:
  Executor(const FirmGraph& g, const Inputs& inputs, std::uint64_t maxSteps)
      : g_(g), inputs_(inputs), max_steps_(maxSteps) {
    const std::uint32_t n = g.nodeBound();
    block_of_.assign(n, kNone);
    operands_.resize(n);
    value_.assign(n, 0);
    computed_at_.assign(n, 0);
    has_value_.assign(n, false);
    poisoned_.assign(n, false);
    entered_at_.assign(n, 0);
    expanded_.assign(n, false);
    transfer_.assign(n, kNone);
    phis_.resize(n);
    for (std::uint32_t i = 0; i < n; ++i) {
      const NodeId id = nodeId(i);
      if (!g.alive(id)) continue;
      for (const Use& u : g.operandsOf(id)) operands_[i].push_back(index(u.node));
      if (auto b = g.findBlock(id)) {
        block_of_[i] = index(*b);
        if (isControlTransfer(g.kind(id))) transfer_[index(*b)] = i;
        if (isPhi(g.kind(id))) phis_[index(*b)].push_back(i);
      }
    }
  }

  ExecResult run() {
    ExecResult r;
    try {
      r.value = execute();
    } catch (const TrapSignal& t) {
      r.trapped = t.trap;
    }
    r.steps = steps_;
    return r;
  }

 private:
  static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

  std::int32_t execute() {
    std::uint32_t block = index(g_.startBlock());
    entered_at_[block] = ++tick_;
    for (;;) {
      const std::uint32_t t = transfer_[block];
      if (t == kNone) throw ExecError("block " + std::to_string(block) + " has no control transfer");
      step();
      const NodeId tid = nodeId(t);
      switch (g_.kind(tid)) {
        case NodeKind::Return:
        case NodeKind::TargetReturn:
          return eval(operand(t, 0));
        case NodeKind::Jmp:
        case NodeKind::TargetJmp:
          block = enter(successor(tid, EdgeKind::Controlflow));
          break;
        case NodeKind::Cond:
        case NodeKind::TargetCond:
          block = enter(successor(tid, eval(operand(t, 0)) != 0 ? EdgeKind::True : EdgeKind::False));
          break;
        default:
          throw ExecError("unexpected control transfer");
      }
    }
  }

  // The block reached through the control edge of the given kind, and the
  // predecessor index that edge occupies there.
  std::pair<std::uint32_t, std::uint32_t> successor(NodeId jump, EdgeKind k) const {
    for (EdgeId e : g_.inEdges(jump)) {
      const Edge& ed = g_.edge(e);
      if (ed.kind == k) return {index(ed.src), ed.position};
    }
    throw ExecError("jump " + std::to_string(index(jump)) + " has no " + std::string(edgeKindName(k)) + " successor");
  }

  std::uint32_t enter(std::pair<std::uint32_t, std::uint32_t> target) {
    const auto [block, position] = target;
    std::vector<std::optional<std::int32_t>> incoming;
    incoming.reserve(phis_[block].size());
    for (std::uint32_t phi : phis_[block]) {
      step();
      try {
        incoming.push_back(eval(operand(phi, position)));
      } catch (const TrapSignal& t) {
        if (t.trap != Trap::DivideByZero) throw;
        incoming.push_back(std::nullopt);
      }
    }
    entered_at_[block] = ++tick_;
    for (std::size_t i = 0; i < phis_[block].size(); ++i) {
      const std::uint32_t phi = phis_[block][i];
      value_[phi] = incoming[i].value_or(0);
      poisoned_[phi] = !incoming[i];
      has_value_[phi] = true;
      computed_at_[phi] = tick_;
    }
    return block;
  }

  std::uint32_t operand(std::uint32_t n, std::uint32_t position) const {
    for (EdgeId e : g_.outEdges(nodeId(n))) {
      const Edge& ed = g_.edge(e);
      if (ed.kind == EdgeKind::Dataflow && ed.position == position) return index(ed.dst);
    }
    throw ExecError("node " + std::to_string(n) + " has no operand at position " + std::to_string(position));
  }

  void step() {
    if (++steps_ > max_steps_) throw TrapSignal{Trap::StepLimit};
  }

  bool fresh(std::uint32_t n) const {
    if (!has_value_[n]) return false;
    const std::uint32_t b = block_of_[n];
    return b == kNone || computed_at_[n] >= entered_at_[b];
  }

  // Operands that must be evaluated before n.
  bool needsOperands(NodeKind k) const {
    return !(isConst(k) || isPhi(k) || k == NodeKind::Load || k == NodeKind::TargetLoad);
  }

  std::int32_t eval(std::uint32_t root) {
    if (isPhi(g_.kind(nodeId(root)))) return phiValue(root);
    std::vector<std::uint32_t> stack{root};
    try {
      evalStack(stack);
    } catch (const TrapSignal&) {
      for (std::uint32_t n : stack) expanded_[n] = false;
      throw;
    }
    return value_[root];
  }

  void evalStack(std::vector<std::uint32_t>& stack) {
    while (!stack.empty()) {
      const std::uint32_t n = stack.back();
      if (fresh(n)) {
        stack.pop_back();
        continue;
      }
      const NodeKind k = g_.kind(nodeId(n));
      if (!expanded_[n]) {
        // Children go on top; n is computed when it surfaces again.
        expanded_[n] = true;
        if (!needsOperands(k)) continue;
        for (std::uint32_t op : operands_[n]) {
          if (isPhi(g_.kind(nodeId(op))) || fresh(op)) continue;
          if (expanded_[op]) throw ExecError("cyclic data flow through node " + std::to_string(op));
          stack.push_back(op);
        }
        continue;
      }
      step();
      value_[n] = compute(n, k);
      has_value_[n] = true;
      computed_at_[n] = tick_;
      expanded_[n] = false;
      stack.pop_back();
    }
  }

  std::int32_t phiValue(std::uint32_t n) const {
    if (!has_value_[n]) throw ExecError("Phi " + std::to_string(n) + " read before its block was entered");
    if (poisoned_[n]) throw TrapSignal{Trap::DivideByZero};
    return value_[n];
  }

  std::int32_t valueOf(std::uint32_t n) const { return isPhi(g_.kind(nodeId(n))) ? phiValue(n) : value_[n]; }

  std::int32_t compute(std::uint32_t n, NodeKind k) {
    const NodeId id = nodeId(n);
    const NodeAttrs& a = g_.attrs(id);
    auto arg = [&](std::uint32_t pos) { return valueOf(operand(n, pos)); };
    switch (k) {
      case NodeKind::Const:
      case NodeKind::TargetConst:
        return *a.value;
      case NodeKind::Load:
      case NodeKind::TargetLoad: {
        auto it = inputs_.find(id);
        if (it == inputs_.end()) throw ExecError("no input for Load " + std::to_string(n));
        return it->second;
      }
      case NodeKind::Not:
      case NodeKind::TargetNot:
        return static_cast<std::int32_t>(~static_cast<std::int64_t>(arg(0)));
      case NodeKind::Store:
      case NodeKind::TargetStore:
        throw ExecError("Store " + std::to_string(n) + " has no value");
      default:
        break;
    }
    const std::int64_t lhs = arg(0);
    const std::int64_t rhs = isTargetImmediate(k) ? *a.value : arg(1);
    switch (k) {
      case NodeKind::Add: case NodeKind::TargetAdd: case NodeKind::TargetAddI:
        return wrap(lhs + rhs);
      case NodeKind::Sub: case NodeKind::TargetSub: case NodeKind::TargetSubI:
        return wrap(lhs - rhs);
      case NodeKind::Mul: case NodeKind::TargetMul: case NodeKind::TargetMulI:
        return wrap(lhs * rhs);
      case NodeKind::Div: case NodeKind::TargetDiv:
        if (rhs == 0) throw TrapSignal{Trap::DivideByZero};
        return wrap(lhs / rhs);
      case NodeKind::Mod: case NodeKind::TargetMod:
        if (rhs == 0) throw TrapSignal{Trap::DivideByZero};
        return wrap(lhs % rhs);
      case NodeKind::And: case NodeKind::TargetAnd: case NodeKind::TargetAndI:
        return wrap(lhs & rhs);
      case NodeKind::Or: case NodeKind::TargetOr: case NodeKind::TargetOrI:
        return wrap(lhs | rhs);
      case NodeKind::Xor: case NodeKind::TargetXor: case NodeKind::TargetXorI:
        return wrap(lhs ^ rhs);
      case NodeKind::Shl: case NodeKind::TargetShl: case NodeKind::TargetShlI:
        return wrap(lhs * (std::int64_t{1} << (rhs & 31)));
      case NodeKind::Shr: case NodeKind::TargetShr: case NodeKind::TargetShrI: {
        // Floor division by a power of two is an arithmetic shift.
        const std::int64_t d = std::int64_t{1} << (rhs & 31);
        return wrap(lhs >= 0 ? lhs / d : -((-lhs + d - 1) / d));
      }
      case NodeKind::Cmp: case NodeKind::TargetCmp: case NodeKind::TargetCmpI:
        return compare(*a.relation, lhs, rhs) ? 1 : 0;
      default:
        throw ExecError("cannot evaluate " + std::string(kindName(k)) + " node " + std::to_string(n));
    }
  }

  static std::int32_t wrap(std::int64_t v) {
    return static_cast<std::int32_t>(static_cast<std::uint32_t>(static_cast<std::uint64_t>(v) & 0xffffffffu));
  }

  static bool compare(Relation r, std::int64_t a, std::int64_t b) {
    switch (r) {
      case Relation::Equal: return a == b;
      case Relation::NotEqual: return a != b;
      case Relation::Less: return a < b;
      case Relation::LessEqual: return a <= b;
      case Relation::Greater: return a > b;
      case Relation::GreaterEqual: return a >= b;
    }
    return false;
  }

  const FirmGraph& g_;
  const Inputs& inputs_;
  std::uint64_t max_steps_;
  std::uint64_t steps_ = 0;
  std::uint64_t tick_ = 0;

  std::vector<std::uint32_t> block_of_;
  std::vector<std::vector<std::uint32_t>> operands_;
  std::vector<std::int32_t> value_;
  std::vector<std::uint64_t> computed_at_;
  std::vector<bool> has_value_;
  std::vector<bool> poisoned_;
  std::vector<std::uint64_t> entered_at_;
  std::vector<bool> expanded_;
  std::vector<std::uint32_t> transfer_;
  std::vector<std::vector<std::uint32_t>> phis_;
};

}  // namespace detail

inline ExecResult execute(const FirmGraph& g, const Inputs& inputs, std::uint64_t maxSteps = kDefaultMaxSteps) {
  return detail::Executor(g, inputs, maxSteps).run();
}

}  // namespace firmfold
