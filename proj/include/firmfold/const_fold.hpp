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

// Constant folding along data flow. The driver seeds a worklist with every
// user of a Const and then advances a wavefront: each step visits the
// operations in `now`, folds what it can, and queues the users of the newly
// produced constants into `next`.

#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <unordered_set>

#include "firmfold/ir.hpp"

namespace firmfold {

using NodeSet = std::set<NodeId>;

struct Worklist {
  NodeSet now;
  NodeSet next;
};

struct FoldStats {
  std::size_t folds = 0;
  std::size_t iterations = 0;  // wavefront steps
};

// 32-bit wrapping semantics of the IR binaries. Returns nullopt for the
// guarded singularities (Div/Mod by zero).
inline std::optional<std::int32_t> evalBinary(NodeKind k, std::optional<Relation> rel, std::int32_t a,
                                              std::int32_t b) {
  const auto ua = static_cast<std::uint32_t>(a);
  const auto ub = static_cast<std::uint32_t>(b);
  switch (k) {
    case NodeKind::Add: return static_cast<std::int32_t>(ua + ub);
    case NodeKind::Sub: return static_cast<std::int32_t>(ua - ub);
    case NodeKind::Mul: return static_cast<std::int32_t>(ua * ub);
    case NodeKind::Div:
      if (b == 0) return std::nullopt;
      if (a == std::numeric_limits<std::int32_t>::min() && b == -1) return a;
      return a / b;
    case NodeKind::Mod:
      if (b == 0) return std::nullopt;
      if (b == -1) return 0;
      return a % b;
    case NodeKind::And: return a & b;
    case NodeKind::Or: return a | b;
    case NodeKind::Xor: return a ^ b;
    case NodeKind::Shl: return static_cast<std::int32_t>(ua << (ub & 31u));
    case NodeKind::Shr: return a >> (ub & 31u);
    case NodeKind::Cmp: {
      if (!rel) return std::nullopt;
      bool r = false;
      switch (*rel) {
        case Relation::Equal: r = a == b; break;
        case Relation::NotEqual: r = a != b; break;
        case Relation::Less: r = a < b; break;
        case Relation::LessEqual: r = a <= b; break;
        case Relation::Greater: r = a > b; break;
        case Relation::GreaterEqual: r = a >= b; break;
      }
      return r ? 1 : 0;
    }
    default:
      return std::nullopt;
  }
}

namespace detail {

inline bool isIrConst(const FirmGraph& g, NodeId n) { return g.alive(n) && g.kind(n) == NodeKind::Const; }

inline std::optional<EdgeId> operandEdge(const FirmGraph& g, NodeId n, std::uint32_t position) {
  for (EdgeId e : g.outEdges(n)) {
    const Edge& ed = g.edge(e);
    if (ed.kind == EdgeKind::Dataflow && ed.position == position) return e;
  }
  return std::nullopt;
}

inline std::optional<NodeId> operandAt(const FirmGraph& g, NodeId n, std::uint32_t position) {
  if (auto e = operandEdge(g, n, position)) return g.edge(*e).dst;
  return std::nullopt;
}

inline std::size_t operandCount(const FirmGraph& g, NodeId n) {
  std::size_t c = 0;
  for (EdgeId e : g.outEdges(n))
    if (g.edge(e).kind == EdgeKind::Dataflow) ++c;
  return c;
}

// Replaces n by a fresh Const in n's block.
inline NodeId replaceWithConst(FirmGraph& g, NodeId n, std::int32_t value) {
  NodeId c = g.addNode(NodeKind::Const, NodeAttrs::ofValue(value), g.blockOf(n));
  g.redirectUsers(n, c);
  g.deleteNode(n);
  return c;
}

}  // namespace detail

// Adds the users of c (or of every Const when c is absent) to out.
inline bool collectConstUsers(const FirmGraph& g, std::optional<NodeId> c, NodeSet& out) {
  const std::size_t before = out.size();
  auto addUsers = [&](NodeId k) {
    for (EdgeId e : g.inEdges(k)) {
      const Edge& ed = g.edge(e);
      if (ed.kind == EdgeKind::Dataflow) out.insert(ed.src);
    }
  };
  if (c) {
    if (!g.alive(*c) || g.kind(*c) != NodeKind::Const)
      throw GraphError("collectConstUsers: node " + std::to_string(index(*c)) + " is not a Const");
    addUsers(*c);
  } else {
    for (std::uint32_t i = 0; i < g.nodeBound(); ++i)
      if (detail::isIrConst(g, nodeId(i))) addUsers(nodeId(i));
  }
  return out.size() != before;
}

inline std::optional<NodeId> foldNot(FirmGraph& g, NodeId n) {
  if (!g.alive(n) || g.kind(n) != NodeKind::Not) return std::nullopt;
  auto op = detail::operandAt(g, n, 0);
  if (!op || !detail::isIrConst(g, *op) || detail::operandCount(g, n) != 1) return std::nullopt;
  return detail::replaceWithConst(g, n, ~*g.attrs(*op).value);
}

inline std::optional<NodeId> foldBinary(FirmGraph& g, NodeId n) {
  if (!g.alive(n) || !isBinary(g.kind(n))) return std::nullopt;
  auto a = detail::operandAt(g, n, 0);
  auto b = detail::operandAt(g, n, 1);
  if (!a || !b || !detail::isIrConst(g, *a) || !detail::isIrConst(g, *b)) return std::nullopt;
  auto r = evalBinary(g.kind(n), g.attrs(n).relation, *g.attrs(*a).value, *g.attrs(*b).value);
  if (!r) return std::nullopt;
  return detail::replaceWithConst(g, n, *r);
}

// A Phi whose operands are one Const c and otherwise only the Phi itself is
// replaced by c. Returns c.
inline std::optional<NodeId> foldPhi(FirmGraph& g, NodeId n) {
  if (!g.alive(n) || g.kind(n) != NodeKind::Phi) return std::nullopt;
  std::optional<NodeId> c;
  for (EdgeId e : g.outEdges(n)) {
    const Edge& ed = g.edge(e);
    if (ed.kind != EdgeKind::Dataflow || ed.dst == n) continue;
    if (!detail::isIrConst(g, ed.dst) || (c && *c != ed.dst)) return std::nullopt;
    c = ed.dst;
  }
  if (!c) return std::nullopt;
  g.redirectUsers(n, *c);
  g.deleteNode(n);
  return c;
}

// (x K c1) K c2  ->  x K (c1 K c2) for associative-commutative K. The inner
// node and both old constants stay in place for removeUnusedNode.
inline std::optional<NodeId> foldAssocComm(FirmGraph& g, NodeId outer) {
  if (!g.alive(outer)) return std::nullopt;
  const NodeKind k = g.kind(outer);
  if (!isCommutative(k)) return std::nullopt;

  // Split a K-node into (const edge, other edge) when exactly one operand is a Const.
  struct Split {
    EdgeId constEdge;
    EdgeId otherEdge;
  };
  auto split = [&](NodeId n) -> std::optional<Split> {
    if (!g.alive(n) || g.kind(n) != k || detail::operandCount(g, n) != 2) return std::nullopt;
    auto e0 = detail::operandEdge(g, n, 0);
    auto e1 = detail::operandEdge(g, n, 1);
    if (!e0 || !e1) return std::nullopt;
    const bool c0 = detail::isIrConst(g, g.edge(*e0).dst);
    const bool c1 = detail::isIrConst(g, g.edge(*e1).dst);
    if (c0 == c1) return std::nullopt;
    return c0 ? Split{*e0, *e1} : Split{*e1, *e0};
  };

  auto outerSplit = split(outer);
  if (!outerSplit) return std::nullopt;
  const NodeId inner = g.edge(outerSplit->otherEdge).dst;
  if (inner == outer) return std::nullopt;
  auto innerSplit = split(inner);
  if (!innerSplit) return std::nullopt;
  const NodeId x = g.edge(innerSplit->otherEdge).dst;
  if (x == inner || x == outer) return std::nullopt;

  // Dataflow cycles only survive in unreachable code. Refuse to rewrite when
  // the chain below x loops back, or the rule would chase the cycle forever.
  {
    std::unordered_set<NodeId> seen{outer, inner};
    NodeId cur = x;
    while (auto s = split(cur)) {
      if (!seen.insert(cur).second) return std::nullopt;
      cur = g.edge(s->otherEdge).dst;
      if (seen.contains(cur)) return std::nullopt;
    }
  }

  auto block = g.findBlock(outer);
  if (!block) return std::nullopt;
  const std::int32_t c1 = *g.attrs(g.edge(innerSplit->constEdge).dst).value;
  const std::int32_t c2 = *g.attrs(g.edge(outerSplit->constEdge).dst).value;
  const NodeId c3 = g.addNode(NodeKind::Const, NodeAttrs::ofValue(*evalBinary(k, std::nullopt, c1, c2)), *block);

  g.setEdgeTarget(outerSplit->otherEdge, x);
  g.setPosition(outerSplit->otherEdge, 0);
  g.setEdgeTarget(outerSplit->constEdge, c3);
  g.setPosition(outerSplit->constEdge, 1);
  return c3;
}

inline bool wavefrontStep(FirmGraph& g, Worklist& wl, FoldStats* stats = nullptr) {
  bool changed = false;
  for (NodeId cu : wl.now) {
    if (!g.alive(cu)) continue;
    std::optional<NodeId> c = foldNot(g, cu);
    if (!c) c = foldBinary(g, cu);
    if (!c) c = foldPhi(g, cu);
    if (!c) continue;
    changed = true;
    if (stats) ++stats->folds;
    collectConstUsers(g, *c, wl.next);
  }
  return changed;
}

inline FoldStats foldDataflowFixpointStats(FirmGraph& g) {
  FoldStats stats;
  Worklist wl;
  collectConstUsers(g, std::nullopt, wl.now);
  while (!wl.now.empty()) {
    wavefrontStep(g, wl, &stats);
    ++stats.iterations;
    wl.now.clear();
    std::swap(wl.now, wl.next);
  }
  return stats;
}

inline bool foldDataflowFixpoint(FirmGraph& g) { return foldDataflowFixpointStats(g).folds > 0; }

}  // namespace firmfold
