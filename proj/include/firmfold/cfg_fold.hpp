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

// Control-flow folding, unreachable-code removal and graph cleanup, plus the
// top-level optimize driver that alternates the data-flow wavefront with a
// cleanup round until neither changes the graph.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "firmfold/const_fold.hpp"
#include "firmfold/ir.hpp"
#include "firmfold/verifier.hpp"

namespace firmfold {

class ContractError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline bool foldCond(FirmGraph& g, NodeId cond) {
  if (!g.alive(cond) || g.kind(cond) != NodeKind::Cond) return false;
  auto opEdge = detail::operandEdge(g, cond, 0);
  if (!opEdge || !detail::isIrConst(g, g.edge(*opEdge).dst)) return false;
  const bool taken = *g.attrs(g.edge(*opEdge).dst).value != 0;

  std::optional<EdgeId> trueEdge, falseEdge;
  for (EdgeId e : g.inEdges(cond)) {
    if (g.edge(e).kind == EdgeKind::True) trueEdge = e;
    if (g.edge(e).kind == EdgeKind::False) falseEdge = e;
  }
  if (!trueEdge || !falseEdge) return false;

  g.deleteEdge(taken ? *falseEdge : *trueEdge);
  g.retypeEdge(taken ? *trueEdge : *falseEdge, EdgeKind::Controlflow);
  g.retypeNode(cond, NodeKind::Jmp);
  g.deleteEdge(*opEdge);
  return true;
}

inline bool removeUnreachableBlock(FirmGraph& g, NodeId b) {
  if (!g.alive(b) || g.kind(b) != NodeKind::Block) return false;
  if (b == g.startBlock() || b == g.endBlock()) return false;
  if (g.controlPredCount(b) != 0) return false;
  g.deleteNode(b);
  return true;
}

inline bool removeUnreachableNode(FirmGraph& g, NodeId n) {
  if (!g.alive(n)) return false;
  const NodeKind k = g.kind(n);
  if (k == NodeKind::Block || k == NodeKind::Start || k == NodeKind::End) return false;
  if (g.findBlock(n)) return false;
  g.deleteNode(n);
  return true;
}

inline bool removeUnreachablePhiOperand(FirmGraph& g, NodeId phi) {
  if (!g.alive(phi) || g.kind(phi) != NodeKind::Phi) return false;
  auto block = g.findBlock(phi);
  if (!block) return false;
  std::vector<std::uint32_t> ctrl;
  for (const ControlPred& p : g.controlPredsOf(*block)) ctrl.push_back(p.position);
  std::vector<EdgeId> doomed;
  for (EdgeId e : g.outEdges(phi)) {
    const Edge& ed = g.edge(e);
    if (ed.kind == EdgeKind::Dataflow && !std::binary_search(ctrl.begin(), ctrl.end(), ed.position))
      doomed.push_back(e);
  }
  for (EdgeId e : doomed) g.deleteEdge(e);
  return !doomed.empty();
}

// Renumbers the block's control edges to 0..k-1 in their current order and
// moves each Phi operand to the new index of its old control position.
inline bool fixEdgePosition(FirmGraph& g, NodeId b) {
  if (!g.alive(b) || g.kind(b) != NodeKind::Block) return false;
  std::vector<EdgeId> ctrl;
  for (EdgeId e : g.outEdges(b))
    if (isControlEdge(g.edge(e).kind)) ctrl.push_back(e);
  std::sort(ctrl.begin(), ctrl.end(), [&](EdgeId x, EdgeId y) {
    return std::pair(g.edge(x).position, g.edge(x).dst) < std::pair(g.edge(y).position, g.edge(y).dst);
  });
  std::vector<std::uint32_t> oldPositions;
  bool contiguous = true;
  for (std::size_t i = 0; i < ctrl.size(); ++i) {
    oldPositions.push_back(g.edge(ctrl[i]).position);
    if (oldPositions.back() != i) contiguous = false;
  }
  if (contiguous) return false;

  auto rank = [&](std::uint32_t p) {
    return static_cast<std::uint32_t>(std::lower_bound(oldPositions.begin(), oldPositions.end(), p) -
                                      oldPositions.begin());
  };
  bool changed = false;
  for (EdgeId member : std::vector<EdgeId>(g.inEdges(b).begin(), g.inEdges(b).end())) {
    const Edge& be = g.edge(member);
    if (be.kind != EdgeKind::BlockEdge || !isPhi(g.kind(be.src))) continue;
    for (EdgeId e : g.outEdges(be.src)) {
      const Edge& ed = g.edge(e);
      if (ed.kind != EdgeKind::Dataflow) continue;
      if (std::uint32_t r = rank(ed.position); r != ed.position) {
        g.setPosition(e, r);
        changed = true;
      }
    }
  }
  for (std::size_t i = 0; i < ctrl.size(); ++i) {
    if (g.edge(ctrl[i]).position != i) {
      g.setPosition(ctrl[i], static_cast<std::uint32_t>(i));
      changed = true;
    }
  }
  return changed;
}

inline bool simplifyTrivialPhi(FirmGraph& g, NodeId phi) {
  if (!g.alive(phi) || g.kind(phi) != NodeKind::Phi) return false;
  if (detail::operandCount(g, phi) != 1) return false;
  const NodeId x = g.operandsOf(phi).front().node;
  if (x == phi) return false;
  g.redirectUsers(phi, x);
  g.deleteNode(phi);
  return true;
}

inline bool isRemovableWhenUnused(const FirmGraph& g, NodeId n) {
  const NodeKind k = g.kind(n);
  if (k == NodeKind::Load || k == NodeKind::TargetLoad) return !g.attrs(n).isVolatile.value_or(false);
  return isConst(k) || isPhi(k) || k == NodeKind::Not || k == NodeKind::TargetNot || isBinary(k) ||
         isTargetBinary(k) || isTargetImmediate(k);
}

inline bool removeUnusedNode(FirmGraph& g, NodeId n) {
  if (!g.alive(n) || !isRemovableWhenUnused(g, n)) return false;
  if (g.userCount(n) != 0) return false;
  g.deleteNode(n);
  return true;
}

// Folds a single-predecessor block b1 into the block b2 holding the Jmp that
// reaches it. b2 survives and inherits b1's nodes and successors.
inline bool mergeBlocks(FirmGraph& g, NodeId b1) {
  if (!g.alive(b1) || g.kind(b1) != NodeKind::Block) return false;
  if (b1 == g.startBlock() || b1 == g.endBlock()) return false;

  std::optional<EdgeId> pred;
  for (EdgeId e : g.outEdges(b1)) {
    if (!isControlEdge(g.edge(e).kind)) continue;
    if (pred) return false;
    pred = e;
  }
  if (!pred || g.edge(*pred).kind != EdgeKind::Controlflow) return false;
  const NodeId jmp = g.edge(*pred).dst;
  if (g.kind(jmp) != NodeKind::Jmp) return false;
  auto b2 = g.findBlock(jmp);
  if (!b2 || *b2 == b1) return false;

  std::vector<EdgeId> members;
  for (EdgeId e : g.inEdges(b1)) {
    const Edge& ed = g.edge(e);
    if (ed.kind != EdgeKind::BlockEdge) continue;
    if (isPhi(g.kind(ed.src))) return false;
    members.push_back(e);
  }
  for (EdgeId e : members) g.setEdgeTarget(e, *b2);
  g.deleteNode(jmp);
  g.deleteNode(b1);
  return true;
}

using NodeRule = bool (*)(FirmGraph&, NodeId);

// Applies rule to every live node, repeating the sweep until one changes
// nothing. Returns whether any application fired.
inline bool applyExhaustively(FirmGraph& g, NodeRule rule) {
  bool any = false;
  for (;;) {
    bool fired = false;
    for (std::uint32_t i = 0; i < g.nodeBound(); ++i)
      if (g.alive(nodeId(i)) && rule(g, nodeId(i))) fired = true;
    if (!fired) return any;
    any = true;
  }
}

namespace detail {
inline bool foldAssocCommRule(FirmGraph& g, NodeId n) { return foldAssocComm(g, n).has_value(); }
}  // namespace detail

inline constexpr NodeRule kCleanupRules[] = {
    foldCond,        removeUnreachableBlock,    removeUnreachableNode, removeUnreachablePhiOperand,
    fixEdgePosition, simplifyTrivialPhi,        detail::foldAssocCommRule, removeUnusedNode,
    mergeBlocks,
};

inline bool cleanupRound(FirmGraph& g) {
  bool changed = false;
  for (NodeRule rule : kCleanupRules) changed |= applyExhaustively(g, rule);
  return changed;
}

struct OptimizeOptions {
  std::optional<std::size_t> maxRounds;
  // Called after every main-loop iteration with the 1-based round number.
  std::function<void(const FirmGraph&, std::size_t)> onRound;
};

struct OptimizeStats {
  std::size_t rounds = 0;
  std::size_t dataflowFolds = 0;
  bool changed = false;
};

inline OptimizeStats optimize(FirmGraph& g, const OptimizeOptions& opts = {}) {
  requireClean(g, "optimize (before)");
  OptimizeStats stats;
  for (;;) {
    if (opts.maxRounds && stats.rounds >= *opts.maxRounds)
      throw ContractError("optimize exceeded --max-rounds " + std::to_string(*opts.maxRounds));
    const FoldStats fs = foldDataflowFixpointStats(g);
    const bool cleaned = cleanupRound(g);
    ++stats.rounds;
    stats.dataflowFolds += fs.folds;
    if (fs.folds > 0 || cleaned) stats.changed = true;
    if (opts.onRound) opts.onRound(g, stats.rounds);
    if (!cleaned && fs.folds == 0) break;
  }
  requireClean(g, "optimize (after)");
  return stats;
}

}  // namespace firmfold
