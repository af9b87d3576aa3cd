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

// Instruction selection by retyping: IR nodes become their TR counterparts in
// place. Constants at operand position 1 of an immediate-capable binary are
// absorbed into the instruction's value attribute.

#include <string>

#include "firmfold/cfg_fold.hpp"
#include "firmfold/const_fold.hpp"
#include "firmfold/ir.hpp"
#include "firmfold/verifier.hpp"

namespace firmfold {

// Commutative op with Const at 0 and non-Const at 1: swap the operands.
inline bool normalizeConst(FirmGraph& g, NodeId n) {
  if (!g.alive(n) || !isCommutative(g.kind(n))) return false;
  auto e0 = detail::operandEdge(g, n, 0);
  auto e1 = detail::operandEdge(g, n, 1);
  if (!e0 || !e1) return false;
  if (!detail::isIrConst(g, g.edge(*e0).dst) || detail::isIrConst(g, g.edge(*e1).dst)) return false;
  g.setPosition(*e0, 1);
  g.setPosition(*e1, 0);
  return true;
}

inline bool selectImmediate(FirmGraph& g, NodeId n) {
  if (!g.alive(n)) return false;
  auto target = immediateKindOf(g.kind(n));
  if (!target) return false;
  auto e1 = detail::operandEdge(g, n, 1);
  if (!e1 || !detail::isIrConst(g, g.edge(*e1).dst)) return false;
  const std::int32_t value = *g.attrs(g.edge(*e1).dst).value;
  g.retypeNode(n, *target);
  g.setValue(n, value);
  g.deleteEdge(*e1);
  return true;
}

inline bool selectPlain(FirmGraph& g, NodeId n) {
  if (!g.alive(n) || isTarget(g.kind(n))) return false;
  auto target = targetKindOf(g.kind(n));
  if (!target) return false;
  g.retypeNode(n, *target);
  return true;
}

namespace detail {

inline bool removeUnusedConst(FirmGraph& g, NodeId n) {
  return g.alive(n) && g.kind(n) == NodeKind::Const && removeUnusedNode(g, n);
}

}  // namespace detail

struct IselStats {
  std::size_t normalized = 0;
  std::size_t immediates = 0;
  std::size_t constsRemoved = 0;
  std::size_t plain = 0;
};

inline IselStats runInstructionSelection(FirmGraph& g) {
  requireClean(g, "isel (before)");
  for (NodeId n : g.liveNodes())
    if (isTarget(g.kind(n)))
      throw ContractError("isel: input already contains target node " + std::to_string(index(n)) + " (" +
                          std::string(kindName(g.kind(n))) + ")");

  IselStats stats;
  auto count = [&](NodeRule rule) {
    std::size_t c = 0;
    const std::uint32_t bound = g.nodeBound();
    for (std::uint32_t i = 0; i < bound; ++i)
      if (g.alive(nodeId(i)) && rule(g, nodeId(i))) ++c;
    return c;
  };
  stats.normalized = count(normalizeConst);
  stats.immediates = count(selectImmediate);
  while (std::size_t c = count(detail::removeUnusedConst)) stats.constsRemoved += c;
  stats.plain = count(selectPlain);

  for (NodeId n : g.liveNodes()) {
    const NodeKind k = g.kind(n);
    if (!isTarget(k) && k != NodeKind::Block && k != NodeKind::Start && k != NodeKind::End)
      throw ContractError("isel: IR node " + std::to_string(index(n)) + " (" + std::string(kindName(k)) +
                          ") survived selection");
  }
  requireClean(g, "isel (after)");
  return stats;
}

}  // namespace firmfold
