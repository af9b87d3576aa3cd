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

// Structural integrity checks. Every finding is reported; nothing throws.
//
//   V1  every non-Block node has exactly one BlockEdge, leading to a Block
//   V2  Dataflow operand positions of each node are exactly {0..arity-1}
//   V3  operand count matches the node kind
//   V4  Phi arity and positions match its block's control predecessors
//   V5  successor shape of jumps: Cond has one True and one False edge,
//       Jmp/Return have one Controlflow edge, True/False only reach a Cond
//   V6  a block holds at most one control-transfer node
//   V7  control edges run Block -> control transfer, positions {0..preds-1}
//   V8  attributes present exactly on the kinds that define them
//   V9  one Start in the start block, one End in the end block, and the
//       start block has no control predecessors
//   V10 no edge touches a deleted node

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "firmfold/ir.hpp"

namespace firmfold {

struct Violation {
  std::string ruleId;
  std::vector<NodeId> nodes;
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

inline std::string formatViolation(const Violation& v) {
  std::ostringstream os;
  os << v.ruleId << '\t';
  for (std::size_t i = 0; i < v.nodes.size(); ++i) os << (i ? "," : "") << index(v.nodes[i]);
  os << '\t' << v.message;
  return os.str();
}

class VerificationError : public std::runtime_error {
 public:
  VerificationError(const std::string& stage, std::vector<Violation> findings)
      : std::runtime_error(stage + ": graph failed verification (" + std::to_string(findings.size()) +
                           " findings)"),
        findings_(std::move(findings)) {}
  const std::vector<Violation>& findings() const { return findings_; }

 private:
  std::vector<Violation> findings_;
};

namespace detail {

// True when the sorted positions are exactly 0..n-1.
inline bool isContiguous(std::vector<std::uint32_t> positions) {
  std::sort(positions.begin(), positions.end());
  for (std::size_t i = 0; i < positions.size(); ++i)
    if (positions[i] != i) return false;
  return true;
}

inline int ruleNumber(const std::string& id) { return std::stoi(id.substr(1)); }

}  // namespace detail

inline std::vector<Violation> verify(const FirmGraph& g) {
  std::vector<Violation> out;
  auto report = [&](const char* rule, std::vector<NodeId> nodes, std::string msg) {
    out.push_back({rule, std::move(nodes), std::move(msg)});
  };
  auto name = [&](NodeId n) {
    return std::string(kindName(g.kind(n))) + " " + std::to_string(index(n));
  };

  std::size_t starts = 0, ends = 0;

  for (NodeId n : g.liveNodes()) {
    const NodeKind k = g.kind(n);

    // V1
    std::vector<NodeId> blocks;
    for (EdgeId e : g.outEdges(n)) {
      const Edge& ed = g.edge(e);
      if (ed.kind == EdgeKind::BlockEdge) blocks.push_back(ed.dst);
    }
    if (k == NodeKind::Block) {
      if (!blocks.empty()) report("V1", {n}, "Block " + std::to_string(index(n)) + " has a BlockEdge");
    } else if (blocks.size() != 1) {
      report("V1", {n}, name(n) + " has " + std::to_string(blocks.size()) + " BlockEdges");
    } else if (g.alive(blocks[0]) && g.kind(blocks[0]) != NodeKind::Block) {
      report("V1", {n, blocks[0]}, name(n) + " is contained in non-Block " + name(blocks[0]));
    }

    // V2 / V3
    std::vector<std::uint32_t> positions;
    for (EdgeId e : g.outEdges(n)) {
      const Edge& ed = g.edge(e);
      if (ed.kind == EdgeKind::Dataflow) positions.push_back(ed.position);
    }
    if (!detail::isContiguous(positions))
      report("V2", {n}, name(n) + " has non-contiguous or duplicate operand positions");
    if (auto arity = fixedArity(k)) {
      if (positions.size() != *arity)
        report("V3", {n}, name(n) + " has " + std::to_string(positions.size()) + " operands, expected " +
                              std::to_string(*arity));
    } else if (positions.empty()) {
      report("V3", {n}, name(n) + " has no operands");
    }

    // V4
    if (isPhi(k) && blocks.size() == 1 && g.alive(blocks[0]) && g.kind(blocks[0]) == NodeKind::Block) {
      std::vector<std::uint32_t> preds;
      for (const ControlPred& p : g.controlPredsOf(blocks[0])) preds.push_back(p.position);
      std::vector<std::uint32_t> mine = positions;
      std::sort(mine.begin(), mine.end());
      if (mine != preds)
        report("V4", {n, blocks[0]},
               name(n) + " operand positions do not match the " + std::to_string(preds.size()) +
                   " control predecessor(s) of Block " + std::to_string(index(blocks[0])));
    }

    // V5
    std::size_t inTrue = 0, inFalse = 0, inFlow = 0;
    for (EdgeId e : g.inEdges(n)) {
      switch (g.edge(e).kind) {
        case EdgeKind::True: ++inTrue; break;
        case EdgeKind::False: ++inFalse; break;
        case EdgeKind::Controlflow: ++inFlow; break;
        default: break;
      }
    }
    if (k == NodeKind::Cond || k == NodeKind::TargetCond) {
      if (inTrue != 1 || inFalse != 1 || inFlow != 0)
        report("V5", {n}, name(n) + " needs exactly one True and one False successor edge");
    } else if (isControlTransfer(k)) {
      if (inFlow != 1 || inTrue != 0 || inFalse != 0)
        report("V5", {n}, name(n) + " needs exactly one Controlflow successor edge");
    } else if (inTrue + inFalse > 0) {
      report("V5", {n}, "True/False edge reaches non-Cond " + name(n));
    }

    if (k == NodeKind::Block) {
      // V6
      std::vector<NodeId> transfers;
      for (EdgeId e : g.inEdges(n)) {
        const Edge& ed = g.edge(e);
        if (ed.kind == EdgeKind::BlockEdge && g.alive(ed.src) && isControlTransfer(g.kind(ed.src)))
          transfers.push_back(ed.src);
      }
      if (transfers.size() > 1) {
        std::sort(transfers.begin(), transfers.end());
        transfers.insert(transfers.begin(), n);
        report("V6", transfers, "Block " + std::to_string(index(n)) + " contains several control transfers");
      }

      // V7
      std::vector<std::uint32_t> ctrl;
      for (EdgeId e : g.outEdges(n)) {
        const Edge& ed = g.edge(e);
        if (!isControlEdge(ed.kind)) continue;
        ctrl.push_back(ed.position);
        if (g.alive(ed.dst) && !isControlTransfer(g.kind(ed.dst)))
          report("V7", {n, ed.dst}, "control edge of Block " + std::to_string(index(n)) + " reaches " + name(ed.dst));
      }
      if (!detail::isContiguous(ctrl))
        report("V7", {n}, "control edge positions of Block " + std::to_string(index(n)) + " are not contiguous");
    } else {
      for (EdgeId e : g.outEdges(n))
        if (isControlEdge(g.edge(e).kind)) report("V7", {n}, "control edge leaves non-Block " + name(n));
    }

    // V8
    if (auto p = attrProblem(k, g.attrs(n)); !p.empty()) report("V8", {n}, name(n) + ": " + p);

    // V9
    if (k == NodeKind::Start) {
      ++starts;
      if (blocks.size() == 1 && blocks[0] != g.startBlock()) report("V9", {n}, "Start is not in the start block");
    }
    if (k == NodeKind::End) {
      ++ends;
      if (blocks.size() == 1 && blocks[0] != g.endBlock()) report("V9", {n}, "End is not in the end block");
    }
  }

  if (starts != 1) report("V9", {}, "graph has " + std::to_string(starts) + " Start nodes");
  if (ends != 1) report("V9", {}, "graph has " + std::to_string(ends) + " End nodes");
  if (!g.alive(g.startBlock()) || g.kind(g.startBlock()) != NodeKind::Block) {
    report("V9", {g.startBlock()}, "start anchor is not a live Block");
  } else if (g.controlPredCount(g.startBlock()) != 0) {
    report("V9", {g.startBlock()}, "start block has control predecessors");
  }
  if (!g.alive(g.endBlock()) || g.kind(g.endBlock()) != NodeKind::Block)
    report("V9", {g.endBlock()}, "end anchor is not a live Block");

  // V10
  for (EdgeId e : g.liveEdges()) {
    const Edge& ed = g.edge(e);
    if (!g.alive(ed.src) || !g.alive(ed.dst))
      report("V10", {ed.src, ed.dst},
             std::string(edgeKindName(ed.kind)) + " edge " + std::to_string(index(ed.src)) + " -> " +
                 std::to_string(index(ed.dst)) + " touches a deleted node");
  }

  std::stable_sort(out.begin(), out.end(), [](const Violation& a, const Violation& b) {
    return std::pair(detail::ruleNumber(a.ruleId), a.nodes) < std::pair(detail::ruleNumber(b.ruleId), b.nodes);
  });
  return out;
}

// Throws VerificationError when the graph is not clean.
inline void requireClean(const FirmGraph& g, const std::string& stage) {
  if (auto findings = verify(g); !findings.empty()) throw VerificationError(stage, std::move(findings));
}

}  // namespace firmfold
