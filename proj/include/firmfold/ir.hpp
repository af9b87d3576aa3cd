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

// Firm-style graph IR: a typed, attributed multigraph in which operations are
// nodes, operand references are Dataflow edges (user -> operand), control
// flow edges run from a target Block to the jump that reaches it, and every
// non-Block node hangs off its Block through a BlockEdge.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace firmfold {

enum class NodeId : std::uint32_t {};
enum class EdgeId : std::uint32_t {};

constexpr std::uint32_t index(NodeId id) { return static_cast<std::uint32_t>(id); }
constexpr std::uint32_t index(EdgeId id) { return static_cast<std::uint32_t>(id); }
constexpr NodeId nodeId(std::uint32_t i) { return static_cast<NodeId>(i); }

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Kinds
// ---------------------------------------------------------------------------

// TargetDiv / TargetMod have no immediate variant; they exist so every IR
// operation has a TR counterpart.
#define FIRMFOLD_NODE_KINDS(X)                                              \
  X(Block) X(Start) X(End) X(Return) X(Jmp) X(Cond) X(Phi)                  \
  X(Const) X(Not) X(Add) X(Sub) X(Mul) X(Div) X(Mod) X(And) X(Or) X(Xor)    \
  X(Shl) X(Shr) X(Cmp) X(Load) X(Store)                                     \
  X(TargetConst) X(TargetNot) X(TargetAdd) X(TargetAddI) X(TargetSub)       \
  X(TargetSubI) X(TargetMul) X(TargetMulI) X(TargetDiv) X(TargetMod)        \
  X(TargetAnd) X(TargetAndI) X(TargetOr) X(TargetOrI) X(TargetXor)          \
  X(TargetXorI) X(TargetShl) X(TargetShlI) X(TargetShr) X(TargetShrI)       \
  X(TargetCmp) X(TargetCmpI) X(TargetPhi) X(TargetJmp) X(TargetCond)        \
  X(TargetReturn) X(TargetLoad) X(TargetStore)

enum class NodeKind : std::uint8_t {
#define FIRMFOLD_ENUM(name) name,
  FIRMFOLD_NODE_KINDS(FIRMFOLD_ENUM)
#undef FIRMFOLD_ENUM
};

inline constexpr std::array kAllNodeKinds = {
#define FIRMFOLD_LIST(name) NodeKind::name,
    FIRMFOLD_NODE_KINDS(FIRMFOLD_LIST)
#undef FIRMFOLD_LIST
};

inline constexpr std::string_view kindName(NodeKind k) {
  switch (k) {
#define FIRMFOLD_NAME(name) \
  case NodeKind::name:      \
    return #name;
    FIRMFOLD_NODE_KINDS(FIRMFOLD_NAME)
#undef FIRMFOLD_NAME
  }
  return "?";
}

inline std::optional<NodeKind> parseKind(std::string_view s) {
  for (NodeKind k : kAllNodeKinds)
    if (kindName(k) == s) return k;
  return std::nullopt;
}

enum class Relation : std::uint8_t { Equal, NotEqual, Less, LessEqual, Greater, GreaterEqual };

inline constexpr std::array kAllRelations = {Relation::Equal,   Relation::NotEqual,
                                             Relation::Less,    Relation::LessEqual,
                                             Relation::Greater, Relation::GreaterEqual};

inline constexpr std::string_view relationName(Relation r) {
  switch (r) {
    case Relation::Equal: return "Equal";
    case Relation::NotEqual: return "NotEqual";
    case Relation::Less: return "Less";
    case Relation::LessEqual: return "LessEqual";
    case Relation::Greater: return "Greater";
    case Relation::GreaterEqual: return "GreaterEqual";
  }
  return "?";
}

inline std::optional<Relation> parseRelation(std::string_view s) {
  for (Relation r : kAllRelations)
    if (relationName(r) == s) return r;
  return std::nullopt;
}

enum class EdgeKind : std::uint8_t { Dataflow, Controlflow, True, False, BlockEdge };

inline constexpr std::string_view edgeKindName(EdgeKind k) {
  switch (k) {
    case EdgeKind::Dataflow: return "Dataflow";
    case EdgeKind::Controlflow: return "Controlflow";
    case EdgeKind::True: return "True";
    case EdgeKind::False: return "False";
    case EdgeKind::BlockEdge: return "BlockEdge";
  }
  return "?";
}

inline std::optional<EdgeKind> parseEdgeKind(std::string_view s) {
  for (EdgeKind k : {EdgeKind::Dataflow, EdgeKind::Controlflow, EdgeKind::True, EdgeKind::False,
                     EdgeKind::BlockEdge})
    if (edgeKindName(k) == s) return k;
  return std::nullopt;
}

constexpr bool isControlEdge(EdgeKind k) {
  return k == EdgeKind::Controlflow || k == EdgeKind::True || k == EdgeKind::False;
}

// IR binaries, Add..Cmp.
constexpr bool isBinary(NodeKind k) {
  switch (k) {
    case NodeKind::Add: case NodeKind::Sub: case NodeKind::Mul: case NodeKind::Div:
    case NodeKind::Mod: case NodeKind::And: case NodeKind::Or: case NodeKind::Xor:
    case NodeKind::Shl: case NodeKind::Shr: case NodeKind::Cmp:
      return true;
    default:
      return false;
  }
}

constexpr bool isCommutative(NodeKind k) {
  return k == NodeKind::Add || k == NodeKind::Mul || k == NodeKind::And || k == NodeKind::Or ||
         k == NodeKind::Xor;
}

constexpr bool isTarget(NodeKind k) {
  return static_cast<std::uint8_t>(k) >= static_cast<std::uint8_t>(NodeKind::TargetConst);
}

constexpr bool isControlTransfer(NodeKind k) {
  switch (k) {
    case NodeKind::Jmp: case NodeKind::Cond: case NodeKind::Return:
    case NodeKind::TargetJmp: case NodeKind::TargetCond: case NodeKind::TargetReturn:
      return true;
    default:
      return false;
  }
}

constexpr bool isTargetImmediate(NodeKind k) {
  switch (k) {
    case NodeKind::TargetAddI: case NodeKind::TargetSubI: case NodeKind::TargetMulI:
    case NodeKind::TargetAndI: case NodeKind::TargetOrI: case NodeKind::TargetXorI:
    case NodeKind::TargetShlI: case NodeKind::TargetShrI: case NodeKind::TargetCmpI:
      return true;
    default:
      return false;
  }
}

constexpr bool isTargetBinary(NodeKind k) {
  switch (k) {
    case NodeKind::TargetAdd: case NodeKind::TargetSub: case NodeKind::TargetMul:
    case NodeKind::TargetDiv: case NodeKind::TargetMod: case NodeKind::TargetAnd:
    case NodeKind::TargetOr: case NodeKind::TargetXor: case NodeKind::TargetShl:
    case NodeKind::TargetShr: case NodeKind::TargetCmp:
      return true;
    default:
      return false;
  }
}

constexpr bool isPhi(NodeKind k) { return k == NodeKind::Phi || k == NodeKind::TargetPhi; }
constexpr bool isConst(NodeKind k) { return k == NodeKind::Const || k == NodeKind::TargetConst; }

constexpr bool hasValueAttr(NodeKind k) { return isConst(k) || isTargetImmediate(k); }

constexpr bool hasRelationAttr(NodeKind k) {
  return k == NodeKind::Cmp || k == NodeKind::TargetCmp || k == NodeKind::TargetCmpI;
}

constexpr bool hasVolatileAttr(NodeKind k) {
  return k == NodeKind::Load || k == NodeKind::Store || k == NodeKind::TargetLoad ||
         k == NodeKind::TargetStore;
}

// Plain TR counterpart of an IR kind (Block/Start/End map to nullopt).
constexpr std::optional<NodeKind> targetKindOf(NodeKind k) {
  switch (k) {
    case NodeKind::Const: return NodeKind::TargetConst;
    case NodeKind::Not: return NodeKind::TargetNot;
    case NodeKind::Add: return NodeKind::TargetAdd;
    case NodeKind::Sub: return NodeKind::TargetSub;
    case NodeKind::Mul: return NodeKind::TargetMul;
    case NodeKind::Div: return NodeKind::TargetDiv;
    case NodeKind::Mod: return NodeKind::TargetMod;
    case NodeKind::And: return NodeKind::TargetAnd;
    case NodeKind::Or: return NodeKind::TargetOr;
    case NodeKind::Xor: return NodeKind::TargetXor;
    case NodeKind::Shl: return NodeKind::TargetShl;
    case NodeKind::Shr: return NodeKind::TargetShr;
    case NodeKind::Cmp: return NodeKind::TargetCmp;
    case NodeKind::Phi: return NodeKind::TargetPhi;
    case NodeKind::Jmp: return NodeKind::TargetJmp;
    case NodeKind::Cond: return NodeKind::TargetCond;
    case NodeKind::Return: return NodeKind::TargetReturn;
    case NodeKind::Load: return NodeKind::TargetLoad;
    case NodeKind::Store: return NodeKind::TargetStore;
    default: return std::nullopt;
  }
}

// Immediate TR variant of an IR binary, if the target has one.
constexpr std::optional<NodeKind> immediateKindOf(NodeKind k) {
  switch (k) {
    case NodeKind::Add: return NodeKind::TargetAddI;
    case NodeKind::Sub: return NodeKind::TargetSubI;
    case NodeKind::Mul: return NodeKind::TargetMulI;
    case NodeKind::And: return NodeKind::TargetAndI;
    case NodeKind::Or: return NodeKind::TargetOrI;
    case NodeKind::Xor: return NodeKind::TargetXorI;
    case NodeKind::Shl: return NodeKind::TargetShlI;
    case NodeKind::Shr: return NodeKind::TargetShrI;
    case NodeKind::Cmp: return NodeKind::TargetCmpI;
    default: return std::nullopt;
  }
}

// Exact Dataflow operand count; Phi is variadic (>= 1) and reported as nullopt.
constexpr std::optional<std::size_t> fixedArity(NodeKind k) {
  if (isPhi(k)) return std::nullopt;
  if (isBinary(k) || isTargetBinary(k)) return 2;
  if (isTargetImmediate(k)) return 1;
  switch (k) {
    case NodeKind::Not: case NodeKind::TargetNot:
    case NodeKind::Cond: case NodeKind::TargetCond:
    case NodeKind::Return: case NodeKind::TargetReturn:
    case NodeKind::Load: case NodeKind::TargetLoad:
      return 1;
    case NodeKind::Store: case NodeKind::TargetStore:
      return 2;
    default:
      return 0;
  }
}

// ---------------------------------------------------------------------------
// Attributes and edges
// ---------------------------------------------------------------------------

struct NodeAttrs {
  std::optional<std::int32_t> value;
  std::optional<Relation> relation;
  std::optional<bool> isVolatile;

  static NodeAttrs ofValue(std::int32_t v) { return {v, std::nullopt, std::nullopt}; }
  static NodeAttrs ofRelation(Relation r) { return {std::nullopt, r, std::nullopt}; }
  static NodeAttrs ofVolatile(bool v) { return {std::nullopt, std::nullopt, v}; }

  friend bool operator==(const NodeAttrs&, const NodeAttrs&) = default;
};

// Empty string when legal, otherwise a description of the first problem.
inline std::string attrProblem(NodeKind k, const NodeAttrs& a) {
  auto check = [&](bool present, bool wanted, std::string_view name) -> std::string {
    if (present && !wanted) return std::string(kindName(k)) + " must not carry '" + std::string(name) + "'";
    if (!present && wanted) return std::string(kindName(k)) + " requires '" + std::string(name) + "'";
    return {};
  };
  if (auto p = check(a.value.has_value(), hasValueAttr(k), "value"); !p.empty()) return p;
  if (auto p = check(a.relation.has_value(), hasRelationAttr(k), "relation"); !p.empty()) return p;
  return check(a.isVolatile.has_value(), hasVolatileAttr(k), "volatile");
}

struct Edge {
  NodeId src;
  NodeId dst;
  EdgeKind kind;
  std::uint32_t position = 0;  // unused for BlockEdge

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Use {
  NodeId node;
  std::uint32_t position;
  friend bool operator==(const Use&, const Use&) = default;
};

struct ControlPred {
  NodeId jump;
  std::uint32_t position;
  EdgeKind kind;
  friend bool operator==(const ControlPred&, const ControlPred&) = default;
};

// ---------------------------------------------------------------------------
// FirmGraph
// ---------------------------------------------------------------------------

class FirmGraph {
 public:
  // Bootstraps start block + Start and end block + End.
  FirmGraph() {
    start_block_ = allocate(NodeKind::Block, {});
    addNode(NodeKind::Start, {}, start_block_);
    end_block_ = allocate(NodeKind::Block, {});
    addNode(NodeKind::End, {}, end_block_);
  }

  // A graph with no nodes at all; used by the loader, which then restores
  // nodes with their original ids and sets the anchors.
  static FirmGraph bare() { return FirmGraph(BareTag{}); }

  // --- queries ------------------------------------------------------------

  bool alive(NodeId n) const { return index(n) < nodes_.size() && nodes_[index(n)].alive; }
  bool edgeAlive(EdgeId e) const { return index(e) < edges_.size() && edges_[index(e)].alive; }

  NodeKind kind(NodeId n) const { return live(n).kind; }
  const NodeAttrs& attrs(NodeId n) const { return live(n).attrs; }
  const Edge& edge(EdgeId e) const { return liveEdge(e).edge; }

  std::span<const EdgeId> outEdges(NodeId n) const { return live(n).out; }
  std::span<const EdgeId> inEdges(NodeId n) const { return live(n).in; }

  std::size_t nodeCount() const { return live_nodes_; }
  std::size_t edgeCount() const { return live_edges_; }

  // Exclusive upper bound on node / edge ids ever allocated.
  std::uint32_t nodeBound() const { return static_cast<std::uint32_t>(nodes_.size()); }
  std::uint32_t edgeBound() const { return static_cast<std::uint32_t>(edges_.size()); }

  NodeId startBlock() const { return start_block_; }
  NodeId endBlock() const { return end_block_; }

  std::vector<NodeId> liveNodes() const {
    std::vector<NodeId> out;
    out.reserve(live_nodes_);
    for (std::uint32_t i = 0; i < nodes_.size(); ++i)
      if (nodes_[i].alive) out.push_back(nodeId(i));
    return out;
  }

  std::vector<EdgeId> liveEdges() const {
    std::vector<EdgeId> out;
    out.reserve(live_edges_);
    for (std::uint32_t i = 0; i < edges_.size(); ++i)
      if (edges_[i].alive) out.push_back(static_cast<EdgeId>(i));
    return out;
  }

  // Dataflow users of n, ordered by position then user id.
  std::vector<Use> usersOf(NodeId n) const {
    std::vector<Use> out;
    for (EdgeId e : live(n).in) {
      const Edge& ed = edges_[index(e)].edge;
      if (ed.kind == EdgeKind::Dataflow) out.push_back({ed.src, ed.position});
    }
    sortUses(out);
    return out;
  }

  // Dataflow operands of n, ordered by position then operand id.
  std::vector<Use> operandsOf(NodeId n) const {
    std::vector<Use> out;
    for (EdgeId e : live(n).out) {
      const Edge& ed = edges_[index(e)].edge;
      if (ed.kind == EdgeKind::Dataflow) out.push_back({ed.dst, ed.position});
    }
    sortUses(out);
    return out;
  }

  std::size_t userCount(NodeId n) const {
    return static_cast<std::size_t>(std::count_if(live(n).in.begin(), live(n).in.end(), [&](EdgeId e) {
      return edges_[index(e)].edge.kind == EdgeKind::Dataflow;
    }));
  }

  std::optional<NodeId> findBlock(NodeId n) const {
    for (EdgeId e : live(n).out) {
      const Edge& ed = edges_[index(e)].edge;
      if (ed.kind == EdgeKind::BlockEdge) return ed.dst;
    }
    return std::nullopt;
  }

  NodeId blockOf(NodeId n) const {
    if (auto b = findBlock(n)) return *b;
    throw GraphError("node " + std::to_string(index(n)) + " has no block");
  }

  // Control predecessors of a block: the jumps reaching it, by position.
  std::vector<ControlPred> controlPredsOf(NodeId block) const {
    std::vector<ControlPred> out;
    for (EdgeId e : live(block).out) {
      const Edge& ed = edges_[index(e)].edge;
      if (isControlEdge(ed.kind)) out.push_back({ed.dst, ed.position, ed.kind});
    }
    std::sort(out.begin(), out.end(), [](const ControlPred& a, const ControlPred& b) {
      return std::pair(a.position, a.jump) < std::pair(b.position, b.jump);
    });
    return out;
  }

  std::size_t controlPredCount(NodeId block) const {
    return static_cast<std::size_t>(std::count_if(live(block).out.begin(), live(block).out.end(),
                                                  [&](EdgeId e) { return isControlEdge(edges_[index(e)].edge.kind); }));
  }

  // Nodes contained in a block, ascending id.
  std::vector<NodeId> blockMembers(NodeId block) const {
    std::vector<NodeId> out;
    for (EdgeId e : live(block).in) {
      const Edge& ed = edges_[index(e)].edge;
      if (ed.kind == EdgeKind::BlockEdge) out.push_back(ed.src);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  // --- construction -------------------------------------------------------

  NodeId addNode(NodeKind k, NodeAttrs a = {}, std::optional<NodeId> block = std::nullopt) {
    if (auto p = attrProblem(k, a); !p.empty()) throw GraphError("illegal attributes: " + p);
    if (block) requireBlock(*block);
    else if (k != NodeKind::Block) throw GraphError(std::string(kindName(k)) + " node requires a block");
    else return allocate(k, a);
    NodeId n = allocate(k, a);
    link(n, *block, EdgeKind::BlockEdge, 0);
    return n;
  }

  NodeId addBlock() { return allocate(NodeKind::Block, {}); }

  EdgeId addEdge(NodeId src, NodeId dst, EdgeKind k, std::uint32_t position = 0) {
    live(src);
    live(dst);
    if (k == EdgeKind::BlockEdge) {
      requireBlock(dst);
      if (findBlock(src)) throw GraphError("node " + std::to_string(index(src)) + " already has a block");
    }
    return link(src, dst, k, k == EdgeKind::BlockEdge ? 0 : position);
  }

  // Fault-injection hook: adds an edge without endpoint liveness checks, so a
  // verifier can be shown a dangling edge. Ids must have been allocated.
  EdgeId addEdgeUnchecked(NodeId src, NodeId dst, EdgeKind k, std::uint32_t position = 0) {
    if (index(src) >= nodes_.size() || index(dst) >= nodes_.size()) throw GraphError("unallocated node id");
    return link(src, dst, k, position);
  }

  // Loader entry point: no attribute legality check, sparse ids allowed.
  void restoreNode(NodeId id, NodeKind k, NodeAttrs a) {
    if (index(id) < nodes_.size() && nodes_[index(id)].alive)
      throw GraphError("duplicate node id " + std::to_string(index(id)));
    if (index(id) >= nodes_.size()) nodes_.resize(index(id) + 1);
    NodeRec& r = nodes_[index(id)];
    r = NodeRec{k, std::move(a), true, {}, {}};
    ++live_nodes_;
  }

  void setAnchors(NodeId startBlock, NodeId endBlock) {
    start_block_ = startBlock;
    end_block_ = endBlock;
  }

  // --- attribute updates --------------------------------------------------

  void setValue(NodeId n, std::int32_t v) {
    if (!hasValueAttr(kind(n))) throw GraphError(std::string(kindName(kind(n))) + " has no value attribute");
    live(n).attrs.value = v;
  }
  void setRelation(NodeId n, Relation r) {
    if (!hasRelationAttr(kind(n))) throw GraphError(std::string(kindName(kind(n))) + " has no relation attribute");
    live(n).attrs.relation = r;
  }
  void setVolatile(NodeId n, bool v) {
    if (!hasVolatileAttr(kind(n))) throw GraphError(std::string(kindName(kind(n))) + " has no volatile attribute");
    live(n).attrs.isVolatile = v;
  }

  // --- mutation -----------------------------------------------------------

  // Keeps identity and every incident edge. Attributes meaningful for both
  // kinds carry over; the rest are dropped.
  void retypeNode(NodeId n, NodeKind k) {
    NodeRec& r = live(n);
    if ((r.kind == NodeKind::Block) != (k == NodeKind::Block)) throw GraphError("cannot retype to or from Block");
    r.kind = k;
    if (!hasValueAttr(k)) r.attrs.value.reset();
    if (!hasRelationAttr(k)) r.attrs.relation.reset();
    if (!hasVolatileAttr(k)) r.attrs.isVolatile.reset();
  }

  void retypeEdge(EdgeId e, EdgeKind k) {
    EdgeRec& r = liveEdge(e);
    if (r.edge.kind == k) return;
    if (!isControlEdge(r.edge.kind) || !isControlEdge(k))
      throw GraphError(std::string("cannot retype ") + std::string(edgeKindName(r.edge.kind)) + " edge to " +
                       std::string(edgeKindName(k)));
    r.edge.kind = k;
  }

  void setPosition(EdgeId e, std::uint32_t position) {
    EdgeRec& r = liveEdge(e);
    if (r.edge.kind == EdgeKind::BlockEdge) throw GraphError("BlockEdge has no position");
    r.edge.position = position;
  }

  // Moves the dst end of an edge.
  void setEdgeTarget(EdgeId e, NodeId dst) {
    EdgeRec& r = liveEdge(e);
    live(dst);
    if (r.edge.kind == EdgeKind::BlockEdge) requireBlock(dst);
    if (r.edge.dst == dst) return;
    detachIn(e);
    r.edge.dst = dst;
    attachIn(e);
  }

  void deleteEdge(EdgeId e) {
    EdgeRec& r = liveEdge(e);
    detachOut(e);
    detachIn(e);
    r.alive = false;
    --live_edges_;
  }

  void deleteNode(NodeId n) {
    NodeRec& r = live(n);
    if (r.kind == NodeKind::Start || r.kind == NodeKind::End)
      throw GraphError("cannot delete " + std::string(kindName(r.kind)) + " node");
    while (!nodes_[index(n)].out.empty()) deleteEdge(nodes_[index(n)].out.back());
    while (!nodes_[index(n)].in.empty()) deleteEdge(nodes_[index(n)].in.back());
    nodes_[index(n)].alive = false;
    --live_nodes_;
  }

  // Every Dataflow edge into `from` now points at `to`; positions unchanged.
  std::size_t redirectUsers(NodeId from, NodeId to) {
    live(from);
    live(to);
    if (from == to) throw GraphError("redirectUsers: from == to");
    std::vector<EdgeId> moving;
    for (EdgeId e : nodes_[index(from)].in)
      if (edges_[index(e)].edge.kind == EdgeKind::Dataflow) moving.push_back(e);
    for (EdgeId e : moving) setEdgeTarget(e, to);
    return moving.size();
  }

 private:
  struct BareTag {};
  explicit FirmGraph(BareTag) : start_block_{}, end_block_{} {}

  struct NodeRec {
    NodeKind kind = NodeKind::Block;
    NodeAttrs attrs;
    bool alive = false;
    std::vector<EdgeId> out;
    std::vector<EdgeId> in;
  };

  // Slots record where the edge sits in its endpoints' adjacency vectors, so
  // removal is a swap-with-last.
  struct EdgeRec {
    Edge edge;
    std::uint32_t srcSlot = 0;
    std::uint32_t dstSlot = 0;
    bool alive = false;
  };

  static void sortUses(std::vector<Use>& v) {
    std::sort(v.begin(), v.end(), [](const Use& a, const Use& b) {
      return std::pair(a.position, a.node) < std::pair(b.position, b.node);
    });
  }

  NodeRec& live(NodeId n) {
    if (!alive(n)) throw GraphError("unknown node id " + std::to_string(index(n)));
    return nodes_[index(n)];
  }
  const NodeRec& live(NodeId n) const {
    if (!alive(n)) throw GraphError("unknown node id " + std::to_string(index(n)));
    return nodes_[index(n)];
  }
  EdgeRec& liveEdge(EdgeId e) {
    if (!edgeAlive(e)) throw GraphError("unknown edge id " + std::to_string(index(e)));
    return edges_[index(e)];
  }
  const EdgeRec& liveEdge(EdgeId e) const {
    if (!edgeAlive(e)) throw GraphError("unknown edge id " + std::to_string(index(e)));
    return edges_[index(e)];
  }

  void requireBlock(NodeId b) const {
    if (!alive(b) || nodes_[index(b)].kind != NodeKind::Block)
      throw GraphError("unknown block id " + std::to_string(index(b)));
  }

  NodeId allocate(NodeKind k, NodeAttrs a) {
    nodes_.push_back(NodeRec{k, std::move(a), true, {}, {}});
    ++live_nodes_;
    return nodeId(static_cast<std::uint32_t>(nodes_.size() - 1));
  }

  EdgeId link(NodeId src, NodeId dst, EdgeKind k, std::uint32_t position) {
    EdgeId e = static_cast<EdgeId>(edges_.size());
    edges_.push_back(EdgeRec{Edge{src, dst, k, position}, 0, 0, true});
    ++live_edges_;
    attachOut(e);
    attachIn(e);
    return e;
  }

  void attachOut(EdgeId e) {
    EdgeRec& r = edges_[index(e)];
    auto& v = nodes_[index(r.edge.src)].out;
    r.srcSlot = static_cast<std::uint32_t>(v.size());
    v.push_back(e);
  }
  void attachIn(EdgeId e) {
    EdgeRec& r = edges_[index(e)];
    auto& v = nodes_[index(r.edge.dst)].in;
    r.dstSlot = static_cast<std::uint32_t>(v.size());
    v.push_back(e);
  }
  void detachOut(EdgeId e) {
    EdgeRec& r = edges_[index(e)];
    auto& v = nodes_[index(r.edge.src)].out;
    EdgeId last = v.back();
    v[r.srcSlot] = last;
    edges_[index(last)].srcSlot = r.srcSlot;
    v.pop_back();
  }
  void detachIn(EdgeId e) {
    EdgeRec& r = edges_[index(e)];
    auto& v = nodes_[index(r.edge.dst)].in;
    EdgeId last = v.back();
    v[r.dstSlot] = last;
    edges_[index(last)].dstSlot = r.dstSlot;
    v.pop_back();
  }

  std::vector<NodeRec> nodes_;
  std::vector<EdgeRec> edges_;
  std::size_t live_nodes_ = 0;
  std::size_t live_edges_ = 0;
  NodeId start_block_;
  NodeId end_block_;
};

}  // namespace firmfold
