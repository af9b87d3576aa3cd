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

#include <gtest/gtest.h>

#include "firmfold/cfg_fold.hpp"
#include "firmfold/graph_io.hpp"
#include "firmfold/interp.hpp"
#include "firmfold/isel.hpp"
#include "support/builders.hpp"

namespace firmfold {
namespace {

using namespace firmfold::testing;

TEST(NormalizeConstTest, MovesConstToPositionOne) {
  FirmGraph g;
  NodeId b = g.startBlock();
  NodeId x = param(g, b);
  NodeId two = constant(g, b, 2);
  NodeId add = binary(g, NodeKind::Add, two, x, b);
  EXPECT_TRUE(normalizeConst(g, add));
  auto ops = g.operandsOf(add);
  EXPECT_EQ(ops[0], (Use{x, 0}));
  EXPECT_EQ(ops[1], (Use{two, 1}));
  EXPECT_FALSE(normalizeConst(g, add));
}

TEST(NormalizeConstTest, Guards) {
  FirmGraph g;
  NodeId b = g.startBlock();
  NodeId x = param(g, b);
  NodeId both = binary(g, NodeKind::Add, constant(g, b, 2), constant(g, b, 3), b);
  NodeId sub = binary(g, NodeKind::Sub, constant(g, b, 2), x, b);
  EXPECT_FALSE(normalizeConst(g, both));
  EXPECT_FALSE(normalizeConst(g, sub));
  EXPECT_EQ(*g.attrs(g.operandsOf(both)[0].node).value, 2);
}

TEST(SelectImmediateTest, AddBecomesAddI) {
  FirmGraph g;
  NodeId b = g.startBlock();
  NodeId x = param(g, b);
  NodeId five = constant(g, b, 5);
  NodeId add = binary(g, NodeKind::Add, x, five, b);
  EXPECT_TRUE(selectImmediate(g, add));
  EXPECT_EQ(g.kind(add), NodeKind::TargetAddI);
  EXPECT_EQ(g.attrs(add).value, 5);
  ASSERT_EQ(g.operandsOf(add).size(), 1u);
  EXPECT_EQ(g.operandsOf(add)[0], (Use{x, 0}));
  EXPECT_EQ(g.userCount(five), 0u);
}

TEST(SelectImmediateTest, CmpKeepsRelationThroughSerialization) {
  FirmGraph g;
  NodeId b = g.startBlock();
  NodeId x = param(g, b);
  NodeId cmp = binary(g, NodeKind::Cmp, x, constant(g, b, 0), b, Relation::Less);
  ret(g, cmp, b);
  ASSERT_TRUE(selectImmediate(g, cmp));
  FirmGraph back = fromJson(toJson(g));
  EXPECT_EQ(back.kind(cmp), NodeKind::TargetCmpI);
  EXPECT_EQ(back.attrs(cmp).value, 0);
  EXPECT_EQ(back.attrs(cmp).relation, Relation::Less);
}

TEST(SelectImmediateTest, Guards) {
  FirmGraph g;
  NodeId b = g.startBlock();
  NodeId x = param(g, b);
  NodeId xy = binary(g, NodeKind::Add, x, param(g, b, 8), b);
  NodeId div = binary(g, NodeKind::Div, x, constant(g, b, 3), b);
  NodeId rev = binary(g, NodeKind::Sub, constant(g, b, 3), x, b);
  EXPECT_FALSE(selectImmediate(g, xy));
  EXPECT_FALSE(selectImmediate(g, div));
  EXPECT_FALSE(selectImmediate(g, rev));
}

TEST(SelectPlainTest, RetypesAndKeepsAttributes) {
  FirmGraph g;
  NodeId b = g.startBlock();
  NodeId x = param(g, b);
  NodeId y = param(g, b, 8);
  NodeId add = binary(g, NodeKind::Add, x, y, b);
  EXPECT_TRUE(selectPlain(g, x));
  EXPECT_EQ(g.kind(x), NodeKind::TargetLoad);
  EXPECT_EQ(g.attrs(x).isVolatile, true);
  EXPECT_TRUE(selectPlain(g, add));
  EXPECT_EQ(g.kind(add), NodeKind::TargetAdd);
  EXPECT_EQ(g.operandsOf(add).size(), 2u);
  EXPECT_FALSE(selectPlain(g, b));
  EXPECT_FALSE(selectPlain(g, add));
}

TEST(IselTest, FoldedOnePlusTwo) {
  auto t = onePlusTwo();
  optimize(t.g);
  runInstructionSelection(t.g);
  auto c = census(t.g);
  EXPECT_EQ(c[NodeKind::TargetConst], 1u);
  EXPECT_EQ(c[NodeKind::TargetReturn], 1u);
  EXPECT_EQ(t.g.nodeCount(), 6u);
  EXPECT_EQ(execute(t.g, {}).value, 3);
}

TEST(IselTest, SharedConstSurvives) {
  FirmGraph g;
  NodeId b = g.startBlock();
  NodeId x = param(g, b);
  NodeId five = constant(g, b, 5);
  NodeId add = binary(g, NodeKind::Add, x, five, b);
  NodeId sub = binary(g, NodeKind::Sub, five, add, b);
  ret(g, sub, b);
  const std::size_t before = g.nodeCount();
  runInstructionSelection(g);
  EXPECT_EQ(g.kind(add), NodeKind::TargetAddI);
  EXPECT_EQ(g.kind(sub), NodeKind::TargetSub);
  EXPECT_EQ(g.kind(five), NodeKind::TargetConst);
  EXPECT_EQ(g.nodeCount(), before);
}

TEST(IselTest, AbsorbedConstsAreRemoved) {
  FirmGraph g;
  NodeId b = g.startBlock();
  NodeId x = param(g, b);
  NodeId c = constant(g, b, 3);
  NodeId a = binary(g, NodeKind::Add, x, c, b);
  NodeId m = binary(g, NodeKind::Mul, c, a, b);
  ret(g, m, b);
  const std::size_t before = g.nodeCount();
  auto stats = runInstructionSelection(g);
  EXPECT_EQ(stats.normalized, 1u);
  EXPECT_EQ(stats.immediates, 2u);
  EXPECT_EQ(stats.constsRemoved, 1u);
  EXPECT_EQ(g.nodeCount(), before - 1);
  EXPECT_FALSE(g.alive(c));
  EXPECT_EQ(g.kind(m), NodeKind::TargetMulI);
}

TEST(IselTest, EmptyGraphUnchanged) {
  FirmGraph g;
  auto stats = runInstructionSelection(g);
  EXPECT_EQ(stats.plain, 0u);
  EXPECT_EQ(g.nodeCount(), 4u);
}

TEST(IselTest, TargetInputIsContractError) {
  auto t = onePlusTwo();
  runInstructionSelection(t.g);
  EXPECT_THROW(runInstructionSelection(t.g), ContractError);
}

TEST(IselTest, PreservesExecution) {
  auto d = dynamicDiamond(3);
  FirmGraph tr = d.g;
  runInstructionSelection(tr);
  EXPECT_TRUE(verify(tr).empty());
  for (std::int32_t x : {-100, 0, 2, 3, 4, 1000}) {
    const Inputs in{{d.x, x}};
    EXPECT_EQ(execute(tr, in).value, execute(d.g, in).value) << x;
  }
}

TEST(IselTest, EveryIrOperationIsSelected) {
  // one of each selectable kind, all fed by a parameter
  FirmGraph g;
  NodeId b = g.startBlock();
  NodeId x = param(g, b);
  NodeId y = param(g, b, 8);
  NodeId acc = unary(g, NodeKind::Not, x, b);
  for (NodeKind k : {NodeKind::Add, NodeKind::Sub, NodeKind::Mul, NodeKind::Div, NodeKind::Mod, NodeKind::And,
                     NodeKind::Or, NodeKind::Xor, NodeKind::Shl, NodeKind::Shr, NodeKind::Cmp})
    acc = binary(g, k, acc, y, b);
  NodeId store = g.addNode(NodeKind::Store, NodeAttrs::ofVolatile(true), b);
  g.addEdge(store, y, EdgeKind::Dataflow, 0);
  g.addEdge(store, acc, EdgeKind::Dataflow, 1);
  ret(g, acc, b);
  runInstructionSelection(g);
  for (NodeId n : g.liveNodes()) {
    const NodeKind k = g.kind(n);
    EXPECT_TRUE(isTarget(k) || k == NodeKind::Block || k == NodeKind::Start || k == NodeKind::End) << kindName(k);
  }
  EXPECT_EQ(g.attrs(store).isVolatile, true);
}

}  // namespace
}  // namespace firmfold
