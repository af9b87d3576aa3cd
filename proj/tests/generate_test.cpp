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

#include <cmath>
#include <random>

#include "firmfold/bench.hpp"
#include "firmfold/cfg_fold.hpp"
#include "firmfold/generate.hpp"
#include "firmfold/graph_io.hpp"
#include "firmfold/interp.hpp"
#include "firmfold/verifier.hpp"
#include "support/builders.hpp"

namespace firmfold {
namespace {

using namespace firmfold::testing;

Inputs randomInputs(const FirmGraph& g, std::mt19937& rng) {
  Inputs in;
  for (NodeId p : parameters(g)) in[p] = static_cast<std::int32_t>(rng());
  return in;
}

TEST(GenerateTest, SameSeedSameGraph) {
  GenSpec spec;
  EXPECT_EQ(toJson(generate(42, spec)), toJson(generate(42, spec)));
  EXPECT_NE(toJson(generate(42, spec)), toJson(generate(43, spec)));
}

TEST(GenerateTest, OutputIsVerifyClean) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    GenSpec spec;
    spec.blocks = 1 + static_cast<std::uint32_t>(seed % 30);
    spec.opsPerBlock = static_cast<std::uint32_t>(seed % 9);
    spec.loopCount = static_cast<std::uint32_t>(seed % 4);
    spec.inputCount = static_cast<std::uint32_t>(seed % 3);
    spec.constRatio = static_cast<double>(seed % 11) / 10.0;
    const FirmGraph g = generate(seed, spec);
    auto found = verify(g);
    EXPECT_TRUE(found.empty()) << "seed " << seed << ": " << (found.empty() ? "" : formatViolation(found[0]));
  }
}

TEST(GenerateTest, HasTheAdvertisedShape) {
  GenSpec spec;
  spec.blocks = 40;
  spec.loopCount = 3;
  spec.inputCount = 3;
  std::size_t conds = 0, phis = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const FirmGraph g = generate(seed, spec);
    EXPECT_EQ(countKind(g, NodeKind::Return), 1u);
    EXPECT_EQ(parameters(g).size(), 3u);
    EXPECT_EQ(countKind(g, NodeKind::Block), 41u);
    EXPECT_EQ(countKind(g, NodeKind::Store), 0u);
    conds += countKind(g, NodeKind::Cond);
    phis += countKind(g, NodeKind::Phi);
  }
  EXPECT_GT(conds, 20u);
  EXPECT_GT(phis, 20u);
}

TEST(GenerateTest, ProgramsTerminate) {
  std::mt19937 rng(1);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    GenSpec spec;
    spec.blocks = 30;
    spec.loopCount = 4;
    const FirmGraph g = generate(seed, spec);
    const ExecResult r = execute(g, randomInputs(g, rng));
    EXPECT_NE(r.trapped, Trap::StepLimit) << seed;
  }
}

TEST(GenerateTest, AllConstantProgramFoldsToOneConst) {
  GenSpec spec;
  spec.blocks = 12;
  spec.constRatio = 1.0;
  spec.loopCount = 0;
  std::size_t straight = 0;
  std::mt19937 rng(11);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    FirmGraph g = generate(seed, spec);
    const ExecResult before = execute(g, randomInputs(g, rng));
    optimize(g);
    EXPECT_EQ(countKind(g, NodeKind::Block), 2u) << seed;
    EXPECT_EQ(countKind(g, NodeKind::Cond), 0u) << seed;
    if (before.trapped) {
      // a division by a constant zero is never folded away
      EXPECT_GT(countKind(g, NodeKind::Div) + countKind(g, NodeKind::Mod), 0u) << seed;
      continue;
    }
    ++straight;
    ASSERT_EQ(countKind(g, NodeKind::Return), 1u);
    NodeId ret = NodeId{};
    for (NodeId n : g.liveNodes())
      if (g.kind(n) == NodeKind::Return) ret = n;
    const NodeId value = g.operandsOf(ret)[0].node;
    EXPECT_EQ(g.kind(value), NodeKind::Const) << seed;
    EXPECT_EQ(g.attrs(value).value, before.value);
    // start block: Start, Return, the Const, and the unused parameter Loads
    EXPECT_EQ(g.blockMembers(g.startBlock()).size(), 3u + 2u * spec.inputCount) << seed;
  }
  EXPECT_GT(straight, 20u);
}

TEST(GenerateTest, RejectsUnsatisfiableSpecs) {
  GenSpec spec;
  spec.blocks = 0;
  EXPECT_THROW(generate(1, spec), GenerateError);
  spec.blocks = 3;
  spec.constRatio = 1.5;
  EXPECT_THROW(generate(1, spec), GenerateError);
  spec.constRatio = -0.1;
  EXPECT_THROW(generate(1, spec), GenerateError);
}

TEST(GenerateTest, SingleBlockProgram) {
  GenSpec spec;
  spec.blocks = 1;
  const FirmGraph g = generate(5, spec);
  EXPECT_TRUE(verify(g).empty());
  EXPECT_EQ(countKind(g, NodeKind::Block), 2u);
}

TEST(GenerateTest, SparseShapeMatchesLargeCase) {
  // 27993 nodes and 55981 edges
  for (std::uint64_t seed : {0u, 1u, 2u}) {
    const FirmGraph g = generate(seed, sparseSpec(27993));
    EXPECT_NEAR(static_cast<double>(g.nodeCount()), 27993.0, 27993.0 * 0.05);
    EXPECT_NEAR(static_cast<double>(g.edgeCount()), 55981.0, 55981.0 * 0.05);
    EXPECT_TRUE(verify(g).empty());
  }
}

TEST(GenerateTest, BenchShapeScalesLinearly) {
  const FirmGraph small = generate(3, benchSpec(10000));
  const FirmGraph large = generate(3, benchSpec(100000));
  const double ratio = static_cast<double>(large.nodeCount()) / static_cast<double>(small.nodeCount());
  EXPECT_NEAR(ratio, 10.0, 1.0);
  EXPECT_NEAR(static_cast<double>(small.nodeCount()), 10000.0, 1500.0);
}

}  // namespace
}  // namespace firmfold
