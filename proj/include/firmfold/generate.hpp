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

// Seeded generator of structured, verify-clean programs: a chain of regions
// (straight-line blocks, if/else diamonds with join Phis, bounded counting
// loops) over a pool of dominating values, ending in a single Return.
//
// Parameters are volatile Loads from constant addresses in the start block.
// Loops count from 0 to a constant below 5, so every program terminates.
// Draws use raw mt19937_64 output rather than <random> distributions, whose
// results differ between standard libraries.

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "firmfold/ir.hpp"

namespace firmfold {

struct GenSpec {
  std::uint32_t blocks = 10;  // blocks to create, excluding the end block
  std::uint32_t opsPerBlock = 6;
  double constRatio = 0.3;  // probability an operand is a constant
  std::uint32_t loopCount = 1;
  std::uint32_t inputCount = 2;
};

class GenerateError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

class Generator {
 public:
  Generator(std::uint64_t seed, const GenSpec& spec) : rng_(seed), spec_(spec) {}

  FirmGraph run() {
    cur_ = g_.startBlock();
    blocks_ = 1;
    for (std::uint32_t i = 0; i < spec_.inputCount; ++i) {
      NodeId addr = g_.addNode(NodeKind::Const, NodeAttrs::ofValue(static_cast<std::int32_t>(0x1000 + 4 * i)), cur_);
      NodeId load = g_.addNode(NodeKind::Load, NodeAttrs::ofVolatile(true), cur_);
      g_.addEdge(load, addr, EdgeKind::Dataflow, 0);
      pool_.push_back(load);
    }
    fill(cur_, spec_.opsPerBlock);

    std::uint32_t loopsLeft = spec_.loopCount;
    while (blocks_ < spec_.blocks) {
      const std::uint32_t remaining = spec_.blocks - blocks_;
      if (loopsLeft > 0 && remaining >= 3 && chance(0.35)) {
        --loopsLeft;
        loop();
      } else if (remaining >= 3 && chance(0.5)) {
        diamond();
      } else {
        straight();
      }
    }
    finish();
    return std::move(g_);
  }

 private:
  std::uint64_t draw(std::uint64_t n) { return rng_() % n; }
  bool chance(double p) { return static_cast<double>(rng_() >> 11) * 0x1.0p-53 < p; }

  NodeId newBlock() {
    ++blocks_;
    consts_.clear();
    return g_.addBlock();
  }

  NodeId jump(NodeId from, NodeId to, std::uint32_t position) {
    NodeId j = g_.addNode(NodeKind::Jmp, {}, from);
    g_.addEdge(to, j, EdgeKind::Controlflow, position);
    return j;
  }

  NodeId constant(NodeId block) {
    // Constants are shared within a block to keep edge density realistic.
    if (!consts_.empty() && chance(0.6)) return consts_[draw(consts_.size())];
    std::int32_t v;
    if (chance(0.85)) v = static_cast<std::int32_t>(draw(17)) - 8;
    else v = static_cast<std::int32_t>(static_cast<std::uint32_t>(rng_()));
    NodeId c = g_.addNode(NodeKind::Const, NodeAttrs::ofValue(v), block);
    consts_.push_back(c);
    return c;
  }

  NodeId operand(NodeId block) {
    if (pool_.empty() || chance(spec_.constRatio)) return constant(block);
    // Bias towards recent values so chains form.
    const std::size_t window = std::min<std::size_t>(pool_.size(), 8);
    if (chance(0.7)) return pool_[pool_.size() - 1 - draw(window)];
    return pool_[draw(pool_.size())];
  }

  NodeId binary(NodeId block, NodeKind k, NodeId a, NodeId b) {
    NodeAttrs attrs;
    if (k == NodeKind::Cmp) attrs.relation = kAllRelations[draw(kAllRelations.size())];
    NodeId n = g_.addNode(k, attrs, block);
    g_.addEdge(n, a, EdgeKind::Dataflow, 0);
    g_.addEdge(n, b, EdgeKind::Dataflow, 1);
    return n;
  }

  void fill(NodeId block, std::uint32_t ops) {
    static constexpr NodeKind kOps[] = {NodeKind::Add, NodeKind::Sub, NodeKind::Mul, NodeKind::And,
                                        NodeKind::Or,  NodeKind::Xor, NodeKind::Shl, NodeKind::Shr,
                                        NodeKind::Cmp, NodeKind::Add, NodeKind::Mul, NodeKind::Xor};
    for (std::uint32_t i = 0; i < ops; ++i) {
      const std::uint64_t r = draw(100);
      NodeId n;
      if (r < 8) {
        n = g_.addNode(NodeKind::Not, {}, block);
        g_.addEdge(n, operand(block), EdgeKind::Dataflow, 0);
      } else if (r < 11) {
        NodeId a = operand(block);
        n = binary(block, r < 10 ? NodeKind::Div : NodeKind::Mod, a, operand(block));
      } else {
        NodeKind k = kOps[draw(std::size(kOps))];
        NodeId a = operand(block);
        n = binary(block, k, a, operand(block));
      }
      pool_.push_back(n);
    }
  }

  void straight() {
    NodeId b = newBlock();
    jump(cur_, b, 0);
    cur_ = b;
    // Occasional empty block, the kind a front end leaves behind.
    fill(b, chance(0.2) ? 0 : spec_.opsPerBlock);
  }

  void diamond() {
    NodeId a = operand(cur_);
    NodeId cmp = binary(cur_, NodeKind::Cmp, a, operand(cur_));
    NodeId cond = g_.addNode(NodeKind::Cond, {}, cur_);
    g_.addEdge(cond, cmp, EdgeKind::Dataflow, 0);

    const std::size_t base = pool_.size();
    NodeId t = newBlock();
    g_.addEdge(t, cond, EdgeKind::True, 0);
    fill(t, spec_.opsPerBlock);
    NodeId tv = armValue(t, base);
    pool_.resize(base);

    NodeId f = newBlock();
    g_.addEdge(f, cond, EdgeKind::False, 0);
    fill(f, spec_.opsPerBlock / 2);
    NodeId fv = armValue(f, base);
    pool_.resize(base);

    NodeId join = newBlock();
    jump(t, join, 0);
    jump(f, join, 1);
    NodeId phi = g_.addNode(NodeKind::Phi, {}, join);
    g_.addEdge(phi, tv, EdgeKind::Dataflow, 0);
    g_.addEdge(phi, fv, EdgeKind::Dataflow, 1);
    pool_.push_back(phi);
    cur_ = join;
    fill(join, spec_.opsPerBlock / 2);
  }

  // A value available at the end of an arm: one of its own results if any.
  NodeId armValue(NodeId arm, std::size_t base) {
    if (pool_.size() > base && chance(0.8)) return pool_[base + draw(pool_.size() - base)];
    return operand(arm);
  }

  void loop() {
    NodeId pre = cur_;
    NodeId zero = g_.addNode(NodeKind::Const, NodeAttrs::ofValue(0), pre);
    NodeId init = operand(pre);

    NodeId header = newBlock();
    jump(pre, header, 0);
    NodeId counter = g_.addNode(NodeKind::Phi, {}, header);
    NodeId acc = g_.addNode(NodeKind::Phi, {}, header);
    NodeId bound = g_.addNode(NodeKind::Const, NodeAttrs::ofValue(static_cast<std::int32_t>(1 + draw(4))), header);
    NodeId cmp = g_.addNode(NodeKind::Cmp, NodeAttrs::ofRelation(Relation::Less), header);
    g_.addEdge(cmp, counter, EdgeKind::Dataflow, 0);
    g_.addEdge(cmp, bound, EdgeKind::Dataflow, 1);
    NodeId cond = g_.addNode(NodeKind::Cond, {}, header);
    g_.addEdge(cond, cmp, EdgeKind::Dataflow, 0);

    const std::size_t base = pool_.size();
    pool_.push_back(counter);
    pool_.push_back(acc);
    NodeId body = newBlock();
    g_.addEdge(body, cond, EdgeKind::True, 0);
    fill(body, spec_.opsPerBlock);
    static constexpr NodeKind kAccOps[] = {NodeKind::Add, NodeKind::Xor, NodeKind::Mul, NodeKind::Sub};
    NodeId next = binary(body, kAccOps[draw(std::size(kAccOps))], acc, operand(body));
    NodeId one = g_.addNode(NodeKind::Const, NodeAttrs::ofValue(1), body);
    NodeId step = binary(body, NodeKind::Add, counter, one);
    jump(body, header, 1);

    g_.addEdge(counter, zero, EdgeKind::Dataflow, 0);
    g_.addEdge(counter, step, EdgeKind::Dataflow, 1);
    g_.addEdge(acc, init, EdgeKind::Dataflow, 0);
    g_.addEdge(acc, next, EdgeKind::Dataflow, 1);

    pool_.resize(base);
    pool_.push_back(counter);
    pool_.push_back(acc);
    NodeId exit = newBlock();
    g_.addEdge(exit, cond, EdgeKind::False, 0);
    cur_ = exit;
    fill(exit, spec_.opsPerBlock / 2);
  }

  void finish() {
    // Return a mix of recent values so most of the program stays live.
    NodeId result = operand(cur_);
    const std::size_t mix = std::min<std::size_t>(pool_.size(), 3);
    for (std::size_t i = 0; i < mix; ++i)
      result = binary(cur_, NodeKind::Xor, result, pool_[pool_.size() - 1 - i]);
    NodeId ret = g_.addNode(NodeKind::Return, {}, cur_);
    g_.addEdge(ret, result, EdgeKind::Dataflow, 0);
    g_.addEdge(g_.endBlock(), ret, EdgeKind::Controlflow, 0);
  }

  std::mt19937_64 rng_;
  GenSpec spec_;
  FirmGraph g_;
  NodeId cur_{};
  std::uint32_t blocks_ = 0;
  std::vector<NodeId> pool_;
  std::vector<NodeId> consts_;
};

}  // namespace detail

inline FirmGraph generate(std::uint64_t seed, const GenSpec& spec) {
  if (spec.blocks == 0) throw GenerateError("generate: at least one block is required");
  if (!(spec.constRatio >= 0.0 && spec.constRatio <= 1.0)) throw GenerateError("generate: constRatio must lie in [0, 1]");
  return detail::Generator(seed, spec).run();
}

}  // namespace firmfold
