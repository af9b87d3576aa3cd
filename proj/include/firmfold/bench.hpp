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

// Benchmark harness: generate a graph of roughly the requested node count,
// then time optimize and instruction selection separately. I/O is outside
// the timed region; each pass reports the best of `repeats` runs on a fresh
// copy.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "firmfold/cfg_fold.hpp"
#include "firmfold/generate.hpp"
#include "firmfold/isel.hpp"

namespace firmfold {

struct BenchRow {
  std::size_t size = 0;  // requested node count
  std::size_t nodesIn = 0;
  std::size_t edgesIn = 0;
  double foldMs = 0;
  double iselMs = 0;
  std::size_t nodesOut = 0;
};

// Shape used for benchmark graphs, about 2.55 edges per node.
inline GenSpec benchSpec(std::size_t targetNodes) {
  GenSpec spec;
  spec.opsPerBlock = 40;
  spec.constRatio = 0.2;
  spec.inputCount = 4;
  // ~37 nodes per block on average for this shape.
  spec.blocks = static_cast<std::uint32_t>(std::max<std::size_t>(1, targetNodes / 37));
  spec.loopCount = std::max<std::uint32_t>(1, spec.blocks / 20);
  return spec;
}

// Sparser shape, about 2 edges per node: short blocks, half the operands
// constant.
inline GenSpec sparseSpec(std::size_t targetNodes) {
  GenSpec spec;
  spec.opsPerBlock = 4;
  spec.constRatio = 0.5;
  spec.inputCount = 4;
  // ~7.2 nodes per block for this shape.
  spec.blocks = static_cast<std::uint32_t>(std::max<std::size_t>(1, targetNodes * 10 / 72));
  spec.loopCount = std::max<std::uint32_t>(1, spec.blocks / 20);
  return spec;
}

namespace detail {
template <typename F>
double timeMs(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}
}  // namespace detail

inline BenchRow benchOne(const FirmGraph& input, std::size_t size, int repeats = 3) {
  BenchRow row;
  row.size = size;
  row.nodesIn = input.nodeCount();
  row.edgesIn = input.edgeCount();
  row.foldMs = 1e300;
  row.iselMs = 1e300;
  for (int r = 0; r < repeats; ++r) {
    FirmGraph g = input;
    row.foldMs = std::min(row.foldMs, detail::timeMs([&] { optimize(g); }));
    FirmGraph tr = g;
    row.iselMs = std::min(row.iselMs, detail::timeMs([&] { runInstructionSelection(tr); }));
    row.nodesOut = tr.nodeCount();
  }
  return row;
}

inline std::vector<BenchRow> bench(const std::vector<std::size_t>& sizes, std::uint64_t seed, int repeats = 3) {
  std::vector<BenchRow> rows;
  for (std::size_t size : sizes) rows.push_back(benchOne(generate(seed, benchSpec(size)), size, repeats));
  return rows;
}

inline std::string benchCsv(const std::vector<BenchRow>& rows) {
  std::ostringstream os;
  os << "size,fold_ms,isel_ms,nodes_out\n";
  os.setf(std::ios::fixed);
  os.precision(3);
  for (const BenchRow& r : rows) os << r.size << ',' << r.foldMs << ',' << r.iselMs << ',' << r.nodesOut << '\n';
  return os.str();
}

// Least-squares slope of log(ms) against log(size).
inline double logLogSlope(const std::vector<double>& sizes, const std::vector<double>& ms) {
  const std::size_t n = sizes.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::log(sizes[i]);
    const double y = std::log(std::max(ms[i], 1e-6));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (static_cast<double>(n) * sxy - sx * sy) / (static_cast<double>(n) * sxx - sx * sx);
}

}  // namespace firmfold
