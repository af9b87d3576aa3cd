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

// `firmfold` command line. Exit codes: 0 success, 1 verifier findings,
// 2 usage or input errors, 3 internal contract breach.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "firmfold/bench.hpp"
#include "firmfold/cfg_fold.hpp"
#include "firmfold/generate.hpp"
#include "firmfold/graph_io.hpp"
#include "firmfold/interp.hpp"
#include "firmfold/isel.hpp"
#include "firmfold/verifier.hpp"

namespace firmfold {

enum ExitCode : int { kExitOk = 0, kExitFindings = 1, kExitUsage = 2, kExitContract = 3 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace cli {

inline std::vector<std::string> splitList(const std::string& s, char sep = ',') {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

inline Inputs parseInputs(const std::string& spec) {
  Inputs inputs;
  for (const std::string& kv : splitList(spec)) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw UsageError("--inputs: expected id=value, got '" + kv + "'");
    try {
      std::size_t used = 0;
      const long long id = std::stoll(kv.substr(0, eq), &used);
      if (used != eq || id < 0) throw UsageError("--inputs: bad node id in '" + kv + "'");
      const std::string v = kv.substr(eq + 1);
      const long long value = std::stoll(v, &used);
      if (used != v.size() || value < INT32_MIN || value > INT32_MAX)
        throw UsageError("--inputs: bad 32-bit value in '" + kv + "'");
      inputs[nodeId(static_cast<std::uint32_t>(id))] = static_cast<std::int32_t>(value);
    } catch (const std::logic_error&) {
      throw UsageError("--inputs: cannot parse '" + kv + "'");
    }
  }
  return inputs;
}

// Accepts plain integers and scientific notation such as 1e5.
inline std::vector<std::size_t> parseSizes(const std::string& spec) {
  std::vector<std::size_t> sizes;
  for (const std::string& s : splitList(spec)) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(s, &used);
    } catch (const std::logic_error&) {
      throw UsageError("--sizes: cannot parse '" + s + "'");
    }
    if (used != s.size() || !(v >= 1)) throw UsageError("--sizes: bad size '" + s + "'");
    sizes.push_back(static_cast<std::size_t>(v + 0.5));
  }
  if (sizes.empty()) throw UsageError("--sizes: no sizes given");
  return sizes;
}

inline std::uint64_t seedFromEnv(std::uint64_t fallback) {
  if (const char* s = std::getenv("FIRMFOLD_SEED"); s && *s) {
    try {
      return std::stoull(s);
    } catch (const std::logic_error&) {
      throw UsageError(std::string("FIRMFOLD_SEED: not an integer: ") + s);
    }
  }
  return fallback;
}

struct PassOptions {
  std::string dotDir;
  std::optional<std::size_t> maxRounds;
};

inline void runFold(FirmGraph& g, const PassOptions& po) {
  OptimizeOptions opts;
  opts.maxRounds = po.maxRounds;
  if (!po.dotDir.empty()) {
    std::filesystem::create_directories(po.dotDir);
    auto bound = std::make_shared<std::uint32_t>(g.nodeBound());
    opts.onRound = [dir = po.dotDir, bound](const FirmGraph& cur, std::size_t round) {
      std::set<NodeId> fresh;
      for (NodeId n : cur.liveNodes())
        if (index(n) >= *bound) fresh.insert(n);
      *bound = cur.nodeBound();
      std::ostringstream name;
      name << "round-" << std::setw(3) << std::setfill('0') << round << ".dot";
      exportDot(cur, (std::filesystem::path(dir) / name.str()).string(), fresh);
    };
  }
  optimize(g, opts);
}

inline void runPasses(FirmGraph& g, const std::vector<std::string>& passes, const PassOptions& po) {
  for (const std::string& p : passes)
    if (p != "fold" && p != "isel") throw UsageError("--passes: unknown pass '" + p + "'");
  requireClean(g, "input");
  for (const std::string& p : passes) {
    if (p == "fold") runFold(g, po);
    else runInstructionSelection(g);
    requireClean(g, "after " + p);
  }
}

}  // namespace cli

inline int runCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"firmfold: local optimization and instruction selection on a graph IR", "firmfold"};
  app.require_subcommand(1);

  std::string in, outPath;
  cli::PassOptions po;
  std::size_t maxRounds = 0;

  auto addPassFlags = [&](CLI::App* sub) {
    sub->add_option("-o,--output", outPath, "output graph (JSON)")->required();
    sub->add_option("--emit-dot", po.dotDir, "write a DOT snapshot after every optimize round into this directory");
    sub->add_option("--max-rounds", maxRounds, "abort if optimize needs more rounds than this");
  };

  auto* fold = app.add_subcommand("fold", "constant folding, control-flow folding and cleanup");
  fold->add_option("input", in, "input graph (JSON)")->required();
  addPassFlags(fold);

  auto* isel = app.add_subcommand("isel", "instruction selection");
  isel->add_option("input", in, "input graph (JSON)")->required();
  isel->add_option("-o,--output", outPath, "output graph (JSON)")->required();

  std::string passes;
  auto* run = app.add_subcommand("run", "run a comma-separated pass pipeline");
  run->add_option("--passes", passes, "e.g. fold,isel")->required();
  run->add_option("input", in, "input graph (JSON)")->required();
  addPassFlags(run);

  auto* verifyCmd = app.add_subcommand("verify", "check graph integrity");
  verifyCmd->add_option("input", in, "input graph (JSON)")->required();

  std::string inputs;
  std::uint64_t maxSteps = kDefaultMaxSteps;
  auto* exec = app.add_subcommand("exec", "run the reference interpreter");
  exec->add_option("input", in, "input graph (JSON)")->required();
  exec->add_option("--inputs", inputs, "Load inputs as id=value,...");
  exec->add_option("--max-steps", maxSteps, "step limit");

  std::uint64_t seed = 0;
  GenSpec spec;
  auto* gen = app.add_subcommand("gen", "generate a random program graph");
  gen->add_option("--seed", seed, "random seed (FIRMFOLD_SEED overrides)");
  gen->add_option("--blocks", spec.blocks, "number of blocks");
  gen->add_option("--ops-per-block", spec.opsPerBlock, "operations per block");
  gen->add_option("--const-ratio", spec.constRatio, "probability that an operand is a constant");
  gen->add_option("--loops", spec.loopCount, "number of counting loops");
  gen->add_option("--inputs", spec.inputCount, "number of parameter Loads");
  gen->add_option("-o,--output", outPath, "output graph (JSON)")->required();

  std::string sizes = "1e3,1e4,1e5";
  int repeats = 3;
  auto* benchCmd = app.add_subcommand("bench", "time optimize and isel on generated graphs");
  benchCmd->add_option("--sizes", sizes, "comma-separated node counts, e.g. 1e4,1e5");
  benchCmd->add_option("--seed", seed, "random seed (FIRMFOLD_SEED overrides)");
  benchCmd->add_option("--repeats", repeats, "best-of count")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "firmfold: " << e.what() << "\n";
    return kExitUsage;
  }

  if (maxRounds > 0) po.maxRounds = maxRounds;

  try {
    if (*fold || *isel || *run) {
      FirmGraph g = load(in);
      std::vector<std::string> list;
      if (*fold) list = {"fold"};
      else if (*isel) list = {"isel"};
      else list = cli::splitList(passes);
      cli::runPasses(g, list, po);
      save(g, outPath);
      return kExitOk;
    }
    if (*verifyCmd) {
      const auto findings = verify(load(in));
      for (const Violation& v : findings) out << formatViolation(v) << "\n";
      return findings.empty() ? kExitOk : kExitFindings;
    }
    if (*exec) {
      const FirmGraph g = load(in);
      const ExecResult r = execute(g, cli::parseInputs(inputs), maxSteps);
      out << describe(r) << "\n";
      return kExitOk;
    }
    if (*gen) {
      save(generate(cli::seedFromEnv(seed), spec), outPath);
      return kExitOk;
    }
    if (*benchCmd) {
      const auto rows = bench(cli::parseSizes(sizes), cli::seedFromEnv(seed), repeats);
      out << benchCsv(rows);
      for (const BenchRow& r : rows)
        err << "size " << r.size << ": " << r.nodesIn << " nodes / " << r.edgesIn << " edges, optimize " << r.foldMs
            << " ms, isel " << r.iselMs << " ms, " << r.nodesOut << " nodes out\n";
      return kExitOk;
    }
  } catch (const VerificationError& e) {
    err << "firmfold: " << e.what() << "\n";
    for (const Violation& v : e.findings()) err << formatViolation(v) << "\n";
    return kExitFindings;
  } catch (const ContractError& e) {
    err << "firmfold: contract breach: " << e.what() << "\n";
    return kExitContract;
  } catch (const GraphError& e) {
    err << "firmfold: contract breach: " << e.what() << "\n";
    return kExitContract;
  } catch (const std::exception& e) {
    // LoadError, UsageError, ExecError, GenerateError, I/O failures.
    err << "firmfold: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace firmfold
