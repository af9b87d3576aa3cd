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

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include "firmfold/cli.hpp"
#include "support/broken.hpp"
#include "support/builders.hpp"

namespace firmfold {
namespace {

using namespace firmfold::testing;
namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome cli(std::vector<std::string> args) {
  args.insert(args.begin(), "firmfold");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = runCli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("firmfold_cli_test_" + std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string write(const std::string& name, const FirmGraph& g) const {
    save(g, path(name));
    return path(name);
  }

  fs::path dir_;
};

TEST_F(CliTest, NoSubcommandIsUsageError) {
  EXPECT_EQ(cli({}).code, kExitUsage);
  EXPECT_EQ(cli({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(cli({"fold"}).code, kExitUsage);
}

TEST_F(CliTest, HelpSucceeds) {
  Outcome r = cli({"--help"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("bench"), std::string::npos);
}

TEST_F(CliTest, VerifyClean) {
  Outcome r = cli({"verify", write("d.json", diamond(1, 2).g)});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out, "");
}

TEST_F(CliTest, VerifyReportsFindingsOnePerLine) {
  auto broken = brokenGraphs();
  Outcome r = cli({"verify", write("b.json", broken[3].g)});
  EXPECT_EQ(r.code, kExitFindings);
  EXPECT_EQ(r.out.rfind("V4\t", 0), 0u);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 1);
}

TEST_F(CliTest, FoldWritesOptimizedGraph) {
  Outcome r = cli({"fold", write("d.json", diamond(10, 20).g), "-o", path("out.json")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  FirmGraph g = load(path("out.json"));
  EXPECT_EQ(countKind(g, NodeKind::Block), 2u);
  EXPECT_EQ(execute(g, {}).value, 10);
}

TEST_F(CliTest, RunFoldIselOnDiamond) {
  Outcome r = cli({"run", "--passes", "fold,isel", write("d.json", diamond(10, 20).g), "-o", path("out.json")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  FirmGraph g = load(path("out.json"));
  EXPECT_TRUE(verify(g).empty());
  EXPECT_EQ(countKind(g, NodeKind::TargetReturn), 1u);
  EXPECT_EQ(countKind(g, NodeKind::TargetConst), 1u);
}

TEST_F(CliTest, PipelineIsByteDeterministic) {
  GenSpec spec;
  spec.blocks = 30;
  const std::string in = write("g.json", generate(9, spec));
  ASSERT_EQ(cli({"run", "--passes", "fold,isel", in, "-o", path("a.json")}).code, kExitOk);
  ASSERT_EQ(cli({"run", "--passes", "fold,isel", in, "-o", path("b.json")}).code, kExitOk);
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
}

TEST_F(CliTest, UnknownPassIsUsageError) {
  Outcome r = cli({"run", "--passes", "fold,dce", write("d.json", diamond(1, 2).g), "-o", path("o.json")});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("dce"), std::string::npos);
}

TEST_F(CliTest, IselOnTargetGraphIsContractBreach) {
  const std::string in = write("d.json", diamond(1, 2).g);
  ASSERT_EQ(cli({"isel", in, "-o", path("tr.json")}).code, kExitOk);
  Outcome r = cli({"isel", path("tr.json"), "-o", path("tr2.json")});
  EXPECT_EQ(r.code, kExitContract);
  EXPECT_FALSE(fs::exists(path("tr2.json")));
}

TEST_F(CliTest, FoldRejectsBrokenInput) {
  auto broken = brokenGraphs();
  Outcome r = cli({"fold", write("b.json", broken[1].g), "-o", path("o.json")});
  EXPECT_EQ(r.code, kExitFindings);
  EXPECT_NE(r.err.find("V2\t"), std::string::npos);
}

TEST_F(CliTest, MissingOrMalformedInput) {
  EXPECT_EQ(cli({"verify", path("missing.json")}).code, kExitUsage);
  std::ofstream(path("bad.json")) << "{\"nodes\": [";
  Outcome r = cli({"verify", path("bad.json")});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("line"), std::string::npos);
}

TEST_F(CliTest, MaxRoundsOverrun) {
  Outcome r = cli({"fold", write("d.json", diamond(1, 2).g), "-o", path("o.json"), "--max-rounds", "1"});
  EXPECT_EQ(r.code, kExitContract);
  EXPECT_EQ(cli({"fold", path("d.json"), "-o", path("o.json"), "--max-rounds", "10"}).code, kExitOk);
}

TEST_F(CliTest, EmitDotWritesOneSnapshotPerRound) {
  Outcome r = cli({"fold", write("d.json", diamond(1, 2).g), "-o", path("o.json"), "--emit-dot", path("dots")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  FirmGraph g = diamond(1, 2).g;
  const std::size_t rounds = optimize(g).rounds;
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(path("dots"))) {
    ++files;
    EXPECT_EQ(e.path().extension(), ".dot");
  }
  EXPECT_EQ(files, rounds);
  EXPECT_EQ(slurp(fs::path(path("dots")) / "round-001.dot").rfind("digraph firm {", 0), 0u);
}

TEST_F(CliTest, EmitDotHighlightsNodesCreatedInTheRound) {
  ASSERT_EQ(cli({"fold", write("t.json", onePlusTwo().g), "-o", path("o.json"), "--emit-dot", path("dots")}).code,
            kExitOk);
  const std::string first = slurp(fs::path(path("dots")) / "round-001.dot");
  EXPECT_NE(first.find("n8 [label=\"8: Const 3\", style=filled"), std::string::npos) << first;
  const std::string second = slurp(fs::path(path("dots")) / "round-002.dot");
  EXPECT_EQ(second.find("style=filled"), std::string::npos);
}

TEST_F(CliTest, ExecPrintsValueOrTrap) {
  auto d = dynamicDiamond(3);
  const std::string in = write("d.json", d.g);
  const std::string id = std::to_string(index(d.x));
  Outcome r = cli({"exec", in, "--inputs", id + "=1"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out, "11\n");
  EXPECT_EQ(cli({"exec", in, "--inputs", id + "=-2147483648"}).out, "-2147483638\n");
  EXPECT_EQ(cli({"exec", in}).code, kExitUsage);
  EXPECT_EQ(cli({"exec", in, "--inputs", id + "=abc"}).code, kExitUsage);
  EXPECT_EQ(cli({"exec", in, "--inputs", id + "=4294967296"}).code, kExitUsage);

  FirmGraph g;
  NodeId b = g.startBlock();
  ret(g, binary(g, NodeKind::Div, param(g, b), constant(g, b, 0), b), b);
  const NodeId x = parameters(g)[0];
  Outcome t = cli({"exec", write("div.json", g), "--inputs", std::to_string(index(x)) + "=5"});
  EXPECT_EQ(t.code, kExitOk);
  EXPECT_EQ(t.out, "trap: divide-by-zero\n");
}

TEST_F(CliTest, ExecStepLimit) {
  Outcome r = cli({"exec", write("l.json", countingLoop(100).g), "--max-steps", "50"});
  EXPECT_EQ(r.out, "trap: step-limit\n");
}

TEST_F(CliTest, GenIsSeeded) {
  ASSERT_EQ(cli({"gen", "--seed", "5", "--blocks", "8", "-o", path("a.json")}).code, kExitOk);
  ASSERT_EQ(cli({"gen", "--seed", "5", "--blocks", "8", "-o", path("b.json")}).code, kExitOk);
  ASSERT_EQ(cli({"gen", "--seed", "6", "--blocks", "8", "-o", path("c.json")}).code, kExitOk);
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
  EXPECT_NE(slurp(path("a.json")), slurp(path("c.json")));
  GenSpec spec;
  spec.blocks = 8;
  EXPECT_EQ(slurp(path("a.json")), toJson(generate(5, spec)));
  EXPECT_EQ(cli({"gen", "--blocks", "0", "-o", path("z.json")}).code, kExitUsage);
}

TEST_F(CliTest, SeedEnvironmentOverridesFlag) {
  ::setenv("FIRMFOLD_SEED", "6", 1);
  Outcome r = cli({"gen", "--seed", "5", "--blocks", "8", "-o", path("a.json")});
  ::unsetenv("FIRMFOLD_SEED");
  ASSERT_EQ(r.code, kExitOk);
  GenSpec spec;
  spec.blocks = 8;
  EXPECT_EQ(slurp(path("a.json")), toJson(generate(6, spec)));
}

TEST_F(CliTest, BenchEmitsCsv) {
  Outcome a = cli({"bench", "--sizes", "1e3,2000", "--seed", "7", "--repeats", "1"});
  ASSERT_EQ(a.code, kExitOk) << a.err;
  std::istringstream lines(a.out);
  std::string header, row1, row2, extra;
  std::getline(lines, header);
  std::getline(lines, row1);
  std::getline(lines, row2);
  EXPECT_EQ(header, "size,fold_ms,isel_ms,nodes_out");
  EXPECT_EQ(row1.rfind("1000,", 0), 0u);
  EXPECT_EQ(row2.rfind("2000,", 0), 0u);
  EXPECT_FALSE(std::getline(lines, extra));
  EXPECT_NE(a.err.find("size 1000"), std::string::npos);

  auto lastColumn = [](const std::string& csv) {
    std::string out, line;
    std::istringstream is(csv);
    while (std::getline(is, line)) out += line.substr(line.rfind(',') + 1) + ";";
    return out;
  };
  Outcome b = cli({"bench", "--sizes", "1e3,2000", "--seed", "7", "--repeats", "1"});
  EXPECT_EQ(lastColumn(a.out), lastColumn(b.out));
  EXPECT_EQ(cli({"bench", "--sizes", "ten"}).code, kExitUsage);
}

TEST(CliHelpers, ParseSizes) {
  EXPECT_EQ(cli::parseSizes("1e3,1e4,100000"), (std::vector<std::size_t>{1000, 10000, 100000}));
  EXPECT_THROW(cli::parseSizes(""), UsageError);
  EXPECT_THROW(cli::parseSizes("0"), UsageError);
  EXPECT_THROW(cli::parseSizes("12x"), UsageError);
}

TEST(CliHelpers, ParseInputs) {
  Inputs in = cli::parseInputs("5=1,7=-3");
  EXPECT_EQ(in.size(), 2u);
  EXPECT_EQ(in.at(nodeId(7)), -3);
  EXPECT_THROW(cli::parseInputs("5"), UsageError);
  EXPECT_THROW(cli::parseInputs("x=1"), UsageError);
}

TEST(CliBinary, ExitCodesReachTheShell) {
  const std::string bin = FIRMFOLD_CLI_PATH;
  const std::string samples = FIRMFOLD_SAMPLES_DIR;
  auto status = [](const std::string& cmd) {
    const int s = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
  };
  EXPECT_EQ(status(bin + " verify " + samples + "/diamond.json"), 0);
  EXPECT_EQ(status(bin + " verify " + samples + "/broken_phi.json"), 1);
  EXPECT_EQ(status(bin + " verify"), 2);
}

}  // namespace
}  // namespace firmfold
