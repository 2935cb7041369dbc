// Copyright 2026 The wbfuzz Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "tools/cli.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gtest/gtest.h"

namespace wbfuzz {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome Cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

fs::path TempDir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("wbfuzz_cli_test_" + name);
  fs::remove_all(dir);
  return dir;
}

TEST(CliTest, ListSuts) {
  const Outcome o = Cli({"list-suts"});
  EXPECT_EQ(o.code, kExitOk);
  for (const char* name :
       {"validbeans", "hiddenparams", "appsession", "stringops", "clockwork", "collections"}) {
    EXPECT_NE(o.out.find(name), std::string::npos) << name;
  }
}

TEST(CliTest, RunIsReproducibleAndReplayable) {
  const fs::path a = TempDir("a"), b = TempDir("b");
  for (const auto& dir : {a, b}) {
    const Outcome o = Cli({"run", "--sut", "stringops", "--arm", "all", "--budget", "500",
                           "--seed", "4", "--out", dir.string(), "--no-timestamps"});
    ASSERT_EQ(o.code, kExitOk) << o.err;
    EXPECT_NE(o.out.find("evaluations      500"), std::string::npos) << o.out;
    EXPECT_NE(o.out.find("targets covered"), std::string::npos);
    EXPECT_NE(o.out.find("distinct faults"), std::string::npos);
    EXPECT_NE(o.out.find("wall time"), std::string::npos);
  }
  for (const char* f : {"suite.json", "suite.http.txt", "report.json"}) {
    EXPECT_EQ(Slurp(a / f), Slurp(b / f)) << f;
  }
  const Outcome report = Cli({"report", "--in", a.string()});
  EXPECT_EQ(report.code, kExitOk);
  EXPECT_NE(report.out.find("sut=stringops"), std::string::npos);
  const Outcome replay =
      Cli({"replay", "--suite", (a / "suite.json").string(), "--sut", "stringops"});
  EXPECT_EQ(replay.code, kExitOk) << replay.out;
  EXPECT_NE(replay.out.find("0 failed"), std::string::npos) << replay.out;
}

TEST(CliTest, OverridesAreAccepted) {
  const fs::path dir = TempDir("overrides");
  const Outcome o = Cli({"run", "--sut", "hiddenparams", "--arm", "tt-openapi", "--budget", "200",
                         "--out", dir.string(), "--base", "0.2", "--discovery-window", "0.2",
                         "--fake-cap", "8", "--sleep-cap-ms", "10", "--taos-probability", "0.5",
                         "--violate-probability", "0.1", "--mutation-taint-probability", "0.3"});
  EXPECT_EQ(o.code, kExitOk) << o.err;
  EXPECT_TRUE(fs::exists(dir / "report.json"));
}

TEST(CliTest, UsageErrors) {
  const std::vector<std::vector<std::string>> bad = {
      {},
      {"frobnicate"},
      {"run"},
      {"run", "--sut", "nosuch"},
      {"run", "--sut", "stringops", "--arm", "best"},
      {"run", "--sut", "stringops", "--budget", "ten"},
      {"run", "--sut", "stringops", "--budget", "0"},
      {"run", "--sut", "stringops", "--base", "1.5"},
      {"run", "--sut", "stringops", "--violate-probability", "-0.1"},
      {"replay", "--sut", "stringops"},
      {"report"},
  };
  for (const auto& args : bad) {
    const Outcome o = Cli(args);
    EXPECT_EQ(o.code, kExitUsage) << (args.empty() ? "<none>" : args[0]) << " " << o.err;
  }
}

TEST(CliTest, RuntimeErrors) {
  const fs::path dir = TempDir("runtime");
  fs::create_directories(dir);
  EXPECT_EQ(Cli({"report", "--in", (dir / "absent").string()}).code, kExitError);
  std::ofstream(dir / "broken.json") << "[1,";
  EXPECT_EQ(Cli({"replay", "--suite", (dir / "broken.json").string(), "--sut", "stringops"}).code,
            kExitError);
}

TEST(CliTest, ReplayOnAnotherFixtureIsAUsageError) {
  const fs::path dir = TempDir("mismatch");
  ASSERT_EQ(Cli({"run", "--sut", "clockwork", "--budget", "100", "--out", dir.string()}).code,
            kExitOk);
  EXPECT_EQ(Cli({"replay", "--suite", (dir / "suite.json").string(), "--sut", "stringops"}).code,
            kExitUsage);
}

TEST(CliTest, OutputDirectoryFallsBackToEnvironment) {
  const fs::path dir = TempDir("env");
  ::setenv("WBFUZZ_OUT", dir.string().c_str(), 1);
  const Outcome o = Cli({"run", "--sut", "collections", "--budget", "100"});
  ::unsetenv("WBFUZZ_OUT");
  EXPECT_EQ(o.code, kExitOk) << o.err;
  EXPECT_TRUE(fs::exists(dir / "suite.json"));
}

TEST(CliTest, Help) {
  const Outcome o = Cli({"--help"});
  EXPECT_EQ(o.code, kExitOk);
  EXPECT_NE(o.out.find("replay"), std::string::npos);
}

}  // namespace
}  // namespace wbfuzz
