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
#include <iomanip>
#include <optional>

#include "CLI11.hpp"
#include "wbfuzz/engine.h"
#include "wbfuzz/errors.h"
#include "wbfuzz/export.h"

namespace wbfuzz {
namespace {

struct RunFlags {
  std::string sut;
  std::string arm = "all";
  std::string budget = "1000";
  uint64_t seed = 1;
  std::string out;
  bool no_timestamps = false;
  std::optional<double> base;
  std::optional<double> discovery_window;
  std::optional<size_t> fake_cap;
  std::optional<int64_t> sleep_cap_ms;
  std::optional<double> taos_probability;
  std::optional<double> violate_probability;
  std::optional<double> mutation_taint_probability;
};

std::filesystem::path OutputDir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("WBFUZZ_OUT"); env != nullptr && *env != '\0') return env;
  return "wbfuzz-out";
}

int DoRun(const RunFlags& f, std::ostream& out) {
  RunConfig config;
  config.sut = f.sut;
  config.arm = ParseArm(f.arm);
  config.budget = Budget::Parse(f.budget);
  config.seed = f.seed;
  EngineConfig& e = config.engine;
  if (f.base) e.base = *f.base;
  if (f.discovery_window) e.discovery_window = *f.discovery_window;
  if (f.fake_cap) e.fake_cap = *f.fake_cap;
  if (f.sleep_cap_ms) e.sleep_cap = std::chrono::milliseconds(*f.sleep_cap_ms);
  if (f.taos_probability) e.taos_probability = *f.taos_probability;
  if (f.violate_probability) e.violate_probability = *f.violate_probability;
  if (f.mutation_taint_probability) e.mutation_taint_probability = *f.mutation_taint_probability;
  e.Validate();

  const auto sut = LoadFixture(f.sut);
  const std::filesystem::path dir = OutputDir(f.out);
  Engine engine(config, sut);
  const SearchResult result = engine.Run();
  const Suite suite = BuildSuite(result, sut);
  WriteOutputs(dir, result, suite, !f.no_timestamps);

  const SearchStats& s = result.stats;
  out << "wbfuzz run  sut=" << sut->id << " arm=" << ArmName(config.arm)
      << " seed=" << config.seed << " budget=" << config.budget.ToString() << "\n";
  out << "  evaluations      " << s.evaluations << "\n";
  out << "  targets covered  " << s.targets_covered << "/" << s.targets_total << "\n";
  out << "  lines covered    " << s.lines_covered << "/" << s.lines_total << "\n";
  out << "  distinct faults  " << s.faults << "\n";
  out << "  discoveries      " << result.discoveries.size() << "\n";
  out << "  tests exported   " << suite.tests.size() << "\n";
  out << "  wall time        " << std::fixed << std::setprecision(2)
      << static_cast<double>(s.wall.count()) / 1000.0 << " s\n";
  out << "  output           " << dir.string() << "\n";
  return kExitOk;
}

int DoListSuts(std::ostream& out) {
  for (const auto& name : FixtureNames()) {
    const auto sut = LoadFixture(name);
    out << std::left << std::setw(14) << name << sut->routes.size() << " endpoints, "
        << sut->tables.size() << " tables, " << sut->probes.size() << " line probes\n";
  }
  return kExitOk;
}

int DoReplay(const std::string& file, const std::string& sut_name, std::ostream& out) {
  const auto sut = LoadFixture(sut_name);
  const Suite suite = SuiteFromJson(ReadJsonFile(file));
  const ReplayResult r = Replay(suite, sut);
  for (const auto& v : r.verdicts) {
    if (v.passed) continue;
    out << "FAIL " << v.test << " call " << v.call << " " << v.assertion << ": expected "
        << v.expected.dump() << ", got " << v.actual.dump() << "\n";
  }
  out << "replay " << suite.tests.size() << " tests, " << r.verdicts.size() << " assertions: "
      << r.passed() << " passed, " << r.failed() << " failed\n";
  return r.failed() == 0 ? kExitOk : kExitError;
}

int DoReport(const std::string& in, std::ostream& out) {
  const Json doc = ReadJsonFile(std::filesystem::path(in) / "report.json");
  if (!doc.is_object() || doc.value("format", "") != "wbfuzz-report") {
    throw ParseError(in + "/report.json is not a wbfuzz report");
  }
  out << "wbfuzz report  sut=" << doc.value("sut", "?") << " arm=" << doc.value("arm", "?")
      << " seed=" << doc.value("seed", 0) << " budget=" << doc.value("budget", "?") << "\n";
  out << "  evaluations      " << doc.value("evaluations", 0) << "\n";
  const Json targets = doc.value("targets", Json::object());
  out << "  targets covered  " << targets.value("covered", 0) << "/" << targets.value("total", 0)
      << "\n";
  const Json lines = doc.value("lines", Json::object());
  out << "  lines covered    " << lines.value("covered", 0) << "/" << lines.value("total", 0)
      << "\n";
  out << "  distinct faults  " << doc.value("distinct_faults", 0) << "\n";
  for (const auto& f : doc.value("faults", Json::array())) {
    out << "    " << f.value("key", "") << "\n";
  }
  out << "  discoveries      " << doc.value("discoveries", Json::array()).size() << "\n";
  for (const auto& d : doc.value("discoveries", Json::array())) {
    out << "    @" << d.value("evaluation", 0) << " " << d.value("what", "") << " "
        << d.value("location", "") << " " << d.value("name", "") << " on "
        << d.value("endpoint", "") << "\n";
  }
  out << "  tests exported   " << doc.value("tests", 0) << "\n";
  if (doc.contains("wall_ms")) {
    out << "  wall time        " << std::fixed << std::setprecision(2)
        << doc.value("wall_ms", 0.0) / 1000.0 << " s\n";
  }
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"wbfuzz: search-based white-box fuzzing of embedded REST fixtures", "wbfuzz"};
  app.require_subcommand(1);

  RunFlags run;
  auto* run_cmd = app.add_subcommand("run", "Search one fixture and export a suite");
  run_cmd->add_option("--sut", run.sut, "Fixture name (see list-suts)")->required();
  run_cmd->add_option("--arm", run.arm, "base, taos, tt, tt-openapi, jpa or all")
      ->capture_default_str();
  run_cmd->add_option("--budget", run.budget, "N evaluations, or Nms/Ns/Nm/Nh of wall clock")
      ->capture_default_str();
  run_cmd->add_option("--seed", run.seed, "Random seed")->capture_default_str();
  run_cmd->add_option("--out", run.out, "Output directory (default: $WBFUZZ_OUT or wbfuzz-out)");
  run_cmd->add_flag("--no-timestamps", run.no_timestamps, "Leave timing out of report.json");
  run_cmd->add_option("--base", run.base, "Heuristic floor b in (0, 1) [0.1]");
  run_cmd->add_option("--discovery-window", run.discovery_window,
                      "Budget fraction carrying fake discovery names [0.1]");
  run_cmd->add_option("--fake-cap", run.fake_cap, "Largest collection checked for fake names [16]");
  run_cmd->add_option("--sleep-cap-ms", run.sleep_cap_ms, "Longest honoured sleep [1000]");
  run_cmd->add_option("--taos-probability", run.taos_probability,
                      "Tainted string sampling probability of the taos arm [0.9]");
  run_cmd->add_option("--violate-probability", run.violate_probability,
                      "Chance an insert breaks an entity-only constraint [0.05]");
  run_cmd->add_option("--mutation-taint-probability", run.mutation_taint_probability,
                      "Chance a string mutation writes a fresh tainted value [0.5]");

  auto* list_cmd = app.add_subcommand("list-suts", "List the embedded fixtures");

  std::string suite_file;
  std::string replay_sut;
  auto* replay_cmd = app.add_subcommand("replay", "Replay an exported suite against a fixture");
  replay_cmd->add_option("--suite", suite_file, "suite.json to replay")->required();
  replay_cmd->add_option("--sut", replay_sut, "Fixture name")->required();

  std::string report_dir;
  auto* report_cmd = app.add_subcommand("report", "Summarize the report of a finished run");
  report_cmd->add_option("--in", report_dir, "Output directory of a run")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "wbfuzz: " << e.what() << "\n" << "run 'wbfuzz --help' for usage\n";
    return kExitUsage;
  }

  try {
    if (run_cmd->parsed()) return DoRun(run, out);
    if (list_cmd->parsed()) return DoListSuts(out);
    if (replay_cmd->parsed()) return DoReplay(suite_file, replay_sut, out);
    if (report_cmd->parsed()) return DoReport(report_dir, out);
  } catch (const ConfigError& e) {
    err << "wbfuzz: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "wbfuzz: " << e.what() << "\n";
    return kExitError;
  }
  return kExitUsage;
}

}  // namespace wbfuzz
