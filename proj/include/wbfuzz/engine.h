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


#ifndef WBFUZZ_ENGINE_H_
#define WBFUZZ_ENGINE_H_

// Many-target evolutionary search over HTTP call sequences with SQL setup.

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "wbfuzz/gene_template.h"
#include "wbfuzz/genes.h"
#include "wbfuzz/harness.h"
#include "wbfuzz/rng.h"
#include "wbfuzz/schema.h"
#include "wbfuzz/sqlgen.h"

namespace wbfuzz {

enum class Arm { kBase, kTaos, kTt, kTtOpenApi, kJpa, kAll };

std::string ArmName(Arm arm);
// Throws ConfigError for unknown names.
Arm ParseArm(std::string_view name);
const std::vector<Arm>& AllArms();

struct Features {
  bool taint_on_sampling = false;
  // Collection/map/enum/object distances, parser heuristics, DTO sightings
  // and validation targets.
  bool advanced = false;
  bool discovery = false;
  // Inserts honor (or deliberately break) entity constraints.
  bool entity_constraints = false;

  bool operator==(const Features&) const = default;
};

Features FeaturesFor(Arm arm);

struct Budget {
  enum class Mode { kEvaluations, kWallClock };
  Mode mode = Mode::kEvaluations;
  uint64_t evaluations = 1000;
  std::chrono::milliseconds wall{0};

  static Budget Evaluations(uint64_t n);
  static Budget WallClock(std::chrono::milliseconds d);
  // Bare integer: evaluations. Suffix s, m or h: wall clock.
  static Budget Parse(std::string_view text);
  std::string ToString() const;
};

// Every tunable constant of a run.
struct EngineConfig {
  double base = kDefaultBase;
  double discovery_window = 0.10;
  size_t fake_cap = 16;
  std::chrono::milliseconds sleep_cap{1000};
  double taos_probability = 0.9;
  double violate_probability = 0.05;
  double mutation_taint_probability = 0.5;
  size_t heuristic_cap = 1024;

  size_t population_per_target = 10;
  double random_sampling = 0.5;
  double focus_start = 0.5;
  size_t max_mutations = 3;
  size_t max_calls = 4;
  size_t max_initial_calls = 2;
  size_t max_inserts_per_table = 3;
  double optional_presence = 0.5;

  // Throws ConfigError when a value is out of range.
  void Validate() const;
};

struct RunConfig {
  std::string sut;
  Arm arm = Arm::kAll;
  Budget budget;
  uint64_t seed = 1;
  EngineConfig engine;
};

HarnessOptions HarnessOptionsFor(const Features& features, const EngineConfig& config);

// One HTTP call: an object gene with "path", "query", "header" and "body"
// children built from the endpoint template.
struct CallGene {
  std::string template_id;
  uint64_t version = 0;
  GeneBox root;
};

struct Individual {
  std::vector<SqlInsertAction> inserts;
  std::vector<CallGene> calls;
  // Tables whose selects came back empty in the last evaluation.
  std::vector<std::string> empty_selects;

  size_t Size() const { return inserts.size() + calls.size(); }
};

// Concrete form of an individual, as executed and exported.
struct ConcreteInsert {
  std::string table;
  Json values;
};

struct ConcreteCall {
  std::string verb;
  std::string endpoint;  // path template
  HttpRequest request;
};

struct ConcreteTest {
  std::vector<ConcreteInsert> inserts;
  std::vector<ConcreteCall> calls;
};

// Object template with path, query, header and body sections.
GeneTemplate CallTemplate(const ActionTemplate& tmpl);
// Fresh gene for `t` that keeps every part of `old` whose shape still fits.
GeneBox ReconcileGene(const GeneTemplate& t, const Gene* old, Rng& rng, const GeneContext& ctx);
// Renders a call gene. Fake discovery names are added when asked.
HttpRequest RenderCall(const ActionTemplate& tmpl, const Gene& root, bool with_fake_names);
ConcreteTest Concretize(const Individual& ind, const std::map<std::string, ActionTemplate>& templates,
                        bool with_fake_names, bool keep_violations = true);

using TemplateMap = std::map<std::string, ActionTemplate>;

struct Execution {
  std::vector<HttpResponse> responses;
  ExecutionTrace trace;
  std::vector<FaultRecord> faults;
  // Best h per target: trace heuristics plus status, endpoint and fault
  // targets.
  std::map<std::string, double> fitness;
  std::chrono::nanoseconds duration{0};
};

// Resets the harness, runs the inserts and calls, and collects the trace.
// `current` supplies the endpoint views used for discovery; null means the
// document's.
Execution Execute(Harness& harness, const ConcreteTest& test, const TemplateMap* current = nullptr);

std::string StatusTarget(const std::string& sut, const std::string& template_id, int status);
std::string EndpointTarget(const std::string& sut, const std::string& template_id);
std::string FaultTarget(const std::string& sut, const FaultRecord& f);

struct ArchiveEntry {
  double h = 0;
  std::shared_ptr<const Individual> individual;
  uint64_t evaluation = 0;
};

struct FaultFinding {
  FaultRecord record;
  std::shared_ptr<const Individual> individual;
  uint64_t evaluation = 0;
};

struct DiscoveryLogEntry {
  uint64_t evaluation = 0;
  std::string template_id;
  std::string what;  // "discover", "retype" or "dto"
  DiscoveredInput input;
};

struct SearchStats {
  uint64_t evaluations = 0;
  size_t targets_total = 0;
  size_t targets_covered = 0;
  size_t lines_total = 0;
  size_t lines_covered = 0;
  size_t faults = 0;
  size_t scheduled_executions = 0;
  // The database matched its baseline after the final reset.
  bool reset_restores_baseline = false;
  std::chrono::milliseconds wall{0};
};

struct SearchResult {
  RunConfig config;
  // Best entry of every target ever reached.
  std::map<std::string, ArchiveEntry> best;
  std::set<std::string> covered;
  std::vector<FaultFinding> faults;  // in discovery order
  TemplateMap templates;
  std::vector<DiscoveryLogEntry> discoveries;
  SearchStats stats;
};

struct EvaluationInfo {
  uint64_t index = 0;
  double progress = 0;  // consumed budget fraction before the evaluation
  const ConcreteTest* test = nullptr;
  const Execution* execution = nullptr;
};

using Observer = std::function<void(const EvaluationInfo&)>;

class Engine {
 public:
  // Throws ConfigError for unknown fixtures or bad settings.
  explicit Engine(RunConfig config);
  Engine(RunConfig config, std::shared_ptr<const SutDescriptor> sut);
  ~Engine();

  void set_observer(Observer observer);
  SearchResult Run();

 private:
  class Impl;
  std::unique_ptr<Impl> impl_;
};

// Independent runs, one harness each. The parallel form spreads runs over
// OpenMP threads; both return results in input order.
std::vector<SearchResult> RunSeeds(const std::vector<RunConfig>& configs);
std::vector<SearchResult> RunSeedsSerial(const std::vector<RunConfig>& configs);

}  // namespace wbfuzz

#endif  // WBFUZZ_ENGINE_H_
