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


#include "wbfuzz/engine.h"

#include <cmath>
#include <set>

#include "gtest/gtest.h"
#include "wbfuzz/errors.h"

namespace wbfuzz {
namespace {

RunConfig Config(const std::string& sut, Arm arm, uint64_t evaluations, uint64_t seed = 1) {
  RunConfig c;
  c.sut = sut;
  c.arm = arm;
  c.budget = Budget::Evaluations(evaluations);
  c.seed = seed;
  return c;
}

std::vector<std::string> FaultKeys(const SearchResult& r) {
  std::vector<std::string> out;
  for (const auto& f : r.faults) out.push_back(f.record.DedupKey());
  return out;
}

// Arms and configuration -------------------------------------------------------

TEST(ArmTest, NamesRoundTrip) {
  ASSERT_EQ(AllArms().size(), 6u);
  for (Arm arm : AllArms()) EXPECT_EQ(ParseArm(ArmName(arm)), arm);
  EXPECT_THROW(ParseArm("ALL"), ConfigError);
  EXPECT_THROW(ParseArm(""), ConfigError);
}

TEST(ArmTest, Features) {
  EXPECT_EQ(FeaturesFor(Arm::kBase), (Features{false, false, false, false}));
  EXPECT_EQ(FeaturesFor(Arm::kTaos), (Features{true, false, false, false}));
  EXPECT_EQ(FeaturesFor(Arm::kTt), (Features{false, true, false, false}));
  EXPECT_EQ(FeaturesFor(Arm::kTtOpenApi), (Features{false, true, true, false}));
  EXPECT_EQ(FeaturesFor(Arm::kJpa), (Features{false, false, false, true}));
  EXPECT_EQ(FeaturesFor(Arm::kAll), (Features{true, true, true, true}));
}

TEST(BudgetTest, Grammar) {
  const Budget n = Budget::Parse("250");
  EXPECT_EQ(n.mode, Budget::Mode::kEvaluations);
  EXPECT_EQ(n.evaluations, 250u);
  EXPECT_EQ(Budget::Parse("5s").wall, std::chrono::seconds(5));
  EXPECT_EQ(Budget::Parse("2m").wall, std::chrono::minutes(2));
  EXPECT_EQ(Budget::Parse("1h").wall, std::chrono::hours(1));
  EXPECT_EQ(Budget::Parse("5s").mode, Budget::Mode::kWallClock);
  EXPECT_EQ(Budget::Parse("250ms").wall, std::chrono::milliseconds(250));
  for (const char* bad : {"", "0", "0s", "0ms", "ms", "-1", "5x", "s", "1.5s", "10 ", "+3",
                          "5mm", "5sm", "99999999999999999999"}) {
    EXPECT_THROW(Budget::Parse(bad), ConfigError) << bad;
  }
}

TEST(BudgetTest, ToStringRoundTrips) {
  for (const char* text : {"1", "20000", "250ms", "7s", "3m", "2h"}) {
    EXPECT_EQ(Budget::Parse(text).ToString(), text);
  }
  EXPECT_EQ(Budget::Parse("120s").ToString(), "2m");
  EXPECT_EQ(Budget::WallClock(std::chrono::milliseconds(1500)).ToString(), "1500ms");
}

TEST(EngineConfigTest, Validate) {
  EngineConfig ok;
  EXPECT_NO_THROW(ok.Validate());
  EXPECT_EQ(ok.base, 0.1);
  EXPECT_EQ(ok.discovery_window, 0.1);
  EXPECT_EQ(ok.fake_cap, 16u);
  EXPECT_EQ(ok.sleep_cap, std::chrono::seconds(1));
  EXPECT_EQ(ok.taos_probability, 0.9);
  EXPECT_EQ(ok.violate_probability, 0.05);
  auto bad = [](auto mutate) {
    EngineConfig c;
    mutate(c);
    return c;
  };
  EXPECT_THROW(bad([](EngineConfig& c) { c.base = 0; }).Validate(), ConfigError);
  EXPECT_THROW(bad([](EngineConfig& c) { c.base = 1; }).Validate(), ConfigError);
  EXPECT_THROW(bad([](EngineConfig& c) { c.taos_probability = 1.5; }).Validate(), ConfigError);
  EXPECT_THROW(bad([](EngineConfig& c) { c.violate_probability = -0.1; }).Validate(), ConfigError);
  EXPECT_THROW(bad([](EngineConfig& c) { c.discovery_window = NAN; }).Validate(), ConfigError);
  EXPECT_THROW(bad([](EngineConfig& c) { c.fake_cap = 0; }).Validate(), ConfigError);
  EXPECT_THROW(bad([](EngineConfig& c) { c.sleep_cap = std::chrono::milliseconds(-1); }).Validate(),
               ConfigError);
  EXPECT_THROW(bad([](EngineConfig& c) { c.max_initial_calls = 9; }).Validate(), ConfigError);
  RunConfig run = Config("stringops", Arm::kAll, 10);
  run.engine.base = 2;
  EXPECT_THROW(Engine{run}, ConfigError);
  EXPECT_THROW(Engine{Config("missing", Arm::kAll, 10)}, ConfigError);
}

TEST(EngineConfigTest, HarnessOptionsFollowArm) {
  EngineConfig c;
  c.fake_cap = 7;
  c.sleep_cap = std::chrono::milliseconds(30);
  const HarnessOptions base = HarnessOptionsFor(FeaturesFor(Arm::kBase), c);
  EXPECT_FALSE(base.advanced);
  EXPECT_FALSE(base.discovery);
  EXPECT_EQ(base.fake_cap, 7u);
  EXPECT_EQ(base.sleep_cap, std::chrono::milliseconds(30));
  const HarnessOptions all = HarnessOptionsFor(FeaturesFor(Arm::kAll), c);
  EXPECT_TRUE(all.advanced);
  EXPECT_TRUE(all.discovery);
}

// Call genes ------------------------------------------------------------------------

ActionTemplate ItemTemplate() {
  ActionTemplate t;
  t.verb = "PUT";
  t.path = "/items/{name}/x";
  t.path_params.push_back({"name", GeneTemplate::String(1, 8), true});
  t.query.push_back({"q", GeneTemplate::String(0, 8), false});
  t.headers.push_back({"X-Id", GeneTemplate::Integer(0, 9), true});
  GeneTemplate body = GeneTemplate::Of(GeneTemplate::Kind::kObject);
  body.fields.push_back({"n", GeneTemplate::Integer(1, 1), true});
  t.body = body;
  return t;
}

StringGene Text(const std::string& v) {
  StringGene g(0, 64);
  g.set_free_value(v);
  return g;
}

TEST(CallGeneTest, TemplateSections) {
  const GeneTemplate t = CallTemplate(ItemTemplate());
  ASSERT_EQ(t.fields.size(), 4u);
  EXPECT_EQ(t.fields[0].name, "path");
  EXPECT_EQ(t.fields[1].name, "query");
  EXPECT_EQ(t.fields[2].name, "header");
  EXPECT_EQ(t.fields[3].name, "body");
  for (const auto& f : t.fields) EXPECT_TRUE(f.required);
  // Path parameters are always required.
  EXPECT_TRUE(t.fields[0].type.fields[0].required);
}

TEST(CallGeneTest, RenderEncodesAndSkipsAbsent) {
  ObjectGene root({{"path", ObjectGene({{"name", Text("a b/c")}})},
                   {"query", ObjectGene({{"q", OptionalGene(Text("v"), false)}})},
                   {"header", ObjectGene({{"X-Id", IntegerGene(0, 9)}})},
                   {"body", ObjectGene({{"n", IntegerGene(1, 1)}})}});
  const HttpRequest r = RenderCall(ItemTemplate(), root, false);
  EXPECT_EQ(r.verb, "PUT");
  EXPECT_EQ(r.path, "/items/a%20b%2Fc/x");
  EXPECT_TRUE(r.query.empty());
  ASSERT_EQ(r.headers.size(), 1u);
  EXPECT_EQ(r.headers[0].first, "X-Id");
  ASSERT_TRUE(r.body.has_value());
  EXPECT_EQ(Json::parse(*r.body), Json({{"n", 1}}));

  const HttpRequest fake = RenderCall(ItemTemplate(), root, true);
  ASSERT_EQ(fake.query.size(), 1u);
  EXPECT_EQ(fake.query[0].first, kFakeParam);
  ASSERT_EQ(fake.headers.size(), 2u);
  EXPECT_EQ(fake.headers[1].first, kFakeHeader);
}

TEST(CallGeneTest, ReconcileKeepsOldValuesAndAddsInputs) {
  Rng rng(3);
  ActionTemplate before = ItemTemplate();
  GeneBox old = ObjectGene({{"path", ObjectGene({{"name", Text("kept")}})},
                            {"query", ObjectGene({{"q", OptionalGene(Text("also"), true)}})},
                            {"header", ObjectGene({{"X-Id", IntegerGene(0, 9)}})},
                            {"body", ObjectGene({{"n", IntegerGene(1, 1)}})}});
  ActionTemplate after =
      Expand(before, DiscoveredInput{InputLocation::kQuery, "extra", InferredType::kText});
  GeneBox merged = ReconcileGene(CallTemplate(after), old.get(), rng, {});
  const HttpRequest r = RenderCall(after, *merged, false);
  EXPECT_EQ(r.path, "/items/kept/x");
  bool saw_q = false;
  for (const auto& [name, value] : r.query) {
    if (name == "q") {
      saw_q = true;
      EXPECT_EQ(value, "also");
    }
  }
  EXPECT_TRUE(saw_q);
  const auto* query = static_cast<const ObjectGene&>(*merged).Find("query");
  ASSERT_NE(query, nullptr);
  EXPECT_NE(static_cast<const ObjectGene*>(query)->Find("extra"), nullptr);
  EXPECT_TRUE(merged->IsValid());
}

TEST(CallGeneTest, TaintOnSamplingRate) {
  // The taos arm samples free strings as tainted values with p = 0.9.
  TaintMinter minter;
  const GeneContext ctx{&minter, 0.9, 0.5};
  Rng rng(17);
  const int n = 10000;
  int tainted = 0;
  for (int i = 0; i < n; ++i) {
    auto g = Sample(GeneTemplate::String(0, 64), rng, ctx);
    tainted += static_cast<const StringGene&>(*g).TaintId().has_value() ? 1 : 0;
  }
  const double sigma = std::sqrt(n * 0.9 * 0.1);
  EXPECT_NEAR(tainted, n * 0.9, 4 * sigma);
  int none = 0;
  for (int i = 0; i < 1000; ++i) {
    auto g = Sample(GeneTemplate::String(0, 64), rng, GeneContext{&minter, 0.0, 0.5});
    none += static_cast<const StringGene&>(*g).TaintId().has_value() ? 1 : 0;
  }
  EXPECT_EQ(none, 0);
}

// Execution -------------------------------------------------------------------------

TEST(ExecuteTest, TargetsForStatusEndpointAndFault) {
  Harness harness(LoadFixture("hiddenparams"));
  ConcreteTest t;
  HttpRequest r;
  r.verb = "POST";
  r.path = "/paypal/ipn/consumer/1";
  t.calls.push_back({"POST", "/paypal/ipn/consumer/{consumerID}", r});
  const Execution ex = Execute(harness, t);
  ASSERT_EQ(ex.responses.size(), 1u);
  EXPECT_EQ(ex.responses[0].status, 500);
  ASSERT_FALSE(ex.faults.empty());
  const std::string id = "POST:/paypal/ipn/consumer/{consumerID}";
  EXPECT_EQ(ex.fitness.at(StatusTarget("hiddenparams", id, 500)), 1.0);
  EXPECT_EQ(ex.fitness.at(EndpointTarget("hiddenparams", id)), 0.25);
  EXPECT_EQ(ex.fitness.at(FaultTarget("hiddenparams", ex.faults[0])), 1.0);
  EXPECT_EQ(ex.fitness.at("hiddenparams:ipn:L1:hit"), 1.0);
  // Independent evaluations: the same test gives the same outcome.
  const Execution again = Execute(harness, t);
  EXPECT_EQ(again.fitness, ex.fitness);
}

// Search ------------------------------------------------------------------------------

TEST(EngineTest, SpendsExactlyTheEvaluationBudget) {
  Engine engine(Config("stringops", Arm::kAll, 321));
  uint64_t calls = 0;
  double last_progress = -1;
  engine.set_observer([&](const EvaluationInfo& info) {
    EXPECT_EQ(info.index, calls);
    EXPECT_GT(info.progress, last_progress);
    EXPECT_LT(info.progress, 1.0);
    last_progress = info.progress;
    ++calls;
  });
  const SearchResult r = engine.Run();
  EXPECT_EQ(calls, 321u);
  EXPECT_EQ(r.stats.evaluations, 321u);
}

TEST(EngineTest, WallClockBudgetStops) {
  RunConfig c = Config("stringops", Arm::kAll, 1);
  c.budget = Budget::WallClock(std::chrono::milliseconds(200));
  const auto start = std::chrono::steady_clock::now();
  const SearchResult r = Engine(c).Run();
  const auto elapsed = std::chrono::steady_clock::now() - start;
  EXPECT_GT(r.stats.evaluations, 0u);
  EXPECT_LT(elapsed, std::chrono::seconds(3));
}

TEST(EngineTest, SameSeedSameResult) {
  for (const auto& sut : FixtureNames()) {
    const SearchResult a = Engine(Config(sut, Arm::kAll, 600, 9)).Run();
    const SearchResult b = Engine(Config(sut, Arm::kAll, 600, 9)).Run();
    EXPECT_EQ(a.covered, b.covered) << sut;
    EXPECT_EQ(FaultKeys(a), FaultKeys(b)) << sut;
    EXPECT_EQ(a.templates, b.templates) << sut;
    ASSERT_EQ(a.discoveries.size(), b.discoveries.size()) << sut;
  }
}

TEST(EngineTest, ArchiveNeverForgets) {
  Engine engine(Config("collections", Arm::kAll, 1500, 4));
  std::set<std::string> reached;
  std::set<std::string> faults;
  size_t last_fault_count = 0;
  engine.set_observer([&](const EvaluationInfo& info) {
    for (const auto& [target, h] : info.execution->fitness) {
      if (h >= 1.0) reached.insert(target);
    }
    for (const auto& f : info.execution->faults) faults.insert(f.DedupKey());
    EXPECT_GE(faults.size(), last_fault_count);
    last_fault_count = faults.size();
  });
  const SearchResult r = engine.Run();
  EXPECT_EQ(r.covered, reached);
  EXPECT_EQ(r.faults.size(), faults.size());
  for (const auto& target : r.covered) EXPECT_EQ(r.best.at(target).h, 1.0) << target;
  EXPECT_EQ(r.stats.targets_covered, r.covered.size());
  EXPECT_GE(r.stats.targets_total, r.stats.targets_covered);
}

TEST(EngineTest, RepresentativesStillCoverTheirTargets) {
  const SearchResult r = Engine(Config("validbeans", Arm::kAll, 2000, 2)).Run();
  Harness harness(LoadFixture("validbeans"),
                  HarnessOptionsFor(FeaturesFor(Arm::kAll), r.config.engine));
  for (const auto& target : r.covered) {
    const ArchiveEntry& e = r.best.at(target);
    const Execution ex = Execute(harness, Concretize(*e.individual, r.templates, false), &r.templates);
    auto it = ex.fitness.find(target);
    ASSERT_NE(it, ex.fitness.end()) << target;
    EXPECT_EQ(it->second, 1.0) << target;
  }
}

TEST(EngineTest, FakeNamesOnlyInsideTheDiscoveryWindow) {
  auto count = [](Arm arm, double window) {
    RunConfig c = Config("hiddenparams", arm, 1000, 5);
    c.engine.discovery_window = window;
    Engine engine(c);
    size_t with = 0;
    engine.set_observer([&](const EvaluationInfo& info) {
      bool fake = false;
      for (const auto& call : info.test->calls) {
        for (const auto& [name, value] : call.request.query) fake = fake || name == kFakeParam;
        for (const auto& [name, value] : call.request.headers) fake = fake || name == kFakeHeader;
      }
      EXPECT_EQ(fake, arm != Arm::kTt && info.progress < window) << info.index;
      with += fake ? 1 : 0;
    });
    const SearchResult r = engine.Run();
    for (const auto& d : r.discoveries) {
      if (d.what == "discover") EXPECT_LT(d.evaluation, 1000 * window + 1);
    }
    return with;
  };
  EXPECT_EQ(count(Arm::kTtOpenApi, 0.1), 100u);
  EXPECT_EQ(count(Arm::kTtOpenApi, 0.25), 250u);
  EXPECT_EQ(count(Arm::kTt, 0.1), 0u);
}

TEST(EngineTest, HiddenInputsAreLearned) {
  const SearchResult r = Engine(Config("hiddenparams", Arm::kAll, 500, 3)).Run();
  const ActionTemplate& ipn = r.templates.at("POST:/paypal/ipn/consumer/{consumerID}");
  bool gross_is_number = false;
  for (const auto& in : ipn.query) {
    EXPECT_NE(in.name, "_method");
    if (in.name == "mc_gross") {
      EXPECT_TRUE(in.discovered);
      gross_is_number = in.type.kind == GeneTemplate::Kind::kFloat;
    }
  }
  EXPECT_TRUE(gross_is_number);
  const SearchResult base = Engine(Config("hiddenparams", Arm::kBase, 500, 3)).Run();
  EXPECT_TRUE(base.discoveries.empty());
}

TEST(EngineTest, ValidationTargetsNeedTheAdvancedArms) {
  auto has_validate = [](const SearchResult& r) {
    for (const auto& [target, e] : r.best) {
      if (target.rfind("VALIDATE_", 0) == 0) return true;
    }
    return false;
  };
  EXPECT_FALSE(has_validate(Engine(Config("validbeans", Arm::kBase, 300)).Run()));
  EXPECT_TRUE(has_validate(Engine(Config("validbeans", Arm::kTt, 300)).Run()));
}

TEST(EngineTest, ParallelSeedsMatchSerial) {
  std::vector<RunConfig> configs;
  for (uint64_t seed = 1; seed <= 4; ++seed) configs.push_back(Config("appsession", Arm::kAll, 300, seed));
  const auto serial = RunSeedsSerial(configs);
  const auto parallel = RunSeeds(configs);
  ASSERT_EQ(serial.size(), parallel.size());
  for (size_t i = 0; i < serial.size(); ++i) {
    EXPECT_EQ(serial[i].config.seed, configs[i].seed);
    EXPECT_EQ(serial[i].covered, parallel[i].covered);
    EXPECT_EQ(FaultKeys(serial[i]), FaultKeys(parallel[i]));
  }
  configs.push_back(Config("missing", Arm::kAll, 10));
  EXPECT_THROW(RunSeeds(configs), ConfigError);
}

}  // namespace
}  // namespace wbfuzz
