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

#include <algorithm>
#include <cctype>
#include <charconv>
#include <exception>

#include <omp.h>

#include "wbfuzz/errors.h"
#include "wbfuzz/oracle.h"

namespace wbfuzz {

// ---------------------------------------------------------------------------
// Arms, budgets and settings

std::string ArmName(Arm arm) {
  switch (arm) {
    case Arm::kBase:
      return "base";
    case Arm::kTaos:
      return "taos";
    case Arm::kTt:
      return "tt";
    case Arm::kTtOpenApi:
      return "tt-openapi";
    case Arm::kJpa:
      return "jpa";
    case Arm::kAll:
      return "all";
  }
  return "?";
}

const std::vector<Arm>& AllArms() {
  static const std::vector<Arm> arms = {Arm::kBase,      Arm::kTaos, Arm::kTt,
                                        Arm::kTtOpenApi, Arm::kJpa,  Arm::kAll};
  return arms;
}

Arm ParseArm(std::string_view name) {
  for (Arm arm : AllArms()) {
    if (ArmName(arm) == name) return arm;
  }
  throw ConfigError("unknown arm '" + std::string(name) +
                    "' (expected base, taos, tt, tt-openapi, jpa or all)");
}

Features FeaturesFor(Arm arm) {
  Features f;
  switch (arm) {
    case Arm::kBase:
      break;
    case Arm::kTaos:
      f.taint_on_sampling = true;
      break;
    case Arm::kTt:
      f.advanced = true;
      break;
    case Arm::kTtOpenApi:
      f.advanced = true;
      f.discovery = true;
      break;
    case Arm::kJpa:
      f.entity_constraints = true;
      break;
    case Arm::kAll:
      f = Features{true, true, true, true};
      break;
  }
  return f;
}

Budget Budget::Evaluations(uint64_t n) {
  if (n == 0) throw ConfigError("budget must be positive");
  Budget b;
  b.mode = Mode::kEvaluations;
  b.evaluations = n;
  return b;
}

Budget Budget::WallClock(std::chrono::milliseconds d) {
  if (d.count() <= 0) throw ConfigError("budget must be positive");
  Budget b;
  b.mode = Mode::kWallClock;
  b.wall = d;
  return b;
}

Budget Budget::Parse(std::string_view text) {
  if (text.empty()) throw ConfigError("empty budget");
  std::string_view digits = text;
  int64_t unit_ms = 0;
  switch (text.back()) {
    case 's':
      unit_ms = 1000;
      break;
    case 'm':
      unit_ms = 60 * 1000;
      break;
    case 'h':
      unit_ms = 60 * 60 * 1000;
      break;
    default:
      break;
  }
  if (unit_ms == 1000 && text.size() > 2 && text[text.size() - 2] == 'm') {
    unit_ms = 1;
    digits.remove_suffix(2);
  } else if (unit_ms != 0) {
    digits.remove_suffix(1);
  }
  uint64_t n = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
  if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size()) {
    throw ConfigError("malformed budget '" + std::string(text) +
                      "' (expected N for evaluations or Nms/Ns/Nm/Nh for wall clock)");
  }
  if (unit_ms == 0) return Evaluations(n);
  if (n > static_cast<uint64_t>(INT64_MAX / unit_ms)) throw ConfigError("budget too large");
  return WallClock(std::chrono::milliseconds(static_cast<int64_t>(n) * unit_ms));
}

std::string Budget::ToString() const {
  if (mode == Mode::kEvaluations) return std::to_string(evaluations);
  const int64_t ms = wall.count();
  if (ms % (3600 * 1000) == 0) return std::to_string(ms / (3600 * 1000)) + "h";
  if (ms % (60 * 1000) == 0) return std::to_string(ms / (60 * 1000)) + "m";
  if (ms % 1000 == 0) return std::to_string(ms / 1000) + "s";
  return std::to_string(ms) + "ms";
}

namespace {

void CheckProbability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError(std::string(name) + " must be within [0, 1]");
}

}  // namespace

void EngineConfig::Validate() const {
  if (!(base > 0.0 && base < 1.0)) throw ConfigError("base must be within (0, 1)");
  CheckProbability(discovery_window, "discovery window");
  CheckProbability(taos_probability, "taint-on-sampling probability");
  CheckProbability(violate_probability, "violate probability");
  CheckProbability(mutation_taint_probability, "mutation taint probability");
  CheckProbability(random_sampling, "random sampling probability");
  CheckProbability(focus_start, "focus start");
  CheckProbability(optional_presence, "optional presence");
  if (fake_cap == 0) throw ConfigError("fake-name cap must be positive");
  if (heuristic_cap == 0) throw ConfigError("heuristic cap must be positive");
  if (sleep_cap.count() < 0) throw ConfigError("sleep cap must not be negative");
  if (population_per_target == 0) throw ConfigError("population size must be positive");
  if (max_mutations == 0) throw ConfigError("mutation count must be positive");
  if (max_calls == 0 || max_initial_calls == 0 || max_initial_calls > max_calls) {
    throw ConfigError("call limits must satisfy 1 <= initial <= max");
  }
}

HarnessOptions HarnessOptionsFor(const Features& features, const EngineConfig& config) {
  HarnessOptions o;
  o.base = config.base;
  o.advanced = features.advanced;
  o.discovery = features.discovery;
  o.fake_cap = config.fake_cap;
  o.heuristic_cap = config.heuristic_cap;
  o.sleep_cap = config.sleep_cap;
  return o;
}

// ---------------------------------------------------------------------------
// Call genes

namespace {

GeneTemplate SectionTemplate(const std::vector<InputSpec>& inputs, bool force_required) {
  GeneTemplate t = GeneTemplate::Of(GeneTemplate::Kind::kObject);
  for (const auto& in : inputs) t.fields.push_back({in.name, in.type, force_required || in.required});
  return t;
}

const Gene& Unwrap(const Gene& g) {
  return g.kind() == GeneKind::kOptional ? static_cast<const OptionalGene&>(g).child() : g;
}

bool Present(const Gene& g) {
  return g.kind() != GeneKind::kOptional || static_cast<const OptionalGene&>(g).present();
}

const ObjectGene* Section(const Gene& root, std::string_view name) {
  if (root.kind() != GeneKind::kObject) return nullptr;
  const Gene* g = static_cast<const ObjectGene&>(root).Find(name);
  if (g == nullptr || g->kind() != GeneKind::kObject) return nullptr;
  return static_cast<const ObjectGene*>(g);
}

GeneBox Merge(const Gene& fresh, const Gene& old) {
  if (fresh.kind() == GeneKind::kOptional) {
    const auto& f = static_cast<const OptionalGene&>(fresh);
    if (old.kind() == GeneKind::kOptional) {
      const auto& o = static_cast<const OptionalGene&>(old);
      return OptionalGene(Merge(f.child(), o.child()), o.present());
    }
    return OptionalGene(Merge(f.child(), old), true);
  }
  if (old.kind() == GeneKind::kOptional) {
    return Merge(fresh, static_cast<const OptionalGene&>(old).child());
  }
  if (fresh.kind() == GeneKind::kObject && old.kind() == GeneKind::kObject) {
    const auto& f = static_cast<const ObjectGene&>(fresh);
    const auto& o = static_cast<const ObjectGene&>(old);
    std::vector<std::pair<std::string, GeneBox>> fields;
    for (const auto& [name, child] : f.fields()) {
      const Gene* previous = o.Find(name);
      fields.emplace_back(name, previous != nullptr ? Merge(*child, *previous) : GeneBox(child));
    }
    return ObjectGene(std::move(fields));
  }
  if (fresh.kind() == old.kind()) return GeneBox(old.Clone());
  return GeneBox(fresh.Clone());
}

}  // namespace

GeneTemplate CallTemplate(const ActionTemplate& tmpl) {
  GeneTemplate t = GeneTemplate::Of(GeneTemplate::Kind::kObject);
  t.fields.push_back({"path", SectionTemplate(tmpl.path_params, true), true});
  t.fields.push_back({"query", SectionTemplate(tmpl.query, false), true});
  t.fields.push_back({"header", SectionTemplate(tmpl.headers, false), true});
  if (tmpl.body) t.fields.push_back({"body", *tmpl.body, true});
  return t;
}

GeneBox ReconcileGene(const GeneTemplate& t, const Gene* old, Rng& rng, const GeneContext& ctx) {
  GeneBox fresh = Sample(t, rng, ctx);
  if (old == nullptr) return fresh;
  return Merge(*fresh, *old);
}

HttpRequest RenderCall(const ActionTemplate& tmpl, const Gene& root, bool with_fake_names) {
  HttpRequest req;
  req.verb = tmpl.verb;
  const ObjectGene* path = Section(root, "path");
  std::string out;
  size_t i = 0;
  while (i < tmpl.path.size()) {
    if (tmpl.path[i] == '{') {
      const size_t close = tmpl.path.find('}', i);
      if (close == std::string::npos) throw ConfigError("malformed path template " + tmpl.path);
      const std::string name = tmpl.path.substr(i + 1, close - i - 1);
      const Gene* g = path != nullptr ? path->Find(name) : nullptr;
      out += PercentEncode(g != nullptr ? Unwrap(*g).Render() : "0");
      i = close + 1;
    } else {
      out += tmpl.path[i++];
    }
  }
  req.path = out;
  auto render = [](const ObjectGene* section, std::vector<std::pair<std::string, std::string>>& to) {
    if (section == nullptr) return;
    for (const auto& [name, g] : section->fields()) {
      if (Present(*g)) to.emplace_back(name, Unwrap(*g).Render());
    }
  };
  render(Section(root, "query"), req.query);
  render(Section(root, "header"), req.headers);
  if (root.kind() == GeneKind::kObject) {
    if (const Gene* body = static_cast<const ObjectGene&>(root).Find("body");
        body != nullptr && Present(*body)) {
      req.body = Unwrap(*body).ToJson().dump();
    }
  }
  if (with_fake_names) {
    req.query.emplace_back(std::string(kFakeParam), "1");
    req.headers.emplace_back(std::string(kFakeHeader), "1");
  }
  return req;
}

ConcreteTest Concretize(const Individual& ind, const TemplateMap& templates, bool with_fake_names,
                        bool keep_violations) {
  ConcreteTest test;
  for (const auto& insert : ind.inserts) {
    if (insert.violation && !keep_violations) continue;
    test.inserts.push_back({insert.table, insert.Values()});
  }
  for (const auto& call : ind.calls) {
    const ActionTemplate& tmpl = templates.at(call.template_id);
    test.calls.push_back({tmpl.verb, tmpl.path, RenderCall(tmpl, *call.root, with_fake_names)});
  }
  return test;
}

// ---------------------------------------------------------------------------
// Execution

std::string StatusTarget(const std::string& sut, const std::string& template_id, int status) {
  return sut + ":status:" + template_id + ":" + std::to_string(status);
}

std::string EndpointTarget(const std::string& sut, const std::string& template_id) {
  return sut + ":endpoint:" + template_id;
}

std::string FaultTarget(const std::string& sut, const FaultRecord& f) {
  return sut + ":fault:" + f.DedupKey();
}

Execution Execute(Harness& harness, const ConcreteTest& test, const TemplateMap* current) {
  Execution ex;
  harness.Reset();
  const auto start = std::chrono::steady_clock::now();
  for (const auto& insert : test.inserts) harness.Insert(insert.table, insert.values);
  for (size_t i = 0; i < test.calls.size(); ++i) {
    const ConcreteCall& call = test.calls[i];
    const ActionTemplate* view = nullptr;
    if (current != nullptr) {
      auto it = current->find(call.verb + ":" + call.endpoint);
      if (it != current->end()) view = &it->second;
    }
    ex.responses.push_back(harness.Call(call.request, view, i));
  }
  ex.trace = harness.TakeTrace();
  ex.duration = std::chrono::steady_clock::now() - start;

  const std::string& sut = harness.sut().id;
  ex.fitness = ex.trace.heuristics;
  auto record = [&](const std::string& target, double h) {
    auto [it, inserted] = ex.fitness.emplace(target, h);
    if (!inserted) it->second = std::max(it->second, h);
  };
  for (size_t i = 0; i < test.calls.size(); ++i) {
    const ConcreteCall& call = test.calls[i];
    const HttpResponse& response = ex.responses[i];
    const std::string id = call.verb + ":" + call.endpoint;
    const ActionTemplate* declared = harness.document().Find(call.verb, call.endpoint);
    for (auto& f : Classify(response, declared, call.verb, call.endpoint, i, ex.trace)) {
      ex.faults.push_back(std::move(f));
    }
    record(StatusTarget(sut, id, response.status), 1.0);
    const int family = response.status / 100;
    record(EndpointTarget(sut, id), family == 2 ? 1.0 : family == 5 ? 0.25 : 0.5);
  }
  for (const auto& f : ex.faults) record(FaultTarget(sut, f), 1.0);
  return ex;
}

// ---------------------------------------------------------------------------
// Engine

namespace {

using StringLeaf = std::pair<std::string, StringGene*>;

void CollectStrings(Gene& g, const std::string& path, std::vector<StringLeaf>& out) {
  switch (g.kind()) {
    case GeneKind::kString:
      out.emplace_back(path, static_cast<StringGene*>(&g));
      return;
    case GeneKind::kOptional:
      CollectStrings(static_cast<OptionalGene&>(g).child(), path, out);
      return;
    case GeneKind::kObject:
      for (size_t i = 0; i < g.ChildCount(); ++i) {
        CollectStrings(*g.Child(i), JoinPath(path, g.ChildName(i)), out);
      }
      return;
    case GeneKind::kArray:
      for (size_t i = 0; i < g.ChildCount(); ++i) CollectStrings(*g.Child(i), path + "/*", out);
      return;
    default:
      return;
  }
}

// Topmost genes that are not plain objects.
void CollectUnits(Gene& g, std::vector<Gene*>& out) {
  if (g.kind() == GeneKind::kObject) {
    for (size_t i = 0; i < g.ChildCount(); ++i) CollectUnits(*g.Child(i), out);
    return;
  }
  if (!g.IsSingleton()) out.push_back(&g);
}

struct Member {
  double h = 0;
  std::shared_ptr<const Individual> individual;
  uint64_t evaluation = 0;
};

struct TargetState {
  std::vector<Member> population;  // best first
  bool covered = false;
  uint64_t counter = 0;
  double best = 0;
};

bool Better(const Member& a, const Member& b) {
  if (a.h != b.h) return a.h > b.h;
  const size_t sa = a.individual->Size();
  const size_t sb = b.individual->Size();
  if (sa != sb) return sa < sb;
  return a.evaluation < b.evaluation;
}

}  // namespace

class Engine::Impl {
 public:
  Impl(RunConfig config, std::shared_ptr<const SutDescriptor> sut)
      : config_(std::move(config)),
        sut_(std::move(sut)),
        features_(FeaturesFor(config_.arm)),
        rng_(config_.seed) {
    config_.engine.Validate();
    if (config_.budget.mode == Budget::Mode::kEvaluations && config_.budget.evaluations == 0) {
      throw ConfigError("budget must be positive");
    }
    if (config_.sut.empty()) config_.sut = sut_->id;
    harness_ = std::make_unique<Harness>(sut_, HarnessOptionsFor(features_, config_.engine));
    for (const auto& action : harness_->document().actions) {
      templates_.emplace(action.Id(), action);
      versions_[action.Id()] = 0;
      template_ids_.push_back(action.Id());
    }
    std::sort(template_ids_.begin(), template_ids_.end());
    if (template_ids_.empty()) throw ConfigError("fixture " + sut_->id + " declares no endpoints");
    for (const auto& table : sut_->tables) {
      const EntityConstraintSet* entity = nullptr;
      if (features_.entity_constraints) {
        for (const auto& e : sut_->entities) {
          if (harness_->Binding(e.name).table == table.name) entity = &e;
        }
      }
      insert_rules_.emplace(table.name, Reconcile(table, entity, sut_->tables));
    }
    sample_ctx_ = GeneContext{&minter_,
                              features_.taint_on_sampling ? config_.engine.taos_probability : 0.0,
                              config_.engine.optional_presence};
    mutation_ctx_ = GeneContext{&minter_, config_.engine.mutation_taint_probability,
                                config_.engine.optional_presence};
    plain_ctx_ = GeneContext{nullptr, 0.0, config_.engine.optional_presence};
  }

  void set_observer(Observer o) { observer_ = std::move(o); }

  SearchResult Run() {
    start_ = std::chrono::steady_clock::now();
    while (!Done()) {
      const double progress = Progress();
      if (!focused_ && progress >= config_.engine.focus_start) EnterFocus();
      const double p_random =
          progress >= config_.engine.focus_start || config_.engine.focus_start <= 0
              ? 0.0
              : config_.engine.random_sampling * (1.0 - progress / config_.engine.focus_start);
      Individual ind;
      const TargetState* target = rng_.Chance(p_random) ? nullptr : PickTarget();
      if (target == nullptr) {
        ind = SampleRandom();
      } else {
        const Member& m = target->population[rng_.Index(target->population.size())];
        ind = *m.individual;
        Mutate(ind);
      }
      Evaluate(std::move(ind), progress);
    }
    return Finish();
  }

 private:
  bool Done() const {
    if (config_.budget.mode == Budget::Mode::kEvaluations) {
      return evaluations_ >= config_.budget.evaluations;
    }
    return std::chrono::steady_clock::now() - start_ >= config_.budget.wall;
  }

  double Progress() const {
    if (config_.budget.mode == Budget::Mode::kEvaluations) {
      return static_cast<double>(evaluations_) / static_cast<double>(config_.budget.evaluations);
    }
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start_;
    const std::chrono::duration<double> total = config_.budget.wall;
    return std::min(1.0, elapsed / total);
  }

  size_t PopulationLimit() const { return focused_ ? 1 : config_.engine.population_per_target; }

  void EnterFocus() {
    focused_ = true;
    for (auto& [name, state] : archive_) {
      if (state.population.size() > 1) state.population.resize(1);
    }
  }

  // Uncovered target with the lowest counter; ties broken at random.
  TargetState* PickTarget() {
    std::vector<TargetState*> best;
    uint64_t lowest = UINT64_MAX;
    for (auto& [name, state] : archive_) {
      if (state.covered || state.population.empty()) continue;
      if (state.counter < lowest) {
        lowest = state.counter;
        best.clear();
      }
      if (state.counter == lowest) best.push_back(&state);
    }
    if (best.empty()) return nullptr;
    TargetState* t = best[rng_.Index(best.size())];
    ++t->counter;
    return t;
  }

  CallGene NewCall(const std::string& id) {
    return CallGene{id, versions_.at(id), Sample(CallTemplate(templates_.at(id)), rng_, sample_ctx_)};
  }

  Individual SampleRandom() {
    Individual ind;
    const size_t n = static_cast<size_t>(rng_.Int(1, static_cast<int64_t>(config_.engine.max_initial_calls)));
    for (size_t i = 0; i < n; ++i) {
      ind.calls.push_back(NewCall(template_ids_[rng_.Index(template_ids_.size())]));
    }
    ApplySpecializations(ind);
    return ind;
  }

  void Sync(Individual& ind) {
    for (auto& call : ind.calls) {
      const uint64_t version = versions_.at(call.template_id);
      if (call.version == version) continue;
      call.root = ReconcileGene(CallTemplate(templates_.at(call.template_id)), call.root.get(), rng_,
                                plain_ctx_);
      call.version = version;
    }
  }

  void ApplySpecializations(Individual& ind) {
    if (registry_.empty()) return;
    for (auto& call : ind.calls) {
      std::vector<StringLeaf> leaves;
      CollectStrings(*call.root, "", leaves);
      for (auto& [path, gene] : leaves) {
        auto it = registry_.find({call.template_id, path});
        if (it == registry_.end()) continue;
        for (const auto& spec : it->second) {
          if (!gene->HasSpecialization(spec)) gene->AddSpecialization(spec, rng_);
        }
      }
    }
  }

  void Mutate(Individual& ind) {
    Sync(ind);
    const auto& cfg = config_.engine;
    bool structural = false;
    if (!ind.empty_selects.empty() && rng_.Chance(0.3)) {
      for (const auto& table : TablesToFill(ind.empty_selects, ind.inserts, cfg.max_inserts_per_table)) {
        auto it = insert_rules_.find(table);
        if (it == insert_rules_.end()) continue;
        ind.inserts.push_back(GenerateInsert(it->second, rng_, cfg.violate_probability, plain_ctx_));
        structural = true;
      }
    } else {
      const double r = rng_.Real();
      if (r < 0.1 && ind.calls.size() < cfg.max_calls) {
        const size_t at = rng_.Index(ind.calls.size() + 1);
        ind.calls.insert(ind.calls.begin() + static_cast<std::ptrdiff_t>(at),
                         NewCall(template_ids_[rng_.Index(template_ids_.size())]));
        structural = true;
      } else if (r >= 0.1 && r < 0.15 && ind.calls.size() > 1) {
        ind.calls.erase(ind.calls.begin() +
                        static_cast<std::ptrdiff_t>(rng_.Index(ind.calls.size())));
        structural = true;
      } else if (r >= 0.15 && r < 0.2 && !ind.inserts.empty()) {
        ind.inserts.erase(ind.inserts.begin() +
                          static_cast<std::ptrdiff_t>(rng_.Index(ind.inserts.size())));
        structural = true;
      }
    }
    ind.empty_selects.clear();
    if (!structural) {
      std::vector<Gene*> units;
      for (auto& call : ind.calls) CollectUnits(*call.root, units);
      for (auto& insert : ind.inserts) {
        for (auto& [column, gene] : insert.columns) {
          if (insert.violation && insert.violation->constraint.column == column) continue;
          if (!gene->IsSingleton()) units.push_back(gene.get());
        }
      }
      if (!units.empty()) {
        const auto k = static_cast<size_t>(rng_.Int(1, static_cast<int64_t>(cfg.max_mutations)));
        for (size_t i = 0; i < k; ++i) units[rng_.Index(units.size())]->Mutate(rng_, mutation_ctx_);
      }
    }
    ApplySpecializations(ind);
  }

  void Bump(const std::string& id, ActionTemplate next, const char* what, DiscoveredInput input) {
    ActionTemplate& current = templates_.at(id);
    if (next == current) return;
    current = std::move(next);
    ++versions_.at(id);
    discoveries_.push_back({evaluations_, id, what, std::move(input)});
  }

  void Learn(const Individual& ind, const ExecutionTrace& trace,
             const std::map<uint64_t, std::pair<size_t, std::string>>& taints) {
    for (const auto& d : trace.discoveries) {
      if (d.action_index >= ind.calls.size()) continue;
      const std::string& id = ind.calls[d.action_index].template_id;
      Bump(id, Expand(templates_.at(id), d.input), "discover", d.input);
    }
    for (const auto& dto : trace.dtos) {
      if (dto.action_index >= ind.calls.size()) continue;
      const std::string& id = ind.calls[dto.action_index].template_id;
      Bump(id, DiscoverBodyDto(templates_.at(id), dto.shape), "dto",
           DiscoveredInput{InputLocation::kBody, dto.shape.name, InferredType::kUnknown});
    }
    for (const auto& sighting : trace.taint) {
      auto it = taints.find(sighting.taint_id);
      if (it == taints.end()) continue;
      const auto& [call_index, path] = it->second;
      const std::string& id = ind.calls[call_index].template_id;
      auto& specs = registry_[{id, path}];
      if (std::none_of(specs.begin(), specs.end(),
                       [&](const Specialization& s) { return s.SameAs(sighting.specialization); })) {
        specs.push_back(sighting.specialization);
      }
      const auto kind = sighting.specialization.kind;
      if (kind == SpecializationKind::kIntegerFormat || kind == SpecializationKind::kFloatFormat) {
        Retype(id, path);
      }
    }
  }

  // A discovered free-form input parsed as a number becomes numeric.
  void Retype(const std::string& id, const std::string& path) {
    const size_t slash = path.find('/');
    if (slash == std::string::npos) return;
    const std::string section = path.substr(0, slash);
    const std::string name = path.substr(slash + 1);
    if (name.find('/') != std::string::npos) return;
    InputLocation loc;
    if (section == "query") {
      loc = InputLocation::kQuery;
    } else if (section == "header") {
      loc = InputLocation::kHeader;
    } else {
      return;
    }
    const ActionTemplate& tmpl = templates_.at(id);
    for (const auto& in : tmpl.Inputs(loc)) {
      if (in.name != name) continue;
      if (in.discovered && in.type.kind == GeneTemplate::Kind::kString) {
        DiscoveredInput d{loc, name, InferredType::kNumber};
        Bump(id, Expand(tmpl, d), "retype", d);
      }
      return;
    }
  }

  void Update(const std::string& target, double h, const std::shared_ptr<const Individual>& ind,
              uint64_t evaluation) {
    if (h <= 0) return;
    TargetState& st = archive_[target];
    Member m{h, ind, evaluation};
    if (st.covered) {
      if (h >= 1.0 && Better(m, st.population.front())) st.population.front() = m;
      return;
    }
    if (h >= 1.0) {
      st.covered = true;
      st.best = 1.0;
      st.counter = 0;
      st.population.assign(1, m);
      return;
    }
    if (h > st.best) {
      st.best = h;
      st.counter = 0;
    }
    auto& pop = st.population;
    if (pop.size() < PopulationLimit()) {
      pop.push_back(m);
    } else if (Better(m, pop.back())) {
      pop.back() = m;
    } else {
      return;
    }
    std::stable_sort(pop.begin(), pop.end(), Better);
  }

  void Evaluate(Individual ind, double progress) {
    Sync(ind);
    std::map<uint64_t, std::pair<size_t, std::string>> taints;
    for (size_t c = 0; c < ind.calls.size(); ++c) {
      std::vector<StringLeaf> leaves;
      CollectStrings(*ind.calls[c].root, "", leaves);
      for (const auto& [path, gene] : leaves) {
        if (auto id = gene->TaintId()) taints.emplace(*id, std::make_pair(c, path));
      }
    }
    const bool fakes = features_.discovery && progress < config_.engine.discovery_window;
    const ConcreteTest test = Concretize(ind, templates_, fakes);
    const Execution ex = Execute(*harness_, test, &templates_);
    const uint64_t index = evaluations_;
    Learn(ind, ex.trace, taints);
    ind.empty_selects = ex.trace.empty_selects;
    auto shared = std::make_shared<const Individual>(std::move(ind));
    for (const auto& [target, h] : ex.fitness) Update(target, h, shared, index);
    for (const auto& f : ex.faults) {
      if (fault_keys_.insert(f.DedupKey()).second) faults_.push_back({f, shared, index});
    }
    ++evaluations_;
    if (observer_) observer_(EvaluationInfo{index, progress, &test, &ex});
  }

  SearchResult Finish() {
    SearchResult r;
    r.config = config_;
    r.templates = templates_;
    r.discoveries = discoveries_;
    r.faults = faults_;
    std::set<std::string> all;
    for (const auto& [target, st] : archive_) {
      all.insert(target);
      if (st.population.empty()) continue;
      const Member& m = st.population.front();
      r.best.emplace(target, ArchiveEntry{m.h, m.individual, m.evaluation});
      if (st.covered) r.covered.insert(target);
    }
    for (const auto& probe : sut_->probes) {
      const std::string target = sut_->id + ":" + probe + ":hit";
      all.insert(target);
      r.stats.lines_covered += r.covered.count(target);
    }
    r.stats.evaluations = evaluations_;
    r.stats.targets_total = all.size();
    r.stats.targets_covered = r.covered.size();
    r.stats.lines_total = sut_->probes.size();
    r.stats.faults = faults_.size();
    r.stats.scheduled_executions = harness_->scheduler().executions();
    harness_->Reset();
    r.stats.reset_restores_baseline = harness_->db().Dump() == harness_->baseline().Dump();
    r.stats.wall = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start_);
    return r;
  }

  RunConfig config_;
  std::shared_ptr<const SutDescriptor> sut_;
  Features features_;
  Rng rng_;
  TaintMinter minter_;
  GeneContext sample_ctx_;
  GeneContext mutation_ctx_;
  GeneContext plain_ctx_;
  std::unique_ptr<Harness> harness_;
  TemplateMap templates_;
  std::map<std::string, uint64_t> versions_;
  std::vector<std::string> template_ids_;
  std::map<std::string, EffectiveConstraints> insert_rules_;
  std::map<std::pair<std::string, std::string>, std::vector<Specialization>> registry_;
  std::map<std::string, TargetState> archive_;
  std::set<std::string> fault_keys_;
  std::vector<FaultFinding> faults_;
  std::vector<DiscoveryLogEntry> discoveries_;
  Observer observer_;
  uint64_t evaluations_ = 0;
  bool focused_ = false;
  std::chrono::steady_clock::time_point start_;
};

Engine::Engine(RunConfig config) : Engine(config, LoadFixture(config.sut)) {}

Engine::Engine(RunConfig config, std::shared_ptr<const SutDescriptor> sut)
    : impl_(std::make_unique<Impl>(std::move(config), std::move(sut))) {}

Engine::~Engine() = default;

void Engine::set_observer(Observer observer) { impl_->set_observer(std::move(observer)); }

SearchResult Engine::Run() { return impl_->Run(); }

std::vector<SearchResult> RunSeedsSerial(const std::vector<RunConfig>& configs) {
  std::vector<SearchResult> out;
  out.reserve(configs.size());
  for (const auto& c : configs) out.push_back(Engine(c).Run());
  return out;
}

std::vector<SearchResult> RunSeeds(const std::vector<RunConfig>& configs) {
  std::vector<SearchResult> out(configs.size());
  std::vector<std::exception_ptr> errors(configs.size());
  const auto n = static_cast<int64_t>(configs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (int64_t i = 0; i < n; ++i) {
    try {
      out[static_cast<size_t>(i)] = Engine(configs[static_cast<size_t>(i)]).Run();
    } catch (...) {
      errors[static_cast<size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace wbfuzz
