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

#ifndef WBFUZZ_HARNESS_H_
#define WBFUZZ_HARNESS_H_

// In-process SUT harness. Fixture handlers are written against
// RequestContext, whose tracked operations behave exactly like the plain
// operations they stand for while recording heuristic values, taint
// sightings and discovery events into the harness' ExecutionTrace.
//
// Target ids have the form "{sut}:{site}:{outcome}", where a site is
// "{file}:{counter}" chosen by the fixture author.

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <stop_token>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "wbfuzz/db.h"
#include "wbfuzz/distance.h"
#include "wbfuzz/json.h"
#include "wbfuzz/schema.h"
#include "wbfuzz/sqlgen.h"
#include "wbfuzz/taint.h"

namespace wbfuzz {

struct HttpRequest {
  std::string verb;
  // Concrete path; segments are percent-encoded.
  std::string path;
  std::vector<std::pair<std::string, std::string>> query;
  std::vector<std::pair<std::string, std::string>> headers;
  std::optional<std::string> body;

  bool operator==(const HttpRequest&) const = default;
};

struct HttpResponse {
  int status = 200;
  Json body;  // null for an empty body
};

// Handlers throw this to answer with a non-2xx status on purpose.
class HttpError : public std::runtime_error {
 public:
  HttpError(int status, const std::string& message)
      : std::runtime_error(message), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

// An unexpected exception inside SUT code; surfaces as HTTP 500 with
// "{type}: {detail}" in the body.
class SutCrash : public std::runtime_error {
 public:
  SutCrash(const std::string& type, const std::string& detail)
      : std::runtime_error(type + ": " + detail) {}
};

// A stored row that cannot be loaded into its entity.
class EntityParseCrash : public SutCrash {
 public:
  EntityParseCrash(std::string table, Json key, const std::string& detail)
      : SutCrash("EntityParseException", detail),
        table_(std::move(table)),
        key_(std::move(key)) {}
  const std::string& table() const { return table_; }
  const Json& key() const { return key_; }

 private:
  std::string table_;
  Json key_;
};

// Raised inside background tasks once the kill switch fired.
class TaskInterrupted : public std::runtime_error {
 public:
  TaskInterrupted() : std::runtime_error("task interrupted") {}
};

enum class FaultKind { kServerError, kSchemaMismatch, kEntityParseCrash };

std::string FaultKindName(FaultKind kind);

struct FaultRecord {
  FaultKind kind = FaultKind::kServerError;
  std::string verb;
  std::string endpoint;  // path template
  // First line of the error message, or the mismatch description.
  std::string discriminator;
  int status = 0;
  size_t action_index = 0;

  // "{verb} {endpoint} {kind} {discriminator}": one fault per key.
  std::string DedupKey() const;
  bool operator==(const FaultRecord&) const = default;
};

struct DiscoveryEvent {
  size_t action_index = 0;
  DiscoveredInput input;

  bool operator==(const DiscoveryEvent&) const = default;
};

struct DtoSighting {
  size_t action_index = 0;
  DtoShape shape;
};

struct EntityCrashRecord {
  size_t action_index = 0;
  std::string table;
  Json key;
  std::string message;
};

struct ExecutionTrace {
  // Best h per target within this evaluation.
  std::map<std::string, double> heuristics;
  std::vector<TaintSighting> taint;
  std::vector<DiscoveryEvent> discoveries;
  std::vector<DtoSighting> dtos;
  std::vector<std::string> empty_selects;
  std::vector<EntityCrashRecord> entity_crashes;
  std::vector<FaultRecord> faults;
  std::set<std::string> covered_lines;
  std::vector<std::string> background_tasks;
  size_t interrupted_tasks = 0;
  std::chrono::nanoseconds slept{0};

  // Keeps the maximum per target. h is clamped into [0, 1].
  void Record(const std::string& target, double h);
  bool Empty() const;
};

struct HarnessOptions {
  double base = kDefaultBase;
  // Distances for collections, maps, enums, object equality, UUID/URI
  // parsing, DTO sightings and validation targets. When off, those ops only
  // report the taken outcome (h = 1) and a flat value for the other one.
  bool advanced = true;
  // Discovery of undeclared inputs through accessors and fake names.
  bool discovery = true;
  size_t fake_cap = 16;
  size_t heuristic_cap = 1024;
  std::chrono::milliseconds sleep_cap{1000};
};

class Harness;
class RequestContext;
class TaskContext;

using Handler = std::function<HttpResponse(RequestContext&)>;
using TaskBody = std::function<void(TaskContext&)>;

struct Route {
  std::string verb;
  std::string path;  // template with {var} slots
  Handler handler;
};

struct ScheduledTask {
  std::string name;
  std::chrono::milliseconds interval{1000};
  TaskBody run;
};

struct SutDescriptor {
  std::string id;
  std::string openapi;  // document text
  DocumentFormat format = DocumentFormat::kJson;
  std::vector<Route> routes;
  std::vector<TableSchema> tables;
  std::vector<EntityConstraintSet> entities;
  std::vector<ScheduledTask> scheduled;
  // Fills the baseline database.
  std::function<void(Database&)> seed;
  // Every line probe the handlers can hit.
  std::vector<std::string> probes;

  OpenApiDocument Document() const;
};

std::vector<std::string> FixtureNames();
// Throws ConfigError for unknown names.
std::shared_ptr<const SutDescriptor> LoadFixture(std::string_view name);

using ElementMap = std::map<Element, Element>;

// Text of a string element; other kinds render through ElementToString.
std::string AsText(const Element& e);

enum class CmpOp { kEq, kNe, kLt, kLe, kGt, kGe };

// Shared by handler and task contexts.
class SutContext {
 public:
  explicit SutContext(Harness& harness) : harness_(harness) {}
  virtual ~SutContext() = default;

  Database& db();
  // Empty results are reported as empty selects. Unknown tables throw
  // ConfigError.
  std::vector<Json> Select(const std::string& table, const Database::Filter& where = {});
  Database::InsertResult Insert(const std::string& table, Json values);
  // Loads a row into the named entity. Throws EntityParseCrash for NULL in
  // a primitive field or a value outside an enum field.
  Json LoadEntity(const std::string& entity, const Json& row);
  void Cover(const std::string& probe);

 protected:
  virtual void CheckInterrupted() const {}
  Harness& harness_;
};

class TaskContext : public SutContext {
 public:
  TaskContext(Harness& harness, std::stop_token stop)
      : SutContext(harness), stop_(std::move(stop)) {}

  // Waits min(requested, cap); throws TaskInterrupted when killed.
  std::chrono::milliseconds Sleep(std::chrono::milliseconds requested);
  bool stop_requested() const { return stop_.stop_requested(); }

 protected:
  void CheckInterrupted() const override;

 private:
  std::stop_token stop_;
};

class RequestContext : public SutContext {
 public:
  RequestContext(Harness& harness, const HttpRequest& request,
                 const ActionTemplate& tmpl, std::map<std::string, std::string> path_vars,
                 size_t action_index);

  const HttpRequest& request() const { return request_; }
  const ActionTemplate& action() const { return tmpl_; }

  // Accessors. Undeclared names are reported as discoveries.
  std::optional<std::string> PathParam(const std::string& name) const;
  std::optional<std::string> Param(const std::string& name);
  std::optional<std::string> Header(const std::string& name);
  // Every query parameter (first value wins) or header, as sent.
  ElementMap ParamMap() const;
  ElementMap HeaderMap() const;
  std::vector<Element> HeaderNames() const;
  // Parsed body; malformed JSON answers 400. Null when absent.
  Json Body() const;
  // Value at a dotted body path; undeclared paths are reported.
  Json BodyValue(const std::string& dotted);
  // Deserializes the body into `shape`: answers 400 on type errors and
  // reports the shape when the document left the body unspecified.
  Json ReadDto(const DtoShape& shape);
  // True iff every constraint holds, recursively. Registers
  // VALIDATE_{verb}:{path}_{dto}_true/false targets.
  bool Validate(const Json& dto, const DtoShape& shape);

  // Collections.
  bool CollContains(const std::string& site, std::span<const Element> xs, const Element& e);
  bool CollContainsAll(const std::string& site, std::span<const Element> xs,
                       std::span<const Element> ys);
  // Removes the first occurrence.
  bool CollRemove(const std::string& site, std::vector<Element>& xs, const Element& e);
  // Removes every element equal to some y.
  bool CollRemoveAll(const std::string& site, std::vector<Element>& xs,
                     std::span<const Element> ys);
  bool CollIsEmpty(const std::string& site, std::span<const Element> xs);

  // Maps. Outcomes are "null"/"nonnull" for lookups, "true"/"false" for
  // predicates. Monostate values count as null.
  std::optional<Element> MapGet(const std::string& site, const ElementMap& m, const Element& key);
  Element MapGetOrDefault(const std::string& site, const ElementMap& m, const Element& key,
                          const Element& fallback);
  bool MapContainsKey(const std::string& site, const ElementMap& m, const Element& key);
  bool MapContainsValue(const std::string& site, const ElementMap& m, const Element& value);
  std::optional<Element> MapRemove(const std::string& site, ElementMap& m, const Element& key);
  // Replaces only an existing key; returns the previous value.
  std::optional<Element> MapReplace(const std::string& site, ElementMap& m, const Element& key,
                                    const Element& value);

  // Index of `s` in `values`, or nullopt where valueOf would throw.
  std::optional<size_t> EnumValueOf(const std::string& site, std::span<const std::string> values,
                                    const std::string& s);
  // Equality dispatched on the runtime kinds of both operands.
  bool ObjEquals(const std::string& site, const Element& a, const Element& b);

  bool StrEquals(const std::string& site, const std::string& a, const std::string& b);
  bool StrStartsWith(const std::string& site, const std::string& s, const std::string& prefix);
  bool StrContains(const std::string& site, const std::string& s, const std::string& part);

  // Exception-free parsers; nullopt where the plain parser would throw.
  // Integers are 32-bit with an optional sign; floats use the general
  // decimal grammar (including inf and nan) with no surrounding spaces.
  std::optional<int64_t> ParseInt(const std::string& site, const std::string& s);
  std::optional<double> ParseFloat(const std::string& site, const std::string& s);
  // Canonical lower-case 8-4-4-4-12 form.
  std::optional<std::string> UuidFromString(const std::string& site, const std::string& s);
  std::optional<std::string> UriParse(const std::string& site, const std::string& s);
  std::optional<std::string> UrlParse(const std::string& site, const std::string& s);

  bool Compare(const std::string& site, double a, CmpOp op, double b);

  // Blocks for min(requested, cap).
  std::chrono::milliseconds Sleep(std::chrono::milliseconds requested);
  // Runs `body` on a background thread registered with the kill switch.
  void Spawn(const std::string& name, TaskBody body);

 private:
  std::string Target(const std::string& site, std::string_view outcome) const;
  void RecordOutcome(const std::string& site, bool result, double h_true, double h_false,
                     std::string_view t = "true", std::string_view f = "false");
  void Taint(const std::string& value, Specialization spec);
  // Tainted string members of `xs` learn `e` when it is a plain string.
  void TaintMembers(const std::string& site, std::span<const Element> xs, const Element& e);
  void Discover(InputLocation loc, const std::string& name, InferredType type = InferredType::kText);
  // Fake-name protocol: `items` holding a fake name reveals `key`.
  void CheckFakeNames(std::span<const Element> items, const Element& key);
  void CheckFakeOperands(const std::string& a, const std::string& b);
  double Flat() const;
  bool Advanced() const;

  const HttpRequest& request_;
  const ActionTemplate& tmpl_;
  std::map<std::string, std::string> path_vars_;
  size_t action_index_;
};

// Runs registered periodic tasks on a background thread while enabled.
class Scheduler {
 public:
  explicit Scheduler(Harness& harness) : harness_(harness) {}
  ~Scheduler() { SetEnabled(false); }

  void Register(ScheduledTask task);
  void SetEnabled(bool enabled);
  bool enabled() const { return thread_.joinable(); }
  size_t executions() const { return executions_.load(); }

 private:
  void Loop(std::stop_token stop);

  Harness& harness_;
  std::vector<ScheduledTask> tasks_;
  std::atomic<size_t> executions_{0};
  std::jthread thread_;
};

class Harness {
 public:
  explicit Harness(std::shared_ptr<const SutDescriptor> sut, HarnessOptions options = {});
  ~Harness();
  Harness(const Harness&) = delete;
  Harness& operator=(const Harness&) = delete;

  const SutDescriptor& sut() const { return *sut_; }
  const OpenApiDocument& document() const { return document_; }
  const HarnessOptions& options() const { return options_; }
  void set_options(const HarnessOptions& options) { options_ = options; }

  Scheduler& scheduler() { return scheduler_; }

  // Dispatches one request. `tmpl` is the caller's current view of the
  // endpoint, used to decide what counts as undeclared; null means the
  // document's template. Handler exceptions become 4xx/500 responses.
  HttpResponse Call(const HttpRequest& request, const ActionTemplate* tmpl = nullptr,
                    size_t action_index = 0);
  // SQL setup action.
  Database::InsertResult Insert(const std::string& table, Json values);

  // Interrupts background tasks, restores the baseline database and clears
  // the trace.
  void Reset();
  // Interrupts and joins every background task.
  void StopBackgroundTasks();
  size_t running_tasks() const;
  // Stops background tasks, then returns and clears the trace.
  ExecutionTrace TakeTrace();
  ExecutionTrace PeekTrace() const;

  Database& db() { return db_; }
  const Database& baseline() const { return baseline_; }

  // Used by contexts.
  void Record(const std::string& target, double h);
  template <typename Fn>
  void WithTrace(Fn&& fn) {
    std::lock_guard lock(trace_mu_);
    fn(trace_);
  }
  void SpawnTask(const std::string& name, TaskBody body);
  const EntityConstraintSet& Entity(const std::string& name) const;
  const EntityBinding& Binding(const std::string& entity) const;

 private:
  std::shared_ptr<const SutDescriptor> sut_;
  HarnessOptions options_;
  OpenApiDocument document_;
  Database baseline_;
  Database db_;
  std::map<std::string, EntityBinding> bindings_;

  mutable std::mutex trace_mu_;
  ExecutionTrace trace_;

  mutable std::mutex tasks_mu_;
  std::vector<std::jthread> tasks_;
  std::shared_ptr<std::atomic<size_t>> live_tasks_ = std::make_shared<std::atomic<size_t>>(0);

  Scheduler scheduler_;
};

// Interruptible wait shared by tasks and the scheduler.
bool SleepUnlessStopped(std::chrono::milliseconds d, const std::stop_token& stop);

std::string PercentEncode(std::string_view s);
std::string PercentDecode(std::string_view s);

}  // namespace wbfuzz

#endif  // WBFUZZ_HARNESS_H_
