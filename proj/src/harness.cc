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

#include "wbfuzz/harness.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "wbfuzz/errors.h"
#include "wbfuzz/validation.h"

namespace wbfuzz {
namespace {

bool IEquals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

const std::string* AsString(const Element& e) { return std::get_if<std::string>(&e); }

std::vector<Element> Keys(const ElementMap& m) {
  std::vector<Element> out;
  out.reserve(m.size());
  for (const auto& [k, v] : m) out.push_back(k);
  return out;
}

std::vector<Element> Values(const ElementMap& m) {
  std::vector<Element> out;
  out.reserve(m.size());
  for (const auto& [k, v] : m) out.push_back(v);
  return out;
}

// Every element is a string; used to build enum specializations.
std::optional<std::vector<std::string>> AllStrings(std::span<const Element> xs) {
  if (xs.empty()) return std::nullopt;
  std::vector<std::string> out;
  for (const auto& x : xs) {
    const std::string* s = AsString(x);
    if (s == nullptr || IsTainted(*s)) return std::nullopt;
    if (std::find(out.begin(), out.end(), *s) == out.end()) out.push_back(*s);
  }
  return out;
}

Specialization Spec(SpecializationKind kind, std::string text = {},
                    std::vector<std::string> values = {}) {
  Specialization s;
  s.kind = kind;
  s.text = std::move(text);
  s.values = std::move(values);
  return s;
}

bool IsHex(char c) { return std::isxdigit(static_cast<unsigned char>(c)) != 0; }
bool IsDigit(char c) { return c >= '0' && c <= '9'; }

// Characters that may not appear anywhere in an absolute URI.
bool IsUriForbidden(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u <= 0x20 || u >= 0x7f || std::string_view("\"<>\\^`{|}").find(c) != std::string_view::npos;
}

struct UriParts {
  bool ok = false;
  double distance = 0;
  std::string scheme;
  std::string rest;
};

UriParts CheckUri(std::string_view s) {
  UriParts p;
  const size_t colon = s.find(':');
  double d = 0;
  if (colon == std::string_view::npos || colon == 0) {
    d += 1;
  } else {
    p.scheme = std::string(s.substr(0, colon));
    p.rest = std::string(s.substr(colon + 1));
    if (!std::isalpha(static_cast<unsigned char>(p.scheme[0]))) d += 1;
    for (char c : p.scheme.substr(1)) {
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '.' && c != '-') d += 1;
    }
    if (p.rest.empty()) d += 1;
  }
  for (char c : s) {
    if (IsUriForbidden(c)) d += 1;
  }
  p.distance = d;
  p.ok = d == 0;
  return p;
}

}  // namespace

// ---------------------------------------------------------------------------
// Trace and records

std::string FaultKindName(FaultKind kind) {
  switch (kind) {
    case FaultKind::kServerError:
      return "ServerError500";
    case FaultKind::kSchemaMismatch:
      return "SchemaMismatch";
    case FaultKind::kEntityParseCrash:
      return "EntityParseCrash";
  }
  return "?";
}

std::string FaultRecord::DedupKey() const {
  return verb + " " + endpoint + " " + FaultKindName(kind) + " " + discriminator;
}

void ExecutionTrace::Record(const std::string& target, double h) {
  h = std::clamp(std::isnan(h) ? 0.0 : h, 0.0, 1.0);
  auto [it, inserted] = heuristics.emplace(target, h);
  if (!inserted) it->second = std::max(it->second, h);
}

bool ExecutionTrace::Empty() const {
  return heuristics.empty() && taint.empty() && discoveries.empty() && dtos.empty() &&
         empty_selects.empty() && entity_crashes.empty() && faults.empty() &&
         covered_lines.empty() && background_tasks.empty() && interrupted_tasks == 0 &&
         slept.count() == 0;
}

OpenApiDocument SutDescriptor::Document() const { return ParseOpenApi(openapi, format); }

std::string AsText(const Element& e) {
  if (const std::string* s = AsString(e)) return *s;
  return ElementToString(e);
}

std::string PercentEncode(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (char c : s) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u) || c == '-' || c == '.' || c == '_' || c == '~') {
      out += c;
    } else {
      out += '%';
      out += kHex[u >> 4];
      out += kHex[u & 15];
    }
  }
  return out;
}

std::string PercentDecode(std::string_view s) {
  std::string out;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '%' && i + 2 < s.size() && IsHex(s[i + 1]) && IsHex(s[i + 2])) {
      out += static_cast<char>(std::stoi(std::string(s.substr(i + 1, 2)), nullptr, 16));
      i += 2;
    } else {
      out += s[i];
    }
  }
  return out;
}

bool SleepUnlessStopped(std::chrono::milliseconds d, const std::stop_token& stop) {
  std::mutex mu;
  std::condition_variable_any cv;
  std::unique_lock lock(mu);
  cv.wait_for(lock, stop, d, [] { return false; });
  return !stop.stop_requested();
}

// ---------------------------------------------------------------------------
// SutContext

Database& SutContext::db() {
  CheckInterrupted();
  return harness_.db();
}

std::vector<Json> SutContext::Select(const std::string& table, const Database::Filter& where) {
  CheckInterrupted();
  std::vector<Json> rows = harness_.db().Select(table, where);
  if (rows.empty()) {
    harness_.WithTrace([&](ExecutionTrace& t) {
      if (std::find(t.empty_selects.begin(), t.empty_selects.end(), table) ==
          t.empty_selects.end()) {
        t.empty_selects.push_back(table);
      }
    });
  }
  return rows;
}

Database::InsertResult SutContext::Insert(const std::string& table, Json values) {
  CheckInterrupted();
  return harness_.db().Insert(table, std::move(values));
}

Json SutContext::LoadEntity(const std::string& entity, const Json& row) {
  CheckInterrupted();
  const EntityConstraintSet& set = harness_.Entity(entity);
  const EntityBinding& binding = harness_.Binding(entity);
  const TableSchema& schema = harness_.db().Schema(binding.table);
  Json key;
  if (const Column* pk = schema.PrimaryKey(); pk != nullptr && row.contains(pk->name)) {
    key = row[pk->name];
  }
  Json out = Json::object();
  for (size_t i = 0; i < set.fields.size(); ++i) {
    const EntityField& f = set.fields[i];
    const std::string& column = binding.fields[i].column;
    Json value = row.contains(column) ? row[column] : Json();
    if (f.primitive && value.is_null()) {
      throw EntityParseCrash(binding.table, key,
                             "null value for primitive field " + set.name + "." + f.name);
    }
    if (!f.enum_values.empty() && !value.is_null()) {
      const bool member = value.is_string() &&
                          std::find(f.enum_values.begin(), f.enum_values.end(),
                                    value.get<std::string>()) != f.enum_values.end();
      if (!member) {
        throw EntityParseCrash(binding.table, key,
                               "no enum constant for " + set.name + "." + f.name);
      }
    }
    out[f.name] = std::move(value);
  }
  return out;
}

void SutContext::Cover(const std::string& probe) {
  CheckInterrupted();
  harness_.WithTrace([&](ExecutionTrace& t) {
    t.covered_lines.insert(probe);
    t.Record(harness_.sut().id + ":" + probe + ":hit", 1.0);
  });
}

// ---------------------------------------------------------------------------
// TaskContext

void TaskContext::CheckInterrupted() const {
  if (stop_.stop_requested()) throw TaskInterrupted();
}

std::chrono::milliseconds TaskContext::Sleep(std::chrono::milliseconds requested) {
  CheckInterrupted();
  const auto actual = std::clamp(requested, std::chrono::milliseconds(0),
                                 harness_.options().sleep_cap);
  if (!SleepUnlessStopped(actual, stop_)) throw TaskInterrupted();
  return actual;
}

// ---------------------------------------------------------------------------
// RequestContext

RequestContext::RequestContext(Harness& harness, const HttpRequest& request,
                               const ActionTemplate& tmpl,
                               std::map<std::string, std::string> path_vars, size_t action_index)
    : SutContext(harness),
      request_(request),
      tmpl_(tmpl),
      path_vars_(std::move(path_vars)),
      action_index_(action_index) {}

std::string RequestContext::Target(const std::string& site, std::string_view outcome) const {
  std::string t = harness_.sut().id;
  t += ':';
  t += site;
  t += ':';
  t += outcome;
  return t;
}

double RequestContext::Flat() const {
  return Scale(Distance::Max(), harness_.options().base);
}

bool RequestContext::Advanced() const { return harness_.options().advanced; }

void RequestContext::RecordOutcome(const std::string& site, bool result, double h_true,
                                   double h_false, std::string_view t, std::string_view f) {
  if (result) {
    h_true = 1.0;
    if (h_false >= 1.0) h_false = Flat();
  } else {
    h_false = 1.0;
    if (h_true >= 1.0) h_true = Flat();
  }
  harness_.WithTrace([&](ExecutionTrace& trace) {
    trace.Record(Target(site, t), h_true);
    trace.Record(Target(site, f), h_false);
  });
}

void RequestContext::Taint(const std::string& value, Specialization spec) {
  const auto id = RecognizeTaint(value);
  if (!id) return;
  harness_.WithTrace([&](ExecutionTrace& t) {
    for (const auto& s : t.taint) {
      if (s.taint_id == *id && s.specialization.SameAs(spec)) return;
    }
    t.taint.push_back(TaintSighting{*id, std::move(spec)});
  });
}

void RequestContext::TaintMembers(const std::string& site, std::span<const Element> xs,
                                  const Element& e) {
  const std::string* wanted = AsString(e);
  if (wanted == nullptr || IsTainted(*wanted)) return;
  for (const auto& x : xs) {
    if (const std::string* s = AsString(x)) {
      Specialization spec = Spec(SpecializationKind::kConstantEquals, *wanted);
      spec.source_target = Target(site, "true");
      Taint(*s, std::move(spec));
    }
  }
}

void RequestContext::Discover(InputLocation loc, const std::string& name, InferredType type) {
  if (!harness_.options().discovery || name.empty() || IsReservedName(name)) return;
  if (tmpl_.Knows(loc, name)) return;
  DiscoveryEvent e{action_index_, DiscoveredInput{loc, name, type}};
  harness_.WithTrace([&](ExecutionTrace& t) {
    if (std::find(t.discoveries.begin(), t.discoveries.end(), e) == t.discoveries.end()) {
      t.discoveries.push_back(std::move(e));
    }
  });
}

void RequestContext::CheckFakeNames(std::span<const Element> items, const Element& key) {
  if (!harness_.options().discovery || items.size() > harness_.options().fake_cap) return;
  const std::string* k = AsString(key);
  if (k == nullptr) return;
  bool param = false;
  bool header = false;
  for (const auto& item : items) {
    const std::string* s = AsString(item);
    if (s == nullptr) continue;
    param = param || *s == kFakeParam;
    header = header || IEquals(*s, kFakeHeader);
  }
  if (param) Discover(InputLocation::kQuery, *k);
  if (header) Discover(InputLocation::kHeader, *k);
}

void RequestContext::CheckFakeOperands(const std::string& a, const std::string& b) {
  if (!harness_.options().discovery) return;
  for (int flip = 0; flip < 2; ++flip) {
    const std::string& x = flip ? b : a;
    const std::string& y = flip ? a : b;
    if (x == kFakeParam) Discover(InputLocation::kQuery, y);
    if (IEquals(x, kFakeHeader)) Discover(InputLocation::kHeader, y);
  }
}

// Accessors -----------------------------------------------------------------

std::optional<std::string> RequestContext::PathParam(const std::string& name) const {
  auto it = path_vars_.find(name);
  if (it == path_vars_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string> RequestContext::Param(const std::string& name) {
  Discover(InputLocation::kQuery, name);
  for (const auto& [k, v] : request_.query) {
    if (k == name) return v;
  }
  return std::nullopt;
}

std::optional<std::string> RequestContext::Header(const std::string& name) {
  Discover(InputLocation::kHeader, name);
  for (const auto& [k, v] : request_.headers) {
    if (IEquals(k, name)) return v;
  }
  return std::nullopt;
}

ElementMap RequestContext::ParamMap() const {
  ElementMap m;
  for (const auto& [k, v] : request_.query) m.emplace(k, v);
  return m;
}

ElementMap RequestContext::HeaderMap() const {
  ElementMap m;
  for (const auto& [k, v] : request_.headers) m.emplace(k, v);
  return m;
}

std::vector<Element> RequestContext::HeaderNames() const {
  std::vector<Element> out;
  for (const auto& [k, v] : request_.headers) out.emplace_back(k);
  return out;
}

Json RequestContext::Body() const {
  if (!request_.body || request_.body->empty()) return Json();
  Json j = Json::parse(*request_.body, nullptr, false);
  if (j.is_discarded()) throw HttpError(400, "malformed JSON body");
  return j;
}

Json RequestContext::BodyValue(const std::string& dotted) {
  Discover(InputLocation::kBody, dotted);
  Json current = Body();
  size_t start = 0;
  while (true) {
    const size_t dot = dotted.find('.', start);
    const std::string part = dotted.substr(start, dot == std::string::npos ? dot : dot - start);
    if (!current.is_object() || !current.contains(part)) return Json();
    current = Json(current[part]);
    if (dot == std::string::npos) return current;
    start = dot + 1;
  }
}

namespace {

void CheckDtoTypes(const Json& value, const DtoShape& shape, const std::string& prefix) {
  if (!value.is_object()) throw HttpError(400, "cannot deserialize " + shape.name);
  for (const auto& f : shape.fields) {
    if (!value.contains(f.name) || value[f.name].is_null()) continue;
    const Json& v = value[f.name];
    const std::string where = prefix + f.name;
    if (f.nested) {
      CheckDtoTypes(v, *f.nested, where + ".");
      continue;
    }
    bool ok = true;
    switch (f.type.kind) {
      case GeneTemplate::Kind::kInteger:
      case GeneTemplate::Kind::kLong:
        ok = v.is_number_integer();
        break;
      case GeneTemplate::Kind::kFloat:
        ok = v.is_number();
        break;
      case GeneTemplate::Kind::kBoolean:
        ok = v.is_boolean();
        break;
      case GeneTemplate::Kind::kObject:
        ok = v.is_object();
        break;
      case GeneTemplate::Kind::kArray:
        ok = v.is_array();
        break;
      default:
        ok = v.is_string();
        break;
    }
    if (!ok) throw HttpError(400, "cannot deserialize field " + where);
  }
}

}  // namespace

Json RequestContext::ReadDto(const DtoShape& shape) {
  if (Advanced() && (!tmpl_.body || tmpl_.body_opaque)) {
    harness_.WithTrace([&](ExecutionTrace& t) {
      for (const auto& d : t.dtos) {
        if (d.action_index == action_index_ && d.shape.name == shape.name) return;
      }
      t.dtos.push_back(DtoSighting{action_index_, shape});
    });
  }
  Json body = Body();
  if (body.is_null()) throw HttpError(400, "required request body is missing");
  CheckDtoTypes(body, shape, "");
  return body;
}

namespace {

struct ValidationTally {
  std::vector<Distance> valid;
  std::vector<Distance> invalid;
  bool satisfied = true;
  std::vector<std::pair<std::string, Specialization>> taints;
};

void Tally(const Json& dto, const DtoShape& shape, ValidationTally& out) {
  for (const auto& f : shape.fields) {
    const Json value = dto.is_object() && dto.contains(f.name) ? Json(dto[f.name]) : Json();
    for (const auto& c : f.constraints) {
      out.satisfied = out.satisfied && Satisfies(c, value);
      if (!HasDistance(c.kind)) continue;
      const ClauseDistance d = ConstraintDistance(c, value);
      out.valid.push_back(d.valid);
      out.invalid.push_back(d.invalid);
      if (value.is_string()) {
        if (c.kind == ConstraintKind::kPattern) {
          out.taints.emplace_back(value.get<std::string>(),
                                  Spec(SpecializationKind::kRegexMatch, c.pattern));
        } else if (c.kind == ConstraintKind::kEnumMembership) {
          out.taints.emplace_back(value.get<std::string>(),
                                  Spec(SpecializationKind::kEnumMember, {}, c.values));
        }
      }
    }
    if (f.nested && value.is_object()) Tally(value, *f.nested, out);
  }
}

}  // namespace

bool RequestContext::Validate(const Json& dto, const DtoShape& shape) {
  ValidationTally tally;
  Tally(dto, shape, tally);
  const bool result = tally.satisfied;
  if (Advanced()) {
    const std::string prefix = "VALIDATE_" + tmpl_.verb + ":" + tmpl_.path + "_" + shape.name;
    const double base = harness_.options().base;
    double h_true = result ? 1.0 : Scale(Conjunction(tally.valid), base);
    double h_false = result ? Scale(Disjunction(tally.invalid), base) : 1.0;
    // Constraints without distances can fail while every distance is 0.
    if (!result && h_true >= 1.0) h_true = Scale(Distance::Of(1.0), base);
    if (result && h_false >= 1.0) h_false = Scale(Distance::Of(1.0), base);
    harness_.WithTrace([&](ExecutionTrace& t) {
      t.Record(prefix + "_true", h_true);
      t.Record(prefix + "_false", h_false);
    });
    for (auto& [value, spec] : tally.taints) {
      spec.source_target = prefix + "_true";
      Taint(value, std::move(spec));
    }
  }
  return result;
}

// Collections ----------------------------------------------------------------

bool RequestContext::CollContains(const std::string& site, std::span<const Element> xs,
                                  const Element& e) {
  size_t matches = 0;
  for (const auto& x : xs) matches += ElementEquals(x, e) ? 1 : 0;
  const bool result = matches > 0;
  CheckFakeNames(xs, e);
  if (!Advanced() || xs.size() > harness_.options().heuristic_cap) {
    RecordOutcome(site, result, Flat(), Flat());
    return result;
  }
  const double base = harness_.options().base;
  RecordOutcome(site, result, Scale(ContainsDistance(e, xs), base),
                Scale(Distance::Of(static_cast<double>(matches)), base));
  TaintMembers(site, xs, e);
  if (const std::string* s = AsString(e)) {
    if (auto values = AllStrings(xs)) {
      Specialization spec = Spec(SpecializationKind::kEnumMember, {}, *values);
      spec.source_target = Target(site, "true");
      Taint(*s, std::move(spec));
    }
  }
  return result;
}

bool RequestContext::CollContainsAll(const std::string& site, std::span<const Element> xs,
                                     std::span<const Element> ys) {
  bool result = true;
  for (const auto& y : ys) {
    result = result && std::any_of(xs.begin(), xs.end(),
                                   [&](const Element& x) { return ElementEquals(x, y); });
    CheckFakeNames(xs, y);
  }
  if (!Advanced() || xs.size() > harness_.options().heuristic_cap) {
    RecordOutcome(site, result, Flat(), Flat());
    return result;
  }
  const double base = harness_.options().base;
  RecordOutcome(site, result, ContainsAllHeuristic(ys, xs, base), Scale(Distance::Of(1.0), base));
  for (const auto& y : ys) TaintMembers(site, xs, y);
  const auto values = AllStrings(xs);
  for (const auto& y : ys) {
    const std::string* s = AsString(y);
    if (s == nullptr || !values) continue;
    Specialization spec = Spec(SpecializationKind::kEnumMember, {}, *values);
    spec.source_target = Target(site, "true");
    Taint(*s, std::move(spec));
  }
  return result;
}

bool RequestContext::CollRemove(const std::string& site, std::vector<Element>& xs,
                                const Element& e) {
  const bool result = CollContains(site, xs, e);
  if (result) {
    xs.erase(std::find_if(xs.begin(), xs.end(),
                          [&](const Element& x) { return ElementEquals(x, e); }));
  }
  return result;
}

bool RequestContext::CollRemoveAll(const std::string& site, std::vector<Element>& xs,
                                   std::span<const Element> ys) {
  auto hit = [&](const Element& x) {
    return std::any_of(ys.begin(), ys.end(), [&](const Element& y) { return ElementEquals(x, y); });
  };
  const bool result = std::any_of(xs.begin(), xs.end(), hit);
  for (const auto& y : ys) CheckFakeNames(xs, y);
  if (!Advanced() || xs.size() > harness_.options().heuristic_cap) {
    RecordOutcome(site, result, Flat(), Flat());
  } else {
    const double base = harness_.options().base;
    RecordOutcome(site, result, Scale(RemoveAllDistance(ys, xs), base),
                  Scale(Distance::Of(1.0), base));
  }
  std::erase_if(xs, hit);
  return result;
}

bool RequestContext::CollIsEmpty(const std::string& site, std::span<const Element> xs) {
  const bool result = xs.empty();
  if (!Advanced()) {
    RecordOutcome(site, result, Flat(), Flat());
    return result;
  }
  const double base = harness_.options().base;
  RecordOutcome(site, result, Scale(Distance::Of(static_cast<double>(xs.size())), base),
                Scale(Distance::Of(1.0), base));
  return result;
}

// Maps ------------------------------------------------------------------------

namespace {

bool IsNull(const Element& e) { return std::holds_alternative<std::monostate>(e); }

}  // namespace

std::optional<Element> RequestContext::MapGet(const std::string& site, const ElementMap& m,
                                              const Element& key) {
  auto it = m.find(key);
  const bool found = it != m.end() && !IsNull(it->second);
  const std::vector<Element> keys = Keys(m);
  CheckFakeNames(keys, key);
  if (!Advanced() || m.size() > harness_.options().heuristic_cap) {
    RecordOutcome(site, found, Flat(), Flat(), "nonnull", "null");
  } else {
    const double base = harness_.options().base;
    // A present key holding null is one step away.
    const Distance d = it != m.end() ? Distance::Of(1.0) : ContainsDistance(key, keys);
    RecordOutcome(site, found, Scale(d, base), Scale(Distance::Of(1.0), base), "nonnull", "null");
    if (const std::string* s = AsString(key)) {
      if (auto values = AllStrings(keys)) {
        Specialization spec = Spec(SpecializationKind::kEnumMember, {}, *values);
        spec.source_target = Target(site, "nonnull");
        Taint(*s, std::move(spec));
      }
    }
  }
  if (!found) return std::nullopt;
  return it->second;
}

Element RequestContext::MapGetOrDefault(const std::string& site, const ElementMap& m,
                                        const Element& key, const Element& fallback) {
  const bool has = MapContainsKey(site, m, key);
  return has ? m.at(key) : fallback;
}

bool RequestContext::MapContainsKey(const std::string& site, const ElementMap& m,
                                    const Element& key) {
  const bool result = m.count(key) > 0;
  const std::vector<Element> keys = Keys(m);
  CheckFakeNames(keys, key);
  if (!Advanced() || m.size() > harness_.options().heuristic_cap) {
    RecordOutcome(site, result, Flat(), Flat());
    return result;
  }
  const double base = harness_.options().base;
  RecordOutcome(site, result, Scale(ContainsDistance(key, keys), base),
                Scale(Distance::Of(1.0), base));
  if (const std::string* s = AsString(key)) {
    if (auto values = AllStrings(keys)) {
      Specialization spec = Spec(SpecializationKind::kEnumMember, {}, *values);
      spec.source_target = Target(site, "true");
      Taint(*s, std::move(spec));
    }
  }
  return result;
}

bool RequestContext::MapContainsValue(const std::string& site, const ElementMap& m,
                                      const Element& value) {
  const std::vector<Element> values = Values(m);
  const bool result = std::any_of(values.begin(), values.end(),
                                  [&](const Element& v) { return ElementEquals(v, value); });
  CheckFakeNames(values, value);
  if (!Advanced() || m.size() > harness_.options().heuristic_cap) {
    RecordOutcome(site, result, Flat(), Flat());
    return result;
  }
  const double base = harness_.options().base;
  RecordOutcome(site, result, Scale(ContainsDistance(value, values), base),
                Scale(Distance::Of(1.0), base));
  TaintMembers(site, values, value);
  if (const std::string* s = AsString(value)) {
    if (auto strings = AllStrings(values)) {
      Specialization spec = Spec(SpecializationKind::kEnumMember, {}, *strings);
      spec.source_target = Target(site, "true");
      Taint(*s, std::move(spec));
    }
  }
  return result;
}

std::optional<Element> RequestContext::MapRemove(const std::string& site, ElementMap& m,
                                                 const Element& key) {
  auto result = MapGet(site, m, key);
  m.erase(key);
  return result;
}

std::optional<Element> RequestContext::MapReplace(const std::string& site, ElementMap& m,
                                                  const Element& key, const Element& value) {
  if (!MapContainsKey(site, m, key)) return std::nullopt;
  Element previous = m[key];
  m[key] = value;
  if (IsNull(previous)) return std::nullopt;
  return previous;
}

// Enums and equality ------------------------------------------------------------

std::optional<size_t> RequestContext::EnumValueOf(const std::string& site,
                                                  std::span<const std::string> values,
                                                  const std::string& s) {
  auto it = std::find(values.begin(), values.end(), s);
  const bool ok = it != values.end();
  std::vector<Element> xs(values.begin(), values.end());
  CheckFakeNames(xs, s);
  if (!Advanced()) {
    RecordOutcome(site, ok, Flat(), Flat(), "ok", "error");
  } else {
    const double base = harness_.options().base;
    RecordOutcome(site, ok, Scale(ContainsDistance(s, xs), base), Scale(Distance::Of(1.0), base),
                  "ok", "error");
    Specialization spec = Spec(SpecializationKind::kEnumMember, {},
                               std::vector<std::string>(values.begin(), values.end()));
    spec.source_target = Target(site, "ok");
    if (!values.empty()) Taint(s, std::move(spec));
  }
  if (!ok) return std::nullopt;
  return static_cast<size_t>(it - values.begin());
}

bool RequestContext::ObjEquals(const std::string& site, const Element& a, const Element& b) {
  const bool result = ElementEquals(a, b);
  const std::string* sa = AsString(a);
  const std::string* sb = AsString(b);
  if (sa && sb) CheckFakeOperands(*sa, *sb);
  if (!Advanced()) {
    RecordOutcome(site, result, Flat(), Flat());
    return result;
  }
  const double base = harness_.options().base;
  RecordOutcome(site, result, Scale(ElementDistance(a, b), base), Scale(Distance::Of(1.0), base));
  if (sa && sb) {
    Specialization to_b = Spec(SpecializationKind::kConstantEquals, *sb);
    to_b.source_target = Target(site, "true");
    if (!IsTainted(*sb)) Taint(*sa, to_b);
    Specialization to_a = Spec(SpecializationKind::kConstantEquals, *sa);
    to_a.source_target = to_b.source_target;
    if (!IsTainted(*sa)) Taint(*sb, to_a);
  }
  return result;
}

// Strings ---------------------------------------------------------------------

bool RequestContext::StrEquals(const std::string& site, const std::string& a,
                               const std::string& b) {
  const bool result = a == b;
  CheckFakeOperands(a, b);
  const double base = harness_.options().base;
  RecordOutcome(site, result, Scale(StringEqDistance(a, b), base), Scale(Distance::Of(1.0), base));
  const std::string source = Target(site, "true");
  if (!IsTainted(b)) {
    Specialization s = Spec(SpecializationKind::kConstantEquals, b);
    s.source_target = source;
    Taint(a, std::move(s));
  }
  if (!IsTainted(a)) {
    Specialization s = Spec(SpecializationKind::kConstantEquals, a);
    s.source_target = source;
    Taint(b, std::move(s));
  }
  return result;
}

bool RequestContext::StrStartsWith(const std::string& site, const std::string& s,
                                   const std::string& prefix) {
  const bool result = s.compare(0, prefix.size(), prefix) == 0 && s.size() >= prefix.size();
  CheckFakeOperands(s, prefix);
  const double base = harness_.options().base;
  const std::string_view head = std::string_view(s).substr(0, prefix.size());
  RecordOutcome(site, result, Scale(StringEqDistance(head, prefix), base),
                Scale(Distance::Of(1.0), base));
  if (!IsTainted(prefix)) {
    Specialization spec = Spec(SpecializationKind::kConstantPrefix, prefix);
    spec.source_target = Target(site, "true");
    Taint(s, std::move(spec));
  }
  return result;
}

bool RequestContext::StrContains(const std::string& site, const std::string& s,
                                 const std::string& part) {
  const bool result = s.find(part) != std::string::npos;
  const double base = harness_.options().base;
  Distance d = Distance::Zero();
  if (!result) {
    if (s.size() < part.size()) {
      d = StringEqDistance(s, part);
    } else if (s.size() > harness_.options().heuristic_cap) {
      d = Distance::Of(1.0);
    } else {
      d = Distance::Max();
      for (size_t i = 0; i + part.size() <= s.size(); ++i) {
        d = std::min(d, StringEqDistance(std::string_view(s).substr(i, part.size()), part));
      }
    }
  }
  RecordOutcome(site, result, Scale(d, base), Scale(Distance::Of(1.0), base));
  if (!IsTainted(part)) {
    Specialization spec = Spec(SpecializationKind::kConstantEquals, part);
    spec.source_target = Target(site, "true");
    Taint(s, std::move(spec));
  }
  return result;
}

// Parsers -----------------------------------------------------------------------

std::optional<int64_t> RequestContext::ParseInt(const std::string& site, const std::string& s) {
  std::string_view body = s;
  if (body.size() > 1 && body[0] == '+' && IsDigit(body[1])) body.remove_prefix(1);
  int64_t value = 0;
  auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), value);
  const bool ok = ec == std::errc() && ptr == body.data() + body.size() &&
                  value >= std::numeric_limits<int32_t>::min() &&
                  value <= std::numeric_limits<int32_t>::max();
  double d = 0;
  if (!ok) {
    size_t digits = 0;
    for (size_t i = 0; i < s.size(); ++i) {
      const bool sign = i == 0 && (s[i] == '-' || s[i] == '+');
      if (IsDigit(s[i])) {
        ++digits;
      } else if (!sign) {
        d += 1;
      }
    }
    if (digits == 0) d += 1;
    if (d == 0) d = 1;  // out of range
  }
  const double base = harness_.options().base;
  RecordOutcome(site, ok, Scale(Distance::Of(d), base), Scale(Distance::Of(1.0), base), "ok",
                "error");
  Specialization spec = Spec(SpecializationKind::kIntegerFormat);
  spec.source_target = Target(site, "ok");
  Taint(s, std::move(spec));
  if (!ok) return std::nullopt;
  return value;
}

std::optional<double> RequestContext::ParseFloat(const std::string& site, const std::string& s) {
  std::string_view body = s;
  if (body.size() > 1 && body[0] == '+' && body[1] != '-' && body[1] != '+') body.remove_prefix(1);
  double value = 0;
  auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), value,
                                   std::chars_format::general);
  // Overflow and underflow still parse (to infinity or zero).
  const bool ok = (ec == std::errc() || ec == std::errc::result_out_of_range) &&
                  ptr == body.data() + body.size() && !body.empty();
  if (ok && ec == std::errc::result_out_of_range) value = std::strtod(std::string(body).c_str(), nullptr);
  double d = 0;
  if (!ok) {
    size_t digits = 0;
    for (char c : s) {
      if (IsDigit(c)) {
        ++digits;
      } else if (std::string_view(".eE+-").find(c) == std::string_view::npos) {
        d += 1;
      }
    }
    if (digits == 0) d += 1;
    if (d == 0) d = 1;
  }
  const double base = harness_.options().base;
  RecordOutcome(site, ok, Scale(Distance::Of(d), base), Scale(Distance::Of(1.0), base), "ok",
                "error");
  Specialization spec = Spec(SpecializationKind::kFloatFormat);
  spec.source_target = Target(site, "ok");
  Taint(s, std::move(spec));
  if (!ok) return std::nullopt;
  return value;
}

std::optional<std::string> RequestContext::UuidFromString(const std::string& site,
                                                          const std::string& s) {
  double d = kCharacterPenalty *
             static_cast<double>(s.size() > 36 ? s.size() - 36 : 36 - s.size());
  for (size_t i = 0; i < std::min<size_t>(s.size(), 36); ++i) {
    const bool dash = i == 8 || i == 13 || i == 18 || i == 23;
    if (dash ? s[i] != '-' : !IsHex(s[i])) d += 1;
  }
  const bool ok = d == 0;
  const double base = harness_.options().base;
  if (Advanced()) {
    RecordOutcome(site, ok, Scale(Distance::Of(d), base), Scale(Distance::Of(1.0), base), "ok",
                  "error");
    Specialization spec = Spec(SpecializationKind::kUuidFormat);
    spec.source_target = Target(site, "ok");
    Taint(s, std::move(spec));
  } else {
    RecordOutcome(site, ok, Flat(), Flat(), "ok", "error");
  }
  if (!ok) return std::nullopt;
  std::string out = s;
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::optional<std::string> RequestContext::UriParse(const std::string& site,
                                                    const std::string& s) {
  const UriParts p = CheckUri(s);
  const double base = harness_.options().base;
  if (Advanced()) {
    RecordOutcome(site, p.ok, Scale(Distance::Of(p.distance), base),
                  Scale(Distance::Of(1.0), base), "ok", "error");
    Specialization spec = Spec(SpecializationKind::kUriFormat);
    spec.source_target = Target(site, "ok");
    Taint(s, std::move(spec));
  } else {
    RecordOutcome(site, p.ok, Flat(), Flat(), "ok", "error");
  }
  if (!p.ok) return std::nullopt;
  return s;
}

std::optional<std::string> RequestContext::UrlParse(const std::string& site,
                                                    const std::string& s) {
  const UriParts p = CheckUri(s);
  double d = p.distance;
  std::string scheme = p.scheme;
  for (char& c : scheme) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  const bool network = scheme == "http" || scheme == "https" || scheme == "ftp";
  if (!network && scheme != "file") {
    Distance best = Distance::Max();
    for (std::string_view known : {"http", "https", "ftp", "file"}) {
      best = std::min(best, StringEqDistance(scheme, known));
    }
    d += std::min(best.value(), kCharacterPenalty) + 1;
  } else if (network) {
    if (p.rest.rfind("//", 0) != 0) {
      d += 1;
    } else {
      const std::string_view authority = std::string_view(p.rest).substr(2);
      const size_t end = authority.find_first_of("/?#");
      if (authority.substr(0, end).empty()) d += 1;
    }
  }
  const bool ok = d == 0;
  const double base = harness_.options().base;
  if (Advanced()) {
    RecordOutcome(site, ok, Scale(Distance::Of(d), base), Scale(Distance::Of(1.0), base), "ok",
                  "error");
    Specialization spec = Spec(SpecializationKind::kUrlFormat);
    spec.source_target = Target(site, "ok");
    Taint(s, std::move(spec));
  } else {
    RecordOutcome(site, ok, Flat(), Flat(), "ok", "error");
  }
  if (!ok) return std::nullopt;
  return s;
}

bool RequestContext::Compare(const std::string& site, double a, CmpOp op, double b) {
  bool result = false;
  Distance to_true;
  Distance to_false;
  switch (op) {
    case CmpOp::kEq:
      result = a == b;
      to_true = NumericEqDistance(a, b);
      to_false = NotEqualDistance(a, b);
      break;
    case CmpOp::kNe:
      result = a != b;
      to_true = NotEqualDistance(a, b);
      to_false = NumericEqDistance(a, b);
      break;
    case CmpOp::kLt:
      result = a < b;
      to_true = LessThanDistance(a, b);
      to_false = LessEqualDistance(b, a);
      break;
    case CmpOp::kLe:
      result = a <= b;
      to_true = LessEqualDistance(a, b);
      to_false = LessThanDistance(b, a);
      break;
    case CmpOp::kGt:
      result = a > b;
      to_true = LessThanDistance(b, a);
      to_false = LessEqualDistance(a, b);
      break;
    case CmpOp::kGe:
      result = a >= b;
      to_true = LessEqualDistance(b, a);
      to_false = LessThanDistance(a, b);
      break;
  }
  const double base = harness_.options().base;
  RecordOutcome(site, result, Scale(to_true, base), Scale(to_false, base));
  return result;
}

// Time ---------------------------------------------------------------------------

std::chrono::milliseconds RequestContext::Sleep(std::chrono::milliseconds requested) {
  const auto actual = std::clamp(requested, std::chrono::milliseconds(0),
                                 harness_.options().sleep_cap);
  std::this_thread::sleep_for(actual);
  harness_.WithTrace([&](ExecutionTrace& t) { t.slept += actual; });
  return actual;
}

void RequestContext::Spawn(const std::string& name, TaskBody body) {
  harness_.WithTrace([&](ExecutionTrace& t) { t.background_tasks.push_back(name); });
  harness_.SpawnTask(name, std::move(body));
}

// ---------------------------------------------------------------------------
// Scheduler

void Scheduler::Register(ScheduledTask task) {
  if (task.interval.count() <= 0) throw ConfigError("scheduled task interval must be positive");
  const bool was = enabled();
  SetEnabled(false);
  tasks_.push_back(std::move(task));
  SetEnabled(was);
}

void Scheduler::SetEnabled(bool enabled) {
  if (enabled == this->enabled()) return;
  if (enabled) {
    thread_ = std::jthread([this](std::stop_token stop) { Loop(std::move(stop)); });
  } else {
    thread_.request_stop();
    thread_.join();
    thread_ = std::jthread();
  }
}

void Scheduler::Loop(std::stop_token stop) {
  using Clock = std::chrono::steady_clock;
  std::vector<Clock::time_point> due(tasks_.size(), Clock::now());
  for (size_t i = 0; i < tasks_.size(); ++i) due[i] += tasks_[i].interval;
  while (!stop.stop_requested()) {
    const auto now = Clock::now();
    for (size_t i = 0; i < tasks_.size() && !stop.stop_requested(); ++i) {
      if (now < due[i]) continue;
      due[i] = now + tasks_[i].interval;
      TaskContext ctx(harness_, stop);
      try {
        tasks_[i].run(ctx);
      } catch (const std::exception&) {
        // A failing periodic task does not stop the scheduler.
      }
      executions_.fetch_add(1);
    }
    if (!SleepUnlessStopped(std::chrono::milliseconds(1), stop)) break;
  }
}

// ---------------------------------------------------------------------------
// Harness

Harness::Harness(std::shared_ptr<const SutDescriptor> sut, HarnessOptions options)
    : sut_(std::move(sut)), options_(options), scheduler_(*this) {
  if (!sut_) throw ConfigError("null SUT descriptor");
  document_ = sut_->Document();
  baseline_ = Database(sut_->tables);
  if (sut_->seed) sut_->seed(baseline_);
  db_ = baseline_;
  for (const auto& e : sut_->entities) bindings_.emplace(e.name, Resolve(e, sut_->tables));
  for (const auto& t : sut_->scheduled) scheduler_.Register(t);
}

Harness::~Harness() {
  scheduler_.SetEnabled(false);
  StopBackgroundTasks();
}

namespace {

std::vector<std::string> Segments(std::string_view path) {
  std::vector<std::string> out;
  size_t start = 0;
  while (start <= path.size()) {
    const size_t slash = path.find('/', start);
    const size_t end = slash == std::string_view::npos ? path.size() : slash;
    if (end > start) out.emplace_back(path.substr(start, end - start));
    if (slash == std::string_view::npos) break;
    start = slash + 1;
  }
  return out;
}

std::optional<std::map<std::string, std::string>> MatchPath(std::string_view pattern,
                                                            std::string_view path) {
  const auto want = Segments(pattern);
  const auto got = Segments(path);
  if (want.size() != got.size()) return std::nullopt;
  std::map<std::string, std::string> vars;
  for (size_t i = 0; i < want.size(); ++i) {
    const std::string& w = want[i];
    if (w.size() > 2 && w.front() == '{' && w.back() == '}') {
      vars[w.substr(1, w.size() - 2)] = PercentDecode(got[i]);
    } else if (w != PercentDecode(got[i])) {
      return std::nullopt;
    }
  }
  return vars;
}

Json ErrorBody(const std::string& message) {
  Json j = Json::object();
  j["error"] = message;
  return j;
}

}  // namespace

HttpResponse Harness::Call(const HttpRequest& request, const ActionTemplate* tmpl,
                           size_t action_index) {
  const Route* route = nullptr;
  std::map<std::string, std::string> vars;
  bool path_matched = false;
  for (const auto& r : sut_->routes) {
    auto m = MatchPath(r.path, request.path);
    if (!m) continue;
    path_matched = true;
    if (r.verb == request.verb) {
      route = &r;
      vars = std::move(*m);
      break;
    }
  }
  if (route == nullptr) {
    return path_matched ? HttpResponse{405, ErrorBody("method not allowed")}
                        : HttpResponse{404, ErrorBody("not found")};
  }
  ActionTemplate fallback;
  if (tmpl == nullptr) {
    tmpl = document_.Find(route->verb, route->path);
    if (tmpl == nullptr) {
      fallback.verb = route->verb;
      fallback.path = route->path;
      tmpl = &fallback;
    }
  }
  RequestContext ctx(*this, request, *tmpl, std::move(vars), action_index);
  try {
    return route->handler(ctx);
  } catch (const ConfigError&) {
    throw;
  } catch (const HttpError& e) {
    return HttpResponse{e.status(), ErrorBody(e.what())};
  } catch (const EntityParseCrash& e) {
    WithTrace([&](ExecutionTrace& t) {
      t.entity_crashes.push_back(EntityCrashRecord{action_index, e.table(), e.key(), e.what()});
    });
    return HttpResponse{500, ErrorBody(e.what())};
  } catch (const std::exception& e) {
    return HttpResponse{500, ErrorBody(e.what())};
  }
}

Database::InsertResult Harness::Insert(const std::string& table, Json values) {
  return db_.Insert(table, std::move(values));
}

void Harness::Reset() {
  StopBackgroundTasks();
  db_ = baseline_;
  std::lock_guard lock(trace_mu_);
  trace_ = ExecutionTrace();
}

void Harness::StopBackgroundTasks() {
  std::vector<std::jthread> tasks;
  {
    std::lock_guard lock(tasks_mu_);
    tasks.swap(tasks_);
  }
  for (auto& t : tasks) t.request_stop();
  for (auto& t : tasks) {
    if (t.joinable()) t.join();
  }
}

size_t Harness::running_tasks() const { return live_tasks_->load(); }

ExecutionTrace Harness::TakeTrace() {
  StopBackgroundTasks();
  std::lock_guard lock(trace_mu_);
  ExecutionTrace out = std::move(trace_);
  trace_ = ExecutionTrace();
  return out;
}

ExecutionTrace Harness::PeekTrace() const {
  std::lock_guard lock(trace_mu_);
  return trace_;
}

void Harness::Record(const std::string& target, double h) {
  std::lock_guard lock(trace_mu_);
  trace_.Record(target, h);
}

void Harness::SpawnTask(const std::string& name, TaskBody body) {
  (void)name;
  auto live = live_tasks_;
  live->fetch_add(1);
  std::lock_guard lock(tasks_mu_);
  tasks_.emplace_back([this, live, body = std::move(body)](std::stop_token stop) {
    TaskContext ctx(*this, stop);
    try {
      body(ctx);
    } catch (const TaskInterrupted&) {
      WithTrace([](ExecutionTrace& t) { ++t.interrupted_tasks; });
    } catch (const std::exception&) {
      // Background failures are invisible to the HTTP client.
    }
    live->fetch_sub(1);
  });
}

const EntityConstraintSet& Harness::Entity(const std::string& name) const {
  for (const auto& e : sut_->entities) {
    if (e.name == name) return e;
  }
  throw ConfigError("unknown entity " + name);
}

const EntityBinding& Harness::Binding(const std::string& entity) const {
  auto it = bindings_.find(entity);
  if (it == bindings_.end()) throw ConfigError("unknown entity " + entity);
  return it->second;
}

}  // namespace wbfuzz
