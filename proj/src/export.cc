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


#include "wbfuzz/export.h"

#include <algorithm>
#include <cctype>
#include <ctime>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <system_error>

#include "wbfuzz/errors.h"

namespace wbfuzz {
namespace {

bool IsScalar(const Json& v) { return v.is_string() || v.is_number() || v.is_boolean(); }

Expectation Expect(const ActionTemplate* declared, const HttpResponse& response) {
  Expectation e;
  e.status = response.status;
  if (declared == nullptr || !response.body.is_object()) return e;
  const ResponseSpec* spec = declared->Response(response.status);
  if (spec == nullptr || !spec->object_body) return e;
  for (const auto& field : spec->fields) {
    auto it = response.body.find(field);
    if (it != response.body.end() && IsScalar(*it)) e.body[field] = *it;
  }
  return e;
}

std::string Slug(std::string_view path) {
  std::string out;
  for (char c : path) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else if (!out.empty() && out.back() != '_') {
      out += '_';
    }
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out.empty() ? "root" : out;
}

std::string TestName(size_t index, const SuiteTest& t) {
  std::string name = std::to_string(index + 1);
  name.insert(0, name.size() < 3 ? 3 - name.size() : 0, '0');
  name = "test_" + name;
  if (!t.calls.empty()) {
    const SuiteCall& last = t.calls.back();
    std::string verb = last.verb;
    std::transform(verb.begin(), verb.end(), verb.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    name += "_" + verb + "_" + Slug(last.endpoint) + "_" + std::to_string(last.expect.status);
  }
  if (!t.faults.empty()) name += "_fault";
  return name;
}

Json PairsToJson(const std::vector<std::pair<std::string, std::string>>& pairs) {
  Json out = Json::array();
  for (const auto& [name, value] : pairs) out.push_back(Json{{"name", name}, {"value", value}});
  return out;
}

Json TestJson(const SuiteTest& t) {
  Json test;
  test["name"] = t.name;
  test["covers"] = t.covers;
  test["faults"] = t.faults;
  Json sql = Json::array();
  for (const auto& insert : t.inserts) sql.push_back(Json{{"table", insert.table}, {"values", insert.values}});
  test["sql"] = std::move(sql);
  Json calls = Json::array();
  for (const auto& c : t.calls) {
    Json call;
    call["verb"] = c.verb;
    call["endpoint"] = c.endpoint;
    call["path"] = c.request.path;
    call["query"] = PairsToJson(c.request.query);
    call["headers"] = PairsToJson(c.request.headers);
    call["body"] = c.request.body ? Json(*c.request.body) : Json(nullptr);
    call["expect"] = Json{{"status", c.expect.status}, {"body", c.expect.body}};
    calls.push_back(std::move(call));
  }
  test["calls"] = std::move(calls);
  return test;
}

// Reading ---------------------------------------------------------------------

[[noreturn]] void Malformed(const std::string& where, const std::string& what) {
  throw ParseError("suite: " + where + ": " + what);
}

const Json& Member(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) Malformed(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) Malformed(where, std::string("missing '") + key + "'");
  return *it;
}

std::string String(const Json& obj, const char* key, const std::string& where) {
  const Json& v = Member(obj, key, where);
  if (!v.is_string()) Malformed(where + "." + key, "expected a string");
  return v.get<std::string>();
}

const Json& Array(const Json& obj, const char* key, const std::string& where) {
  const Json& v = Member(obj, key, where);
  if (!v.is_array()) Malformed(where + "." + key, "expected an array");
  return v;
}

std::vector<std::string> Strings(const Json& obj, const char* key, const std::string& where) {
  std::vector<std::string> out;
  for (const Json& v : Array(obj, key, where)) {
    if (!v.is_string()) Malformed(where + "." + key, "expected strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> Pairs(const Json& obj, const char* key,
                                                       const std::string& where) {
  std::vector<std::pair<std::string, std::string>> out;
  const Json& arr = Array(obj, key, where);
  for (size_t i = 0; i < arr.size(); ++i) {
    const std::string at = where + "." + key + "[" + std::to_string(i) + "]";
    out.emplace_back(String(arr[i], "name", at), String(arr[i], "value", at));
  }
  return out;
}

// Writing ---------------------------------------------------------------------

std::string ShellQuote(std::string_view s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

std::string SqlLiteral(const Json& v) {
  if (v.is_null()) return "NULL";
  if (v.is_string()) {
    std::string out = "'";
    for (char c : v.get<std::string>()) {
      if (c == '\'') out += '\'';
      out += c;
    }
    return out + "'";
  }
  if (v.is_boolean()) return v.get<bool>() ? "TRUE" : "FALSE";
  return v.dump();
}

std::string QueryString(const HttpRequest& r) {
  std::string out;
  for (const auto& [name, value] : r.query) {
    out += out.empty() ? "?" : "&";
    out += PercentEncode(name) + "=" + PercentEncode(value);
  }
  return out;
}

std::string UtcNow() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void WriteFile(const std::filesystem::path& file, const std::string& content) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + file.string());
  out << content;
  out.close();
  if (!out) throw IoError("cannot write " + file.string());
}

}  // namespace

Suite BuildSuite(const SearchResult& result, std::shared_ptr<const SutDescriptor> sut) {
  const RunConfig& config = result.config;
  Suite suite;
  suite.sut = sut->id;
  suite.arm = ArmName(config.arm);
  suite.seed = config.seed;
  suite.budget = config.budget.ToString();

  struct Candidate {
    std::shared_ptr<const Individual> individual;
    bool fault = false;
  };
  // Keyed by the evaluation that produced the individual.
  std::map<uint64_t, Candidate> candidates;
  for (const auto& target : result.covered) {
    const ArchiveEntry& entry = result.best.at(target);
    candidates.emplace(entry.evaluation, Candidate{entry.individual, false});
  }
  for (const auto& f : result.faults) {
    auto [it, inserted] = candidates.emplace(f.evaluation, Candidate{f.individual, true});
    if (!inserted) it->second.fault = true;
  }

  Harness harness(sut, HarnessOptionsFor(FeaturesFor(config.arm), config.engine));
  std::set<std::string> seen;
  for (const auto& [evaluation, candidate] : candidates) {
    // Violating rows only stay when they may be what exposed the fault.
    const ConcreteTest concrete =
        Concretize(*candidate.individual, result.templates, false, candidate.fault);
    const Execution ex = Execute(harness, concrete, &result.templates);
    SuiteTest test;
    test.inserts = concrete.inserts;
    for (const auto& [target, h] : ex.fitness) {
      if (h >= 1.0) test.covers.push_back(target);
    }
    std::set<std::string> keys;
    for (const auto& f : ex.faults) keys.insert(f.DedupKey());
    test.faults.assign(keys.begin(), keys.end());
    for (size_t i = 0; i < concrete.calls.size(); ++i) {
      const ConcreteCall& c = concrete.calls[i];
      test.calls.push_back(SuiteCall{c.verb, c.endpoint, c.request,
                                     Expect(harness.document().Find(c.verb, c.endpoint),
                                            ex.responses[i])});
    }
    // Identical tests add nothing.
    if (!seen.insert(TestJson(test).dump()).second) continue;
    test.name = TestName(suite.tests.size(), test);
    suite.tests.push_back(std::move(test));
  }
  return suite;
}

Json SuiteToJson(const Suite& suite) {
  Json doc;
  doc["format"] = "wbfuzz-suite";
  doc["version"] = kSuiteVersion;
  doc["sut"] = suite.sut;
  doc["arm"] = suite.arm;
  doc["seed"] = suite.seed;
  doc["budget"] = suite.budget;
  Json tests = Json::array();
  for (const auto& t : suite.tests) tests.push_back(TestJson(t));
  doc["tests"] = std::move(tests);
  return doc;
}

Suite SuiteFromJson(const Json& doc) {
  if (String(doc, "format", "$") != "wbfuzz-suite") Malformed("$.format", "not a wbfuzz suite");
  const Json& version = Member(doc, "version", "$");
  if (!version.is_number_integer() || version.get<int>() != kSuiteVersion) {
    Malformed("$.version", "unsupported version " + version.dump());
  }
  Suite suite;
  suite.sut = String(doc, "sut", "$");
  suite.arm = String(doc, "arm", "$");
  suite.budget = String(doc, "budget", "$");
  const Json& seed = Member(doc, "seed", "$");
  if (!seed.is_number_unsigned()) Malformed("$.seed", "expected an unsigned integer");
  suite.seed = seed.get<uint64_t>();
  const Json& tests = Array(doc, "tests", "$");
  for (size_t i = 0; i < tests.size(); ++i) {
    const std::string at = "$.tests[" + std::to_string(i) + "]";
    const Json& t = tests[i];
    SuiteTest test;
    test.name = String(t, "name", at);
    test.covers = Strings(t, "covers", at);
    test.faults = Strings(t, "faults", at);
    const Json& sql = Array(t, "sql", at);
    for (size_t j = 0; j < sql.size(); ++j) {
      const std::string where = at + ".sql[" + std::to_string(j) + "]";
      const Json& values = Member(sql[j], "values", where);
      if (!values.is_object()) Malformed(where + ".values", "expected an object");
      test.inserts.push_back({String(sql[j], "table", where), values});
    }
    const Json& calls = Array(t, "calls", at);
    for (size_t j = 0; j < calls.size(); ++j) {
      const std::string where = at + ".calls[" + std::to_string(j) + "]";
      const Json& c = calls[j];
      SuiteCall call;
      call.verb = String(c, "verb", where);
      call.endpoint = String(c, "endpoint", where);
      call.request.verb = call.verb;
      call.request.path = String(c, "path", where);
      call.request.query = Pairs(c, "query", where);
      call.request.headers = Pairs(c, "headers", where);
      const Json& body = Member(c, "body", where);
      if (body.is_string()) {
        call.request.body = body.get<std::string>();
      } else if (!body.is_null()) {
        Malformed(where + ".body", "expected a string or null");
      }
      const Json& expect = Member(c, "expect", where);
      const Json& status = Member(expect, "status", where + ".expect");
      if (!status.is_number_integer()) Malformed(where + ".expect.status", "expected an integer");
      call.expect.status = status.get<int>();
      const Json& fields = Member(expect, "body", where + ".expect");
      if (!fields.is_object()) Malformed(where + ".expect.body", "expected an object");
      call.expect.body = fields;
      test.calls.push_back(std::move(call));
    }
    suite.tests.push_back(std::move(test));
  }
  return suite;
}

std::string SuiteToScript(const Suite& suite) {
  std::ostringstream out;
  out << "# wbfuzz suite for " << suite.sut << " (arm " << suite.arm << ", seed " << suite.seed
      << ", budget " << suite.budget << ")\n";
  out << "# " << suite.tests.size() << " tests; set BASE_URL to the server under test.\n";
  for (const auto& t : suite.tests) {
    out << "\n### " << t.name << "\n";
    for (const auto& c : t.covers) out << "# covers " << c << "\n";
    for (const auto& f : t.faults) out << "# fault " << f << "\n";
    for (const auto& insert : t.inserts) {
      std::string columns;
      std::string values;
      for (const auto& [column, value] : insert.values.items()) {
        columns += (columns.empty() ? "" : ", ") + column;
        values += (values.empty() ? "" : ", ") + SqlLiteral(value);
      }
      out << "# sql INSERT INTO " << insert.table << " (" << columns << ") VALUES (" << values
          << ");\n";
    }
    for (const auto& c : t.calls) {
      const HttpRequest& r = c.request;
      out << "curl -sS -X " << r.verb << " \"$BASE_URL\"" << ShellQuote(r.path + QueryString(r));
      for (const auto& [name, value] : r.headers) out << " -H " << ShellQuote(name + ": " + value);
      if (r.body) {
        out << " -H 'Content-Type: application/json' --data-raw " << ShellQuote(*r.body);
      }
      out << "\n# expect status " << c.expect.status;
      if (!c.expect.body.empty()) out << " body " << c.expect.body.dump();
      out << "\n";
    }
  }
  return out.str();
}

Json ReportJson(const SearchResult& result, const Suite& suite, bool timestamps) {
  const RunConfig& config = result.config;
  const SearchStats& stats = result.stats;
  Json doc;
  doc["format"] = "wbfuzz-report";
  doc["version"] = kReportVersion;
  doc["sut"] = suite.sut;
  doc["arm"] = ArmName(config.arm);
  doc["seed"] = config.seed;
  doc["budget"] = config.budget.ToString();
  const EngineConfig& e = config.engine;
  doc["settings"] = Json{{"base", e.base},
                         {"discovery_window", e.discovery_window},
                         {"fake_cap", e.fake_cap},
                         {"sleep_cap_ms", e.sleep_cap.count()},
                         {"taos_probability", e.taos_probability},
                         {"violate_probability", e.violate_probability},
                         {"mutation_taint_probability", e.mutation_taint_probability}};
  doc["evaluations"] = stats.evaluations;
  doc["targets"] = Json{{"covered", stats.targets_covered}, {"total", stats.targets_total}};
  doc["lines"] = Json{{"covered", stats.lines_covered}, {"total", stats.lines_total}};
  Json faults = Json::array();
  for (const auto& f : result.faults) {
    faults.push_back(Json{{"kind", FaultKindName(f.record.kind)},
                          {"verb", f.record.verb},
                          {"endpoint", f.record.endpoint},
                          {"status", f.record.status},
                          {"discriminator", f.record.discriminator},
                          {"key", f.record.DedupKey()},
                          {"evaluation", f.evaluation}});
  }
  doc["distinct_faults"] = result.faults.size();
  doc["faults"] = std::move(faults);
  Json discoveries = Json::array();
  for (const auto& d : result.discoveries) {
    discoveries.push_back(Json{{"evaluation", d.evaluation},
                               {"endpoint", d.template_id},
                               {"what", d.what},
                               {"location", InputLocationName(d.input.location)},
                               {"name", d.input.name},
                               {"type", InferredTypeName(d.input.type)}});
  }
  doc["discoveries"] = std::move(discoveries);
  doc["scheduled_executions"] = stats.scheduled_executions;
  doc["reset_restores_baseline"] = stats.reset_restores_baseline;
  doc["tests"] = suite.tests.size();
  doc["covered_targets"] = Json(std::vector<std::string>(result.covered.begin(), result.covered.end()));
  if (timestamps) {
    doc["wall_ms"] = stats.wall.count();
    doc["generated_at"] = UtcNow();
  }
  return doc;
}

size_t ReplayResult::passed() const {
  return static_cast<size_t>(
      std::count_if(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.passed; }));
}

size_t ReplayResult::failed() const { return verdicts.size() - passed(); }

ReplayResult Replay(const Suite& suite, std::shared_ptr<const SutDescriptor> sut) {
  if (suite.sut != sut->id) {
    throw ConfigError("suite was generated for '" + suite.sut + "', not '" + sut->id + "'");
  }
  Harness harness(sut, HarnessOptionsFor(FeaturesFor(ParseArm(suite.arm)), EngineConfig{}));
  ReplayResult out;
  for (const auto& t : suite.tests) {
    ConcreteTest concrete;
    concrete.inserts = t.inserts;
    for (const auto& c : t.calls) concrete.calls.push_back({c.verb, c.endpoint, c.request});
    const Execution ex = Execute(harness, concrete);
    for (size_t i = 0; i < t.calls.size(); ++i) {
      const Expectation& want = t.calls[i].expect;
      const HttpResponse& got = ex.responses[i];
      out.verdicts.push_back(
          {t.name, i, "status", want.status, got.status, got.status == want.status});
      for (const auto& [field, value] : want.body.items()) {
        Json actual = nullptr;
        if (got.body.is_object() && got.body.contains(field)) actual = got.body[field];
        out.verdicts.push_back({t.name, i, "body." + field, value, actual, actual == value});
      }
    }
    std::set<std::string> keys;
    for (const auto& f : ex.faults) keys.insert(f.DedupKey());
    for (const auto& key : t.faults) {
      const bool seen = keys.count(key) > 0;
      out.verdicts.push_back({t.name, t.calls.size(), "fault " + key, true, seen, seen});
    }
  }
  return out;
}

void WriteOutputs(const std::filesystem::path& dir, const SearchResult& result, const Suite& suite,
                  bool timestamps) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot create output directory " + dir.string() +
                  (ec ? ": " + ec.message() : std::string()));
  }
  WriteFile(dir / "suite.json", SuiteToJson(suite).dump(2) + "\n");
  WriteFile(dir / "suite.http.txt", SuiteToScript(suite));
  WriteFile(dir / "report.json", ReportJson(result, suite, timestamps).dump(2) + "\n");
}

Json ReadJsonFile(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot read " + file.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const Json::parse_error& e) {
    throw ParseError(file.string() + ": " + e.what());
  }
}

}  // namespace wbfuzz
