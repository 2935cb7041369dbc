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


#ifndef WBFUZZ_EXPORT_H_
#define WBFUZZ_EXPORT_H_

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wbfuzz/engine.h"
#include "wbfuzz/harness.h"
#include "wbfuzz/json.h"

namespace wbfuzz {

inline constexpr int kSuiteVersion = 1;
inline constexpr int kReportVersion = 1;

struct Expectation {
  int status = 0;
  // Declared top-level scalar fields and their observed values.
  Json body = Json::object();
};

struct SuiteCall {
  std::string verb;
  std::string endpoint;  // path template
  HttpRequest request;
  Expectation expect;
};

struct SuiteTest {
  std::string name;
  std::vector<std::string> covers;  // sorted target ids
  std::vector<std::string> faults;  // sorted dedup keys
  std::vector<ConcreteInsert> inserts;
  std::vector<SuiteCall> calls;
};

struct Suite {
  std::string sut;
  std::string arm;
  uint64_t seed = 0;
  std::string budget;
  std::vector<SuiteTest> tests;
};

// Turns the archive into a suite: one test per distinct covering
// representative or fault individual, in discovery order. Every test is
// re-executed on a fresh harness, and its covers, faults and expectations
// come from that execution. Fake discovery names are never exported.
Suite BuildSuite(const SearchResult& result, std::shared_ptr<const SutDescriptor> sut);

Json SuiteToJson(const Suite& suite);
// Throws ParseError for documents that are not a version-1 suite.
Suite SuiteFromJson(const Json& doc);
std::string SuiteToScript(const Suite& suite);

// Coverage, fault and discovery statistics. Timing fields are left out when
// `timestamps` is false.
Json ReportJson(const SearchResult& result, const Suite& suite, bool timestamps);

struct Verdict {
  std::string test;
  size_t call = 0;  // index of the call, or the call count for fault checks
  std::string assertion;  // "status", "body.<field>" or "fault <key>"
  Json expected;
  Json actual;
  bool passed = false;
};

struct ReplayResult {
  std::vector<Verdict> verdicts;
  size_t passed() const;
  size_t failed() const;
};

// Throws ConfigError when the suite belongs to another fixture.
ReplayResult Replay(const Suite& suite, std::shared_ptr<const SutDescriptor> sut);

// Writes suite.json, suite.http.txt and report.json into `dir`, creating it
// if needed. Throws IoError when the directory is not writable.
void WriteOutputs(const std::filesystem::path& dir, const SearchResult& result, const Suite& suite,
                  bool timestamps);

Json ReadJsonFile(const std::filesystem::path& file);

}  // namespace wbfuzz

#endif  // WBFUZZ_EXPORT_H_
