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


#ifndef WBFUZZ_ORACLE_H_
#define WBFUZZ_ORACLE_H_

// Fault oracles over HTTP responses.

#include <cstddef>
#include <string>
#include <vector>

#include "wbfuzz/harness.h"
#include "wbfuzz/schema.h"

namespace wbfuzz {

// Faults revealed by one response. 500 is a server error; an undeclared
// status or a body missing a declared required field is a schema mismatch;
// an entity load failure during the call adds an entity-parse annotation.
// `tmpl` may be null when the endpoint is undeclared.
std::vector<FaultRecord> Classify(const HttpResponse& response, const ActionTemplate* tmpl,
                                  const std::string& verb, const std::string& endpoint,
                                  size_t action_index, const ExecutionTrace& trace);

// First line of an error body's message, or empty.
std::string ErrorDiscriminator(const Json& body);

}  // namespace wbfuzz

#endif  // WBFUZZ_ORACLE_H_
