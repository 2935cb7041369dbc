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

#ifndef WBFUZZ_SRC_FIXTURES_FIXTURES_H_
#define WBFUZZ_SRC_FIXTURES_FIXTURES_H_

// Embedded services the fuzzer is exercised against. Each factory returns
// a complete descriptor; the registry caches them by name.

#include <string>
#include <vector>

#include "wbfuzz/harness.h"
#include "wbfuzz/validation.h"

namespace wbfuzz::fixtures {

SutDescriptor ValidBeans();
SutDescriptor HiddenParams();
SutDescriptor AppSession();
SutDescriptor StringOps();
SutDescriptor Clockwork();
SutDescriptor Collections();

inline HttpResponse Respond(int status, Json body = Json()) {
  return HttpResponse{status, std::move(body)};
}

// Field helper for DTO shapes.
inline DtoField Field(std::string name, GeneTemplate::Kind kind,
                      std::vector<ValidationConstraint> constraints = {}) {
  DtoField f;
  f.name = std::move(name);
  f.type = GeneTemplate::Of(kind);
  f.constraints = std::move(constraints);
  return f;
}

inline ValidationConstraint C(ConstraintKind kind) { return ValidationConstraint::Of(kind); }

// Path parameter parsed as a 64-bit integer; 400 when malformed.
int64_t PathInt(RequestContext& ctx, const std::string& name);

}  // namespace wbfuzz::fixtures

#endif  // WBFUZZ_SRC_FIXTURES_FIXTURES_H_
