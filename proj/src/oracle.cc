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


#include "wbfuzz/oracle.h"

namespace wbfuzz {

std::string ErrorDiscriminator(const Json& body) {
  if (!body.is_object() || !body.contains("error") || !body["error"].is_string()) return "";
  const std::string message = body["error"].get<std::string>();
  return message.substr(0, message.find('\n'));
}

std::vector<FaultRecord> Classify(const HttpResponse& response, const ActionTemplate* tmpl,
                                  const std::string& verb, const std::string& endpoint,
                                  size_t action_index, const ExecutionTrace& trace) {
  std::vector<FaultRecord> out;
  auto add = [&](FaultKind kind, std::string discriminator) {
    FaultRecord f;
    f.kind = kind;
    f.verb = verb;
    f.endpoint = endpoint;
    f.discriminator = std::move(discriminator);
    f.status = response.status;
    f.action_index = action_index;
    out.push_back(std::move(f));
  };
  if (response.status == 500) {
    add(FaultKind::kServerError, ErrorDiscriminator(response.body));
    for (const auto& crash : trace.entity_crashes) {
      if (crash.action_index == action_index) {
        add(FaultKind::kEntityParseCrash, crash.message.substr(0, crash.message.find('\n')));
        break;
      }
    }
    return out;
  }
  if (tmpl == nullptr) return out;
  const ResponseSpec* spec = tmpl->Response(response.status);
  if (spec == nullptr) {
    add(FaultKind::kSchemaMismatch, "undeclared status " + std::to_string(response.status));
    return out;
  }
  if (!spec->object_body) return out;
  if (!response.body.is_object()) {
    add(FaultKind::kSchemaMismatch, "status " + std::to_string(response.status) + " body is not an object");
    return out;
  }
  for (const auto& field : spec->required) {
    if (!response.body.contains(field)) {
      add(FaultKind::kSchemaMismatch,
          "status " + std::to_string(response.status) + " body lacks " + field);
      break;
    }
  }
  return out;
}

}  // namespace wbfuzz
