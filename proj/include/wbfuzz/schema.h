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

#ifndef WBFUZZ_SCHEMA_H_
#define WBFUZZ_SCHEMA_H_

// Endpoint templates read from OpenAPI documents, and their expansion when
// the SUT reveals inputs the document does not declare.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wbfuzz/gene_template.h"
#include "wbfuzz/json.h"
#include "wbfuzz/validation.h"

namespace wbfuzz {

// Names injected during the discovery window. They never enter templates
// or exported tests.
inline constexpr std::string_view kFakeHeader = "x-EMextraHeader123";
inline constexpr std::string_view kFakeParam = "EMextraParam123";
// HTTP method override parameter; discovering it is meaningless.
inline constexpr std::string_view kMethodOverride = "_method";

bool IsReservedName(std::string_view name);

enum class InputLocation { kPath, kQuery, kHeader, kBody };
enum class InferredType { kText, kNumber, kBoolean, kUnknown };

std::string InputLocationName(InputLocation loc);
std::string InferredTypeName(InferredType t);

struct DiscoveredInput {
  InputLocation location = InputLocation::kQuery;
  // Body fields use a dotted path ("user.role").
  std::string name;
  InferredType type = InferredType::kText;

  bool operator==(const DiscoveredInput&) const = default;
};

struct InputSpec {
  std::string name;
  GeneTemplate type;
  bool required = false;
  bool discovered = false;

  bool operator==(const InputSpec&) const = default;
};

struct ResponseSpec {
  int status = 200;  // 0 stands for "default"
  // Declared top-level fields of an object body; `required` lists the ones
  // that must be present.
  std::vector<std::string> fields;
  std::vector<std::string> required;
  bool object_body = false;

  bool operator==(const ResponseSpec&) const = default;
};

struct ActionTemplate {
  std::string verb;  // upper case
  std::string path;  // with {var} slots
  std::vector<InputSpec> path_params;
  std::vector<InputSpec> query;
  std::vector<InputSpec> headers;
  std::optional<GeneTemplate> body;
  // Declared as a free-form object, so a sighted DTO may replace it.
  bool body_opaque = false;
  bool body_discovered = false;
  std::vector<ResponseSpec> responses;

  std::string Id() const { return verb + ":" + path; }
  const std::vector<InputSpec>& Inputs(InputLocation loc) const;
  std::vector<InputSpec>& Inputs(InputLocation loc);
  // True if the name is declared (or already discovered) at `loc`. Body
  // names are dotted paths.
  bool Knows(InputLocation loc, std::string_view name) const;
  const ResponseSpec* Response(int status) const;

  bool operator==(const ActionTemplate&) const = default;
};

struct DtoShape;

struct DtoField {
  std::string name;
  GeneTemplate type;  // ignored when `nested` is set
  std::vector<ValidationConstraint> constraints;
  std::shared_ptr<const DtoShape> nested;
};

// Body class as the handler sees it: typed fields with validation
// constraints, possibly nested.
struct DtoShape {
  std::string name;
  std::vector<DtoField> fields;

  // Object template; fields are optional unless they carry NotNull or
  // ImpliedNotNull.
  GeneTemplate ToTemplate() const;
};

struct OpenApiDocument {
  std::string title;
  std::vector<ActionTemplate> actions;
  std::vector<std::string> warnings;

  const ActionTemplate* Find(std::string_view verb, std::string_view path) const;
};

enum class DocumentFormat { kJson, kYaml };

// Reads the supported OpenAPI v3 subset. Throws ParseError (with a line,
// column or JSON-pointer location) on malformed documents and on $ref
// cycles. Out-of-subset constructs degrade to free-form strings with a
// warning.
OpenApiDocument ParseOpenApi(std::string_view text, DocumentFormat format);
// Picks the format from the extension (.json, .yaml, .yml).
OpenApiDocument LoadOpenApi(const std::string& path);

// Adds an optional input for a discovery. Repeats are no-ops, except that a
// discovered Text input is upgraded once a typed sighting arrives. Schema
// inputs are never retyped or removed.
ActionTemplate Expand(const ActionTemplate& t, const DiscoveredInput& d);

// Replaces an absent or opaque body with the sighted DTO; otherwise no-op.
ActionTemplate DiscoverBodyDto(const ActionTemplate& t, const DtoShape& dto);

GeneTemplate TemplateFor(InferredType t);

}  // namespace wbfuzz

#endif  // WBFUZZ_SCHEMA_H_
