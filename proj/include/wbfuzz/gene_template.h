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

#ifndef WBFUZZ_GENE_TEMPLATE_H_
#define WBFUZZ_GENE_TEMPLATE_H_

// Declarative description of an input's shape, as read from a schema.
// Templates are immutable values; genes are built and sampled from them.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wbfuzz/genes.h"
#include "wbfuzz/json.h"

namespace wbfuzz {

struct FieldTemplate;

struct GeneTemplate {
  enum class Kind {
    kInteger,
    kLong,
    kFloat,
    kBoolean,
    kString,
    kEnum,
    kObject,
    kArray,
    kUuid,
    kUri,
    kUrl,
  };

  Kind kind = Kind::kString;
  std::optional<double> minimum;
  std::optional<double> maximum;
  size_t min_length = 0;
  size_t max_length = kDefaultMaxLength;
  std::vector<std::string> values;  // enum
  std::string pattern;              // string pattern, becomes RegexMatch
  std::vector<FieldTemplate> fields;
  std::shared_ptr<const GeneTemplate> items;
  size_t min_items = 0;
  size_t max_items = 4;

  static GeneTemplate Integer(std::optional<double> min = std::nullopt,
                              std::optional<double> max = std::nullopt);
  static GeneTemplate Of(Kind kind);
  static GeneTemplate String(size_t min_length = 0,
                             size_t max_length = kDefaultMaxLength);
  static GeneTemplate Enum(std::vector<std::string> values);
  static GeneTemplate Array(GeneTemplate items);

  bool operator==(const GeneTemplate& o) const;
};

struct FieldTemplate {
  std::string name;
  GeneTemplate type;
  bool required = false;

  bool operator==(const FieldTemplate&) const = default;
};

std::string TemplateKindName(GeneTemplate::Kind kind);

// Throws ConfigError on inconsistent bounds. Optional object fields are
// wrapped in OptionalGene.
GeneBox BuildGene(const GeneTemplate& t);
GeneBox Sample(const GeneTemplate& t, Rng& rng, const GeneContext& ctx = {});

// Checks that a payload value conforms to the template (types, bounds,
// enum membership, required fields).
bool Conforms(const GeneTemplate& t, const Json& value);

}  // namespace wbfuzz

#endif  // WBFUZZ_GENE_TEMPLATE_H_
