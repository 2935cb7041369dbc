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

#include "wbfuzz/gene_template.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <regex>

#include "wbfuzz/errors.h"
#include "wbfuzz/uri_gene.h"

namespace wbfuzz {

GeneTemplate GeneTemplate::Integer(std::optional<double> min,
                                   std::optional<double> max) {
  GeneTemplate t;
  t.kind = Kind::kInteger;
  t.minimum = min;
  t.maximum = max;
  return t;
}

GeneTemplate GeneTemplate::Of(Kind kind) {
  GeneTemplate t;
  t.kind = kind;
  return t;
}

GeneTemplate GeneTemplate::String(size_t min_length, size_t max_length) {
  GeneTemplate t;
  t.kind = Kind::kString;
  t.min_length = min_length;
  t.max_length = max_length;
  return t;
}

GeneTemplate GeneTemplate::Enum(std::vector<std::string> values) {
  GeneTemplate t;
  t.kind = Kind::kEnum;
  t.values = std::move(values);
  return t;
}

GeneTemplate GeneTemplate::Array(GeneTemplate items) {
  GeneTemplate t;
  t.kind = Kind::kArray;
  t.items = std::make_shared<const GeneTemplate>(std::move(items));
  return t;
}

bool GeneTemplate::operator==(const GeneTemplate& o) const {
  const bool same_items =
      (items == nullptr && o.items == nullptr) ||
      (items != nullptr && o.items != nullptr && *items == *o.items);
  return kind == o.kind && minimum == o.minimum && maximum == o.maximum &&
         min_length == o.min_length && max_length == o.max_length &&
         values == o.values && pattern == o.pattern && fields == o.fields &&
         same_items && min_items == o.min_items && max_items == o.max_items;
}

std::string TemplateKindName(GeneTemplate::Kind kind) {
  using K = GeneTemplate::Kind;
  switch (kind) {
    case K::kInteger: return "integer";
    case K::kLong: return "long";
    case K::kFloat: return "number";
    case K::kBoolean: return "boolean";
    case K::kString: return "string";
    case K::kEnum: return "enum";
    case K::kObject: return "object";
    case K::kArray: return "array";
    case K::kUuid: return "uuid";
    case K::kUri: return "uri";
    case K::kUrl: return "url";
  }
  return "unknown";
}

namespace {

IntegerGene BoundedInteger(const GeneTemplate& t, int64_t lo, int64_t hi,
                           bool is_long) {
  auto clamp = [](double v) {
    constexpr double kLo = static_cast<double>(std::numeric_limits<int64_t>::min());
    constexpr double kHi = 9.2e18;
    return static_cast<int64_t>(std::clamp(v, kLo, kHi));
  };
  if (t.minimum) lo = clamp(std::ceil(*t.minimum));
  if (t.maximum) hi = clamp(std::floor(*t.maximum));
  return IntegerGene(lo, hi, is_long);
}

}  // namespace

GeneBox BuildGene(const GeneTemplate& t) {
  using K = GeneTemplate::Kind;
  switch (t.kind) {
    case K::kInteger:
      return BoundedInteger(t, std::numeric_limits<int32_t>::min(),
                            std::numeric_limits<int32_t>::max(), false);
    case K::kLong:
      return BoundedInteger(t, std::numeric_limits<int64_t>::min(),
                            std::numeric_limits<int64_t>::max(), true);
    case K::kFloat:
      return FloatGene(t.minimum.value_or(-1e9), t.maximum.value_or(1e9));
    case K::kBoolean:
      return BooleanGene();
    case K::kString: {
      StringGene g(t.min_length, t.max_length);
      if (!t.pattern.empty()) {
        Rng rng(0);
        Specialization spec;
        spec.kind = SpecializationKind::kRegexMatch;
        spec.text = t.pattern;
        spec.source_target = "schema";
        g.AddSpecialization(spec, rng);
      }
      return g;
    }
    case K::kEnum:
      return EnumGene(t.values);
    case K::kObject: {
      ObjectGene obj;
      for (const auto& f : t.fields) {
        GeneBox child = BuildGene(f.type);
        if (f.required) {
          obj.Add(f.name, std::move(child));
        } else {
          obj.Add(f.name, OptionalGene(std::move(child)));
        }
      }
      return obj;
    }
    case K::kArray: {
      if (!t.items) throw ConfigError("array template without items");
      return ArrayGene(BuildGene(*t.items), t.min_items, t.max_items);
    }
    case K::kUuid:
      return UuidGene();
    case K::kUri:
      return UriGene(false);
    case K::kUrl:
      return UriGene(true);
  }
  throw ConfigError("unknown template kind");
}

GeneBox Sample(const GeneTemplate& t, Rng& rng, const GeneContext& ctx) {
  GeneBox g = BuildGene(t);
  g->Randomize(rng, ctx);
  return g;
}

bool Conforms(const GeneTemplate& t, const Json& value) {
  using K = GeneTemplate::Kind;
  auto in_bounds = [&](double v) {
    return (!t.minimum || v >= *t.minimum) && (!t.maximum || v <= *t.maximum);
  };
  switch (t.kind) {
    case K::kInteger:
    case K::kLong:
      return value.is_number_integer() && in_bounds(value.get<double>());
    case K::kFloat:
      return value.is_number() && in_bounds(value.get<double>());
    case K::kBoolean:
      return value.is_boolean();
    case K::kString: {
      // Patterns guide generation but are not enforced: free-form strings
      // are kept for robustness testing.
      if (!value.is_string()) return false;
      const size_t n = value.get_ref<const std::string&>().size();
      return n >= t.min_length && n <= t.max_length;
    }
    case K::kEnum:
      return value.is_string() &&
             std::find(t.values.begin(), t.values.end(), value.get<std::string>()) !=
                 t.values.end();
    case K::kObject: {
      if (!value.is_object()) return false;
      for (const auto& f : t.fields) {
        auto it = value.find(f.name);
        if (it == value.end()) {
          if (f.required) return false;
          continue;
        }
        if (!Conforms(f.type, *it)) return false;
      }
      return true;
    }
    case K::kArray: {
      if (!value.is_array() || !t.items) return false;
      if (value.size() < t.min_items || value.size() > t.max_items) return false;
      for (const auto& e : value) {
        if (!Conforms(*t.items, e)) return false;
      }
      return true;
    }
    case K::kUuid: {
      static const std::regex kUuid(
          "[0-9a-f]{8}-[0-9a-f]{4}-[0-9a-f]{4}-[0-9a-f]{4}-[0-9a-f]{12}");
      return value.is_string() && std::regex_match(value.get<std::string>(), kUuid);
    }
    case K::kUri:
    case K::kUrl: {
      static const std::regex kUri("[A-Za-z][A-Za-z0-9+.-]*:.+");
      return value.is_string() && std::regex_match(value.get<std::string>(), kUri);
    }
  }
  return false;
}

}  // namespace wbfuzz
