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

#include "wbfuzz/schema.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "wbfuzz/errors.h"
#include "wbfuzz/regex_gene.h"

namespace wbfuzz {

bool IsReservedName(std::string_view name) {
  return name == kFakeHeader || name == kFakeParam || name == kMethodOverride;
}

std::string InputLocationName(InputLocation loc) {
  switch (loc) {
    case InputLocation::kPath: return "path";
    case InputLocation::kQuery: return "query";
    case InputLocation::kHeader: return "header";
    case InputLocation::kBody: return "body";
  }
  return "unknown";
}

std::string InferredTypeName(InferredType t) {
  switch (t) {
    case InferredType::kText: return "text";
    case InferredType::kNumber: return "number";
    case InferredType::kBoolean: return "boolean";
    case InferredType::kUnknown: return "unknown";
  }
  return "unknown";
}

GeneTemplate TemplateFor(InferredType t) {
  switch (t) {
    case InferredType::kNumber: return GeneTemplate::Of(GeneTemplate::Kind::kFloat);
    case InferredType::kBoolean: return GeneTemplate::Of(GeneTemplate::Kind::kBoolean);
    default: return GeneTemplate::String();
  }
}

namespace {

bool EqualsIgnoreCase(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

std::vector<std::string> SplitDots(std::string_view path) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    const size_t dot = path.find('.', start);
    out.emplace_back(path.substr(start, dot == std::string_view::npos ? path.npos
                                                                      : dot - start));
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return out;
}

FieldTemplate* FindField(GeneTemplate& obj, std::string_view name) {
  for (auto& f : obj.fields) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

const FieldTemplate* FindField(const GeneTemplate& obj, std::string_view name) {
  return FindField(const_cast<GeneTemplate&>(obj), name);
}

}  // namespace

const std::vector<InputSpec>& ActionTemplate::Inputs(InputLocation loc) const {
  return const_cast<ActionTemplate*>(this)->Inputs(loc);
}

std::vector<InputSpec>& ActionTemplate::Inputs(InputLocation loc) {
  switch (loc) {
    case InputLocation::kPath: return path_params;
    case InputLocation::kHeader: return headers;
    default: return query;
  }
}

bool ActionTemplate::Knows(InputLocation loc, std::string_view name) const {
  if (loc == InputLocation::kBody) {
    if (!body) return false;
    const GeneTemplate* node = &*body;
    for (const auto& seg : SplitDots(name)) {
      if (node->kind != GeneTemplate::Kind::kObject) return false;
      const FieldTemplate* f = FindField(*node, seg);
      if (f == nullptr) return false;
      node = &f->type;
    }
    return true;
  }
  for (const auto& in : Inputs(loc)) {
    if (loc == InputLocation::kHeader ? EqualsIgnoreCase(in.name, name)
                                      : in.name == name) {
      return true;
    }
  }
  return false;
}

const ResponseSpec* ActionTemplate::Response(int status) const {
  const ResponseSpec* fallback = nullptr;
  for (const auto& r : responses) {
    if (r.status == status) return &r;
    if (r.status == 0) fallback = &r;
  }
  return fallback;
}

GeneTemplate DtoShape::ToTemplate() const {
  GeneTemplate t = GeneTemplate::Of(GeneTemplate::Kind::kObject);
  for (const auto& f : fields) {
    const bool required = std::any_of(
        f.constraints.begin(), f.constraints.end(), [](const ValidationConstraint& c) {
          return c.kind == ConstraintKind::kNotNull ||
                 c.kind == ConstraintKind::kImpliedNotNull;
        });
    t.fields.push_back({f.name, f.nested ? f.nested->ToTemplate() : f.type, required});
  }
  return t;
}

const ActionTemplate* OpenApiDocument::Find(std::string_view verb,
                                            std::string_view path) const {
  for (const auto& a : actions) {
    if (a.verb == verb && a.path == path) return &a;
  }
  return nullptr;
}

// ---------------------------------------------------------------------------
// Document parsing.

namespace {

Json ScalarToJson(const YAML::Node& node) {
  const std::string& s = node.Scalar();
  if (node.Tag() == "!") return s;  // quoted
  if (s.empty() || s == "~" || s == "null" || s == "Null" || s == "NULL") {
    return nullptr;
  }
  if (s == "true" || s == "True" || s == "TRUE") return true;
  if (s == "false" || s == "False" || s == "FALSE") return false;
  int64_t i = 0;
  auto [ip, iec] = std::from_chars(s.data(), s.data() + s.size(), i);
  if (iec == std::errc() && ip == s.data() + s.size()) return i;
  double d = 0;
  auto [dp, dec] = std::from_chars(s.data(), s.data() + s.size(), d);
  if (dec == std::errc() && dp == s.data() + s.size()) return d;
  return s;
}

Json YamlToJson(const YAML::Node& node) {
  switch (node.Type()) {
    case YAML::NodeType::Null:
    case YAML::NodeType::Undefined:
      return nullptr;
    case YAML::NodeType::Scalar:
      return ScalarToJson(node);
    case YAML::NodeType::Sequence: {
      Json out = Json::array();
      for (const auto& child : node) out.push_back(YamlToJson(child));
      return out;
    }
    case YAML::NodeType::Map: {
      Json out = Json::object();
      for (const auto& kv : node) out[kv.first.as<std::string>()] = YamlToJson(kv.second);
      return out;
    }
  }
  return nullptr;
}

std::string LineColumn(std::string_view text, size_t byte) {
  size_t line = 1;
  size_t col = 1;
  for (size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

std::string Escape(std::string_view token) {
  std::string out;
  for (char c : token) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

const std::set<std::string, std::less<>> kSchemaKeywords = {
    "type",      "format",      "minimum",   "maximum",   "exclusiveMinimum",
    "exclusiveMaximum",         "minLength", "maxLength", "pattern",
    "enum",      "properties",  "required",  "items",     "minItems",
    "maxItems",  "description", "example",   "examples",  "default",
    "nullable",  "title",       "additionalProperties",   "readOnly",
    "writeOnly", "deprecated",  "xml",       "$ref",
};

const std::set<std::string, std::less<>> kVerbs = {"get",  "post",  "put",    "delete",
                                                   "patch", "head", "options"};

class Reader {
 public:
  explicit Reader(const Json& root) : root_(root) {}

  OpenApiDocument Read() {
    OpenApiDocument doc;
    if (!root_.is_object()) throw ParseError("/: document must be an object");
    if (!root_.contains("openapi")) {
      Warn("/openapi", "missing version tag, assuming OpenAPI 3");
    } else if (!root_["openapi"].is_string() ||
               root_["openapi"].get<std::string>().rfind("3.", 0) != 0) {
      Warn("/openapi", "unsupported version " + root_["openapi"].dump());
    }
    if (root_.contains("info") && root_["info"].is_object() &&
        root_["info"].contains("title") && root_["info"]["title"].is_string()) {
      doc.title = root_["info"]["title"].get<std::string>();
    }
    auto paths = root_.find("paths");
    if (paths == root_.end() || !paths->is_object()) {
      throw ParseError("/paths: missing or not an object");
    }
    for (const auto& [path, item] : paths->items()) {
      const std::string ptr = "/paths/" + Escape(path);
      if (path.empty() || path[0] != '/') {
        throw ParseError(ptr + ": path must start with '/'");
      }
      if (!item.is_object()) throw ParseError(ptr + ": path item must be an object");
      std::vector<Json> shared;
      if (auto p = item.find("parameters"); p != item.end()) {
        if (!p->is_array()) throw ParseError(ptr + "/parameters: must be an array");
        shared.assign(p->begin(), p->end());
      }
      for (const auto& [key, op] : item.items()) {
        if (kVerbs.count(key) == 0) {
          if (key != "parameters" && key != "summary" && key != "description" &&
              key != "servers") {
            Warn(ptr + "/" + Escape(key), "ignored path item field");
          }
          continue;
        }
        doc.actions.push_back(ReadOperation(path, key, op, shared, ptr + "/" + key));
      }
    }
    doc.warnings = std::move(warnings_);
    return doc;
  }

 private:
  void Warn(const std::string& ptr, const std::string& msg) {
    warnings_.push_back(ptr + ": " + msg);
  }

  const Json& Deref(const Json& node, const std::string& ptr, std::string* out_ptr) {
    *out_ptr = ptr;
    const Json* cur = &node;
    std::vector<std::string> chain;
    while (cur->is_object() && cur->contains("$ref")) {
      const Json& ref = (*cur)["$ref"];
      if (!ref.is_string()) throw ParseError(*out_ptr + "/$ref: must be a string");
      const std::string target = ref.get<std::string>();
      if (target.rfind("#/", 0) != 0) {
        throw ParseError(*out_ptr + "/$ref: only local references are supported");
      }
      if (std::find(chain.begin(), chain.end(), target) != chain.end()) {
        throw ParseError(*out_ptr + "/$ref: reference cycle through " + target);
      }
      chain.push_back(target);
      try {
        cur = &root_.at(Json::json_pointer(target.substr(1)));
      } catch (const std::exception&) {
        throw ParseError(*out_ptr + "/$ref: unresolved reference " + target);
      }
      *out_ptr = target.substr(1);
    }
    return *cur;
  }

  GeneTemplate ReadSchema(const Json& raw, const std::string& raw_ptr) {
    std::string ptr;
    const Json& node = Deref(raw, raw_ptr, &ptr);
    if (node.is_object() && raw.is_object() && raw.contains("$ref")) {
      const std::string target = raw["$ref"].get<std::string>();
      if (std::find(stack_.begin(), stack_.end(), target) != stack_.end()) {
        throw ParseError(raw_ptr + "/$ref: recursive schema through " + target);
      }
      stack_.push_back(target);
      GeneTemplate t = ReadResolved(node, ptr);
      stack_.pop_back();
      return t;
    }
    return ReadResolved(node, ptr);
  }

  static std::optional<double> Number(const Json& node, const char* key) {
    auto it = node.find(key);
    if (it == node.end() || !it->is_number()) return std::nullopt;
    return it->get<double>();
  }

  static size_t Count(const Json& node, const char* key, size_t fallback) {
    auto it = node.find(key);
    if (it == node.end() || !it->is_number_integer() || it->get<int64_t>() < 0) {
      return fallback;
    }
    return it->get<size_t>();
  }

  GeneTemplate ReadResolved(const Json& node, const std::string& ptr) {
    using K = GeneTemplate::Kind;
    if (!node.is_object()) throw ParseError(ptr + ": schema must be an object");
    for (const char* poly : {"allOf", "oneOf", "anyOf", "not"}) {
      if (node.contains(poly)) {
        Warn(ptr, std::string("'") + poly + "' is not supported, using a free-form string");
        return GeneTemplate::String();
      }
    }
    for (const auto& [key, value] : node.items()) {
      if (kSchemaKeywords.count(key) == 0 && key.rfind("x-", 0) != 0) {
        Warn(ptr + "/" + Escape(key), "ignored keyword");
      }
    }
    std::string type;
    if (auto it = node.find("type"); it != node.end()) {
      if (!it->is_string()) throw ParseError(ptr + "/type: must be a string");
      type = it->get<std::string>();
    } else if (node.contains("properties")) {
      type = "object";
    } else if (node.contains("items")) {
      type = "array";
    } else if (node.contains("enum")) {
      type = "string";
    } else {
      Warn(ptr, "untyped schema, using a free-form string");
      return GeneTemplate::String();
    }
    const std::string format =
        node.contains("format") && node["format"].is_string()
            ? node["format"].get<std::string>()
            : "";

    if (node.contains("enum")) {
      const Json& values = node["enum"];
      if (!values.is_array() || values.empty()) {
        throw ParseError(ptr + "/enum: must be a non-empty array");
      }
      std::vector<std::string> out;
      for (const auto& v : values) out.push_back(v.is_string() ? v.get<std::string>() : v.dump());
      return GeneTemplate::Enum(std::move(out));
    }
    if (type == "integer") {
      GeneTemplate t = GeneTemplate::Integer(Number(node, "minimum"), Number(node, "maximum"));
      if (format == "int64") t.kind = K::kLong;
      ApplyExclusive(node, t, 1.0);
      CheckBounds(t, ptr);
      return t;
    }
    if (type == "number") {
      GeneTemplate t = GeneTemplate::Of(K::kFloat);
      t.minimum = Number(node, "minimum");
      t.maximum = Number(node, "maximum");
      ApplyExclusive(node, t, 0.0);
      CheckBounds(t, ptr);
      return t;
    }
    if (type == "boolean") return GeneTemplate::Of(K::kBoolean);
    if (type == "string") {
      if (format == "uuid") return GeneTemplate::Of(K::kUuid);
      if (format == "uri" || format == "uri-reference") return GeneTemplate::Of(K::kUri);
      if (format == "url") return GeneTemplate::Of(K::kUrl);
      const size_t lo = Count(node, "minLength", 0);
      const size_t hi = Count(node, "maxLength", std::max(lo, kDefaultMaxLength));
      if (lo > hi) throw ParseError(ptr + ": minLength exceeds maxLength");
      GeneTemplate t = GeneTemplate::String(lo, hi);
      if (auto it = node.find("pattern"); it != node.end() && it->is_string()) {
        try {
          RegexGene probe(it->get<std::string>());
          t.pattern = it->get<std::string>();
        } catch (const ParseError&) {
          Warn(ptr + "/pattern", "unsupported regular expression, ignored");
        }
      }
      return t;
    }
    if (type == "array") {
      GeneTemplate items = GeneTemplate::String();
      if (auto it = node.find("items"); it != node.end()) {
        items = ReadSchema(*it, ptr + "/items");
      } else {
        Warn(ptr, "array without items, using strings");
      }
      GeneTemplate t = GeneTemplate::Array(std::move(items));
      t.min_items = Count(node, "minItems", 0);
      t.max_items = Count(node, "maxItems", std::max<size_t>(t.min_items, 4));
      if (t.min_items > t.max_items) throw ParseError(ptr + ": minItems exceeds maxItems");
      return t;
    }
    if (type == "object") {
      GeneTemplate t = GeneTemplate::Of(K::kObject);
      std::set<std::string> required;
      if (auto it = node.find("required"); it != node.end() && it->is_array()) {
        for (const auto& r : *it) {
          if (r.is_string()) required.insert(r.get<std::string>());
        }
      }
      if (auto it = node.find("properties"); it != node.end()) {
        if (!it->is_object()) throw ParseError(ptr + "/properties: must be an object");
        for (const auto& [name, sub] : it->items()) {
          if (IsReservedName(name)) {
            Warn(ptr + "/properties/" + Escape(name), "reserved name dropped");
            continue;
          }
          t.fields.push_back({name, ReadSchema(sub, ptr + "/properties/" + Escape(name)),
                              required.count(name) > 0});
        }
      }
      return t;
    }
    Warn(ptr + "/type", "unsupported type '" + type + "', using a free-form string");
    return GeneTemplate::String();
  }

  static void ApplyExclusive(const Json& node, GeneTemplate& t, double step) {
    auto bump = [&](const char* key, std::optional<double>& bound, double dir) {
      auto it = node.find(key);
      if (it == node.end()) return;
      if (it->is_boolean() && it->get<bool>() && bound) {
        bound = step > 0 ? *bound + dir * step : std::nextafter(*bound, dir * INFINITY);
      } else if (it->is_number()) {
        const double v = it->get<double>();
        bound = step > 0 ? v + dir * step : std::nextafter(v, dir * INFINITY);
      }
    };
    bump("exclusiveMinimum", t.minimum, 1.0);
    bump("exclusiveMaximum", t.maximum, -1.0);
  }

  static void CheckBounds(const GeneTemplate& t, const std::string& ptr) {
    if (!t.minimum || !t.maximum) return;
    const bool integral = t.kind != GeneTemplate::Kind::kFloat;
    const double lo = integral ? std::ceil(*t.minimum) : *t.minimum;
    const double hi = integral ? std::floor(*t.maximum) : *t.maximum;
    if (lo > hi) throw ParseError(ptr + ": minimum exceeds maximum");
  }

  void ReadParameter(const Json& raw, const std::string& raw_ptr, ActionTemplate& a) {
    std::string ptr;
    const Json& p = Deref(raw, raw_ptr, &ptr);
    if (!p.is_object()) throw ParseError(ptr + ": parameter must be an object");
    if (!p.contains("name") || !p["name"].is_string()) {
      throw ParseError(ptr + "/name: missing");
    }
    if (!p.contains("in") || !p["in"].is_string()) throw ParseError(ptr + "/in: missing");
    const std::string name = p["name"].get<std::string>();
    const std::string in = p["in"].get<std::string>();
    InputLocation loc;
    if (in == "path") {
      loc = InputLocation::kPath;
    } else if (in == "query") {
      loc = InputLocation::kQuery;
    } else if (in == "header") {
      loc = InputLocation::kHeader;
    } else {
      Warn(ptr + "/in", "'" + in + "' parameters are not supported");
      return;
    }
    if (IsReservedName(name)) {
      Warn(ptr + "/name", "reserved name dropped");
      return;
    }
    InputSpec spec;
    spec.name = name;
    spec.required = loc == InputLocation::kPath ||
                    (p.contains("required") && p["required"].is_boolean() &&
                     p["required"].get<bool>());
    if (auto s = p.find("schema"); s != p.end()) {
      spec.type = ReadSchema(*s, ptr + "/schema");
    } else {
      Warn(ptr, "parameter without schema, using a free-form string");
      spec.type = GeneTemplate::String();
    }
    auto& list = a.Inputs(loc);
    for (auto& existing : list) {
      const bool same = loc == InputLocation::kHeader ? EqualsIgnoreCase(existing.name, name)
                                                      : existing.name == name;
      if (same) {
        existing = std::move(spec);  // operation level overrides path level
        return;
      }
    }
    list.push_back(std::move(spec));
  }

  static const Json* JsonContent(const Json& content) {
    if (!content.is_object() || content.empty()) return nullptr;
    for (const auto& [media, entry] : content.items()) {
      if (media.find("json") != std::string::npos) return &entry;
    }
    return &content.begin().value();
  }

  ActionTemplate ReadOperation(const std::string& path, const std::string& verb,
                               const Json& op, const std::vector<Json>& shared,
                               const std::string& ptr) {
    if (!op.is_object()) throw ParseError(ptr + ": operation must be an object");
    ActionTemplate a;
    a.path = path;
    a.verb = verb;
    std::transform(a.verb.begin(), a.verb.end(), a.verb.begin(), ::toupper);
    for (size_t i = 0; i < shared.size(); ++i) {
      ReadParameter(shared[i], "/paths/" + Escape(path) + "/parameters/" + std::to_string(i),
                    a);
    }
    if (auto ps = op.find("parameters"); ps != op.end()) {
      if (!ps->is_array()) throw ParseError(ptr + "/parameters: must be an array");
      for (size_t i = 0; i < ps->size(); ++i) {
        ReadParameter((*ps)[i], ptr + "/parameters/" + std::to_string(i), a);
      }
    }
    if (auto rb = op.find("requestBody"); rb != op.end()) {
      std::string body_ptr;
      const Json& body = Deref(*rb, ptr + "/requestBody", &body_ptr);
      const Json* media = body.contains("content") ? JsonContent(body["content"]) : nullptr;
      if (media == nullptr || !media->contains("schema")) {
        Warn(body_ptr, "request body without schema treated as opaque");
        a.body = GeneTemplate::Of(GeneTemplate::Kind::kObject);
        a.body_opaque = true;
      } else {
        a.body = ReadSchema((*media)["schema"], body_ptr + "/content/schema");
        a.body_opaque =
            a.body->kind == GeneTemplate::Kind::kObject && a.body->fields.empty();
      }
    }
    if (auto rs = op.find("responses"); rs != op.end() && rs->is_object()) {
      for (const auto& [code, resp] : rs->items()) {
        ResponseSpec spec;
        if (code == "default") {
          spec.status = 0;
        } else {
          int status = 0;
          auto [p, ec] = std::from_chars(code.data(), code.data() + code.size(), status);
          if (ec != std::errc() || p != code.data() + code.size() || status < 100 ||
              status > 599) {
            Warn(ptr + "/responses/" + Escape(code), "unsupported status key");
            continue;
          }
          spec.status = status;
        }
        std::string resp_ptr;
        const Json& r = Deref(resp, ptr + "/responses/" + Escape(code), &resp_ptr);
        const Json* media =
            r.is_object() && r.contains("content") ? JsonContent(r["content"]) : nullptr;
        if (media != nullptr && media->contains("schema")) {
          GeneTemplate shape = ReadSchema((*media)["schema"], resp_ptr + "/content/schema");
          if (shape.kind == GeneTemplate::Kind::kObject) {
            spec.object_body = true;
            for (const auto& f : shape.fields) {
              spec.fields.push_back(f.name);
              if (f.required) spec.required.push_back(f.name);
            }
          }
        }
        a.responses.push_back(std::move(spec));
      }
    }
    return a;
  }

  const Json& root_;
  std::vector<std::string> warnings_;
  std::vector<std::string> stack_;
};

}  // namespace

OpenApiDocument ParseOpenApi(std::string_view text, DocumentFormat format) {
  Json root;
  if (format == DocumentFormat::kJson) {
    try {
      root = Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw ParseError("json:" + LineColumn(text, e.byte > 0 ? e.byte - 1 : 0) + ": " +
                       e.what());
    }
  } else {
    try {
      root = YamlToJson(YAML::Load(std::string(text)));
    } catch (const YAML::Exception& e) {
      throw ParseError("yaml:" + std::to_string(e.mark.line + 1) + ":" +
                       std::to_string(e.mark.column + 1) + ": " + e.msg);
    }
  }
  return Reader(root).Read();
}

OpenApiDocument LoadOpenApi(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const bool yaml = path.ends_with(".yaml") || path.ends_with(".yml");
  return ParseOpenApi(buf.str(), yaml ? DocumentFormat::kYaml : DocumentFormat::kJson);
}

// ---------------------------------------------------------------------------

ActionTemplate Expand(const ActionTemplate& t, const DiscoveredInput& d) {
  ActionTemplate out = t;
  if (IsReservedName(d.name) || d.name.empty() || d.location == InputLocation::kPath) {
    return out;
  }
  if (d.location == InputLocation::kBody) {
    if (!out.body) {
      out.body = GeneTemplate::Of(GeneTemplate::Kind::kObject);
    }
    GeneTemplate* node = &*out.body;
    const auto segments = SplitDots(d.name);
    for (size_t i = 0; i < segments.size(); ++i) {
      if (node->kind != GeneTemplate::Kind::kObject || segments[i].empty()) return t;
      const bool leaf = i + 1 == segments.size();
      FieldTemplate* f = FindField(*node, segments[i]);
      if (f == nullptr) {
        node->fields.push_back(
            {segments[i],
             leaf ? TemplateFor(d.type) : GeneTemplate::Of(GeneTemplate::Kind::kObject),
             false});
        f = &node->fields.back();
      } else if (leaf) {
        return t;
      }
      node = &f->type;
    }
    out.body_opaque = false;
    return out;
  }
  auto& list = out.Inputs(d.location);
  for (auto& in : list) {
    const bool same = d.location == InputLocation::kHeader
                          ? EqualsIgnoreCase(in.name, d.name)
                          : in.name == d.name;
    if (!same) continue;
    // Only a discovered free-form input may learn its type.
    if (in.discovered && in.type.kind == GeneTemplate::Kind::kString &&
        (d.type == InferredType::kNumber || d.type == InferredType::kBoolean)) {
      in.type = TemplateFor(d.type);
    }
    return out;
  }
  list.push_back({d.name, TemplateFor(d.type), false, true});
  return out;
}

ActionTemplate DiscoverBodyDto(const ActionTemplate& t, const DtoShape& dto) {
  if (t.body && !t.body_opaque) return t;
  ActionTemplate out = t;
  out.body = dto.ToTemplate();
  out.body_opaque = false;
  out.body_discovered = true;
  return out;
}

}  // namespace wbfuzz
