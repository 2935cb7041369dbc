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

#include "wbfuzz/sqlgen.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "wbfuzz/errors.h"
#include "wbfuzz/regex_gene.h"

namespace wbfuzz {

namespace {

constexpr std::string_view kAlnum =
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
constexpr size_t kMaxGeneratedLength = 64;

std::string Lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

bool SameName(std::string_view a, std::string_view b) { return Lower(a) == Lower(b); }

std::vector<std::string> Tokens(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line.substr(0, line.find('#')));
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

double ParseNumber(const std::string& s, size_t line) {
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw ParseError("line " + std::to_string(line) + ": bad number '" + s + "'");
  }
  return v;
}

SqlType ParseSqlType(const std::string& s, size_t line) {
  const std::string t = Lower(s);
  if (t == "integer" || t == "int") return SqlType::kInteger;
  if (t == "bigint") return SqlType::kBigint;
  if (t == "double" || t == "float" || t == "real") return SqlType::kDouble;
  if (t == "varchar" || t == "text") return SqlType::kVarchar;
  if (t == "boolean" || t == "bool") return SqlType::kBoolean;
  throw ParseError("line " + std::to_string(line) + ": unknown column type '" + s + "'");
}

template <typename Fn>
void ForEachLine(std::string_view text, Fn fn) {
  std::istringstream in{std::string(text)};
  std::string line;
  size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    auto toks = Tokens(line);
    if (!toks.empty()) fn(toks, n);
  }
}

ValidationConstraint ParseConstraint(const std::string& tok, size_t line) {
  const size_t open = tok.find('(');
  const std::string name = tok.substr(0, open);
  ConstraintKind kind;
  try {
    kind = ConstraintKindFromName(name);
  } catch (const ConfigError& e) {
    throw ParseError("line " + std::to_string(line) + ": " + e.what());
  }
  std::string args;
  if (open != std::string::npos) {
    if (tok.back() != ')') {
      throw ParseError("line " + std::to_string(line) + ": unbalanced '" + tok + "'");
    }
    args = tok.substr(open + 1, tok.size() - open - 2);
  }
  auto need_args = [&](bool want) {
    if (want == args.empty()) {
      throw ParseError("line " + std::to_string(line) + ": bad arguments in '" + tok + "'");
    }
  };
  switch (kind) {
    case ConstraintKind::kMin:
      need_args(true);
      return ValidationConstraint::Min(ParseNumber(args, line));
    case ConstraintKind::kMax:
      need_args(true);
      return ValidationConstraint::Max(ParseNumber(args, line));
    case ConstraintKind::kSize: {
      need_args(true);
      const size_t comma = args.find(',');
      if (comma == std::string::npos) {
        throw ParseError("line " + std::to_string(line) + ": Size needs two bounds");
      }
      return ValidationConstraint::Size(ParseNumber(args.substr(0, comma), line),
                                        ParseNumber(args.substr(comma + 1), line));
    }
    case ConstraintKind::kPattern:
      need_args(true);
      return ValidationConstraint::Pattern(args);
    case ConstraintKind::kEnumMembership: {
      need_args(true);
      std::vector<std::string> values;
      std::istringstream in(args);
      std::string v;
      while (std::getline(in, v, ',')) values.push_back(v);
      return ValidationConstraint::OneOf(values);
    }
    case ConstraintKind::kCustom: {
      ValidationConstraint c = ValidationConstraint::Of(kind);
      c.name = args;
      return c;
    }
    default:
      need_args(false);
      return ValidationConstraint::Of(kind);
  }
}

}  // namespace

std::string SqlTypeName(SqlType t) {
  switch (t) {
    case SqlType::kInteger: return "integer";
    case SqlType::kBigint: return "bigint";
    case SqlType::kDouble: return "double";
    case SqlType::kVarchar: return "varchar";
    case SqlType::kBoolean: return "boolean";
  }
  return "unknown";
}

const Column* TableSchema::Find(std::string_view column) const {
  for (const auto& c : columns) {
    if (SameName(c.name, column)) return &c;
  }
  return nullptr;
}

const Column* TableSchema::PrimaryKey() const {
  for (const auto& c : columns) {
    if (c.primary_key) return &c;
  }
  return nullptr;
}

const ColumnRule* EffectiveConstraints::Find(std::string_view column) const {
  for (const auto& r : columns) {
    if (SameName(r.column.name, column)) return &r;
  }
  return nullptr;
}

std::vector<TableSchema> ParseTableSchemas(std::string_view text) {
  std::vector<TableSchema> out;
  bool open = false;
  ForEachLine(text, [&](const std::vector<std::string>& t, size_t line) {
    const std::string where = "line " + std::to_string(line) + ": ";
    if (t[0] == "table") {
      if (open) throw ParseError(where + "missing 'end' before new table");
      if (t.size() != 2) throw ParseError(where + "expected 'table NAME'");
      for (const auto& existing : out) {
        if (SameName(existing.name, t[1])) throw ParseError(where + "duplicate table " + t[1]);
      }
      out.push_back({t[1], {}});
      open = true;
    } else if (t[0] == "end") {
      if (!open) throw ParseError(where + "'end' outside a table");
      open = false;
    } else if (t[0] == "column") {
      if (!open) throw ParseError(where + "column outside a table");
      if (t.size() < 3) throw ParseError(where + "expected 'column NAME TYPE'");
      Column c;
      c.name = t[1];
      c.type = ParseSqlType(t[2], line);
      for (size_t i = 3; i < t.size(); ++i) {
        if (t[i] == "nullable") {
          c.nullable = true;
        } else if (t[i] == "unique") {
          c.unique = true;
        } else if (t[i] == "pk") {
          c.primary_key = true;
        } else if (t[i] == "maxlen" && i + 1 < t.size()) {
          const double n = ParseNumber(t[++i], line);
          if (n < 1) throw ParseError(where + "maxlen must be positive");
          c.max_length = static_cast<size_t>(n);
        } else if (t[i] == "check" && i + 1 < t.size()) {
          const std::string& range = t[++i];
          const size_t dots = range.find("..");
          if (dots == std::string::npos) throw ParseError(where + "check needs MIN..MAX");
          const std::string lo = range.substr(0, dots);
          const std::string hi = range.substr(dots + 2);
          if (!lo.empty()) c.check_min = ParseNumber(lo, line);
          if (!hi.empty()) c.check_max = ParseNumber(hi, line);
          if (c.check_min && c.check_max && *c.check_min > *c.check_max) {
            throw ParseError(where + "empty check range");
          }
        } else {
          throw ParseError(where + "unknown column attribute '" + t[i] + "'");
        }
      }
      if (c.primary_key) {
        if (c.nullable) throw ParseError(where + "primary key cannot be nullable");
        c.unique = true;
      }
      auto& table = out.back();
      if (table.Find(c.name) != nullptr) throw ParseError(where + "duplicate column " + c.name);
      if (c.primary_key && table.PrimaryKey() != nullptr) {
        throw ParseError(where + "second primary key");
      }
      table.columns.push_back(std::move(c));
    } else {
      throw ParseError(where + "unexpected '" + t[0] + "'");
    }
  });
  if (open) throw ParseError("end of input: missing 'end'");
  return out;
}

std::vector<EntityConstraintSet> ParseEntities(std::string_view text) {
  std::vector<EntityConstraintSet> out;
  bool open = false;
  ForEachLine(text, [&](const std::vector<std::string>& t, size_t line) {
    const std::string where = "line " + std::to_string(line) + ": ";
    if (t[0] == "entity") {
      if (open) throw ParseError(where + "missing 'end' before new entity");
      EntityConstraintSet e;
      if (t.size() == 2) {
        e.name = t[1];
      } else if (t.size() == 4 && t[2] == "table") {
        e.name = t[1];
        e.table = t[3];
      } else {
        throw ParseError(where + "expected 'entity NAME [table TABLE]'");
      }
      out.push_back(std::move(e));
      open = true;
    } else if (t[0] == "end") {
      if (!open) throw ParseError(where + "'end' outside an entity");
      open = false;
    } else if (t[0] == "field") {
      if (!open) throw ParseError(where + "field outside an entity");
      if (t.size() < 2) throw ParseError(where + "expected 'field NAME'");
      EntityField f;
      f.name = t[1];
      for (size_t i = 2; i < t.size(); ++i) {
        if (t[i] == "primitive") {
          f.primitive = true;
        } else if (t[i] == "column" && i + 1 < t.size()) {
          f.column = t[++i];
        } else if (t[i] == "enum" && i + 1 < t.size()) {
          std::istringstream in(t[++i]);
          std::string v;
          while (std::getline(in, v, ',')) {
            if (!v.empty()) f.enum_values.push_back(v);
          }
          if (f.enum_values.empty()) throw ParseError(where + "empty enum");
        } else if (t[i] == "validate" && i + 1 < t.size()) {
          f.constraints.push_back(ParseConstraint(t[++i], line));
        } else {
          throw ParseError(where + "unknown field attribute '" + t[i] + "'");
        }
      }
      for (const auto& existing : out.back().fields) {
        if (existing.name == f.name) throw ParseError(where + "duplicate field " + f.name);
      }
      out.back().fields.push_back(std::move(f));
    } else {
      throw ParseError(where + "unexpected '" + t[0] + "'");
    }
  });
  if (open) throw ParseError("end of input: missing 'end'");
  return out;
}

std::string SnakeCase(std::string_view name) {
  std::string out;
  for (size_t i = 0; i < name.size(); ++i) {
    const unsigned char c = name[i];
    if (std::isupper(c)) {
      const bool prev_lower = i > 0 && (std::islower(static_cast<unsigned char>(name[i - 1])) ||
                                        std::isdigit(static_cast<unsigned char>(name[i - 1])));
      const bool next_lower =
          i + 1 < name.size() && std::islower(static_cast<unsigned char>(name[i + 1]));
      const bool prev_upper = i > 0 && std::isupper(static_cast<unsigned char>(name[i - 1]));
      if (!out.empty() && out.back() != '_' && (prev_lower || (prev_upper && next_lower))) {
        out += '_';
      }
      out += static_cast<char>(std::tolower(c));
    } else {
      out += static_cast<char>(c);
    }
  }
  return out;
}

EntityBinding Resolve(const EntityConstraintSet& entity,
                      const std::vector<TableSchema>& tables) {
  const std::string wanted = entity.table.empty() ? SnakeCase(entity.name) : entity.table;
  const TableSchema* table = nullptr;
  for (const auto& t : tables) {
    if (SameName(t.name, wanted)) table = &t;
  }
  if (table == nullptr) {
    std::string candidates;
    for (const auto& t : tables) candidates += (candidates.empty() ? "" : ", ") + t.name;
    throw ReconcileError("entity " + entity.name + ": no table '" + wanted +
                         "' (candidates: " + candidates + ")");
  }
  EntityBinding b{entity.name, table->name, {}};
  for (const auto& f : entity.fields) {
    const std::string col = f.column.empty() ? SnakeCase(f.name) : f.column;
    const Column* c = table->Find(col);
    if (c == nullptr) {
      std::string candidates;
      for (const auto& cc : table->columns) {
        candidates += (candidates.empty() ? "" : ", ") + cc.name;
      }
      throw ReconcileError("entity " + entity.name + ": field " + f.name + " has no column '" +
                           col + "' in " + table->name + " (candidates: " + candidates + ")");
    }
    b.fields.push_back({f.name, c->name});
  }
  return b;
}

// ---------------------------------------------------------------------------

namespace {

std::pair<double, double> TypeRange(SqlType t) {
  switch (t) {
    case SqlType::kInteger:
      return {std::numeric_limits<int32_t>::min(), std::numeric_limits<int32_t>::max()};
    case SqlType::kBigint:
      return {-9.2e18, 9.2e18};
    default:
      return {-1e9, 1e9};
  }
}

bool IsNumeric(SqlType t) {
  return t == SqlType::kInteger || t == SqlType::kBigint || t == SqlType::kDouble;
}

ColumnRule TableRule(const Column& c) {
  ColumnRule r;
  r.column = c;
  r.not_null = !c.nullable;
  r.min = c.check_min;
  r.max = c.check_max;
  r.max_length = c.type == SqlType::kVarchar ? c.max_length : 0;
  return r;
}

// Effective [lo, hi] for numeric rules, including the type range.
std::pair<double, double> Domain(const ColumnRule& r) {
  auto [lo, hi] = TypeRange(r.column.type);
  if (r.min) lo = std::max(lo, *r.min);
  if (r.max) hi = std::min(hi, *r.max);
  if (r.column.type != SqlType::kDouble) {
    lo = std::ceil(lo);
    hi = std::floor(hi);
  }
  return {lo, hi};
}

std::pair<double, double> TableDomain(const Column& c) { return Domain(TableRule(c)); }

bool IsBlank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char ch) { return std::isspace(ch); });
}

void Tighten(ColumnRule& r, const ValidationConstraint& v, std::vector<std::string>& warnings,
             const std::string& where) {
  auto lower = [&](double x) { r.min = r.min ? std::max(*r.min, x) : x; };
  auto upper = [&](double x) { r.max = r.max ? std::min(*r.max, x) : x; };
  const bool numeric = IsNumeric(r.column.type);
  const bool text = r.column.type == SqlType::kVarchar;
  const double step = r.column.type == SqlType::kDouble ? 1e-9 : 1.0;
  switch (v.kind) {
    case ConstraintKind::kNotNull:
    case ConstraintKind::kImpliedNotNull:
      r.not_null = true;
      return;
    case ConstraintKind::kMin: if (numeric) return lower(v.bound); break;
    case ConstraintKind::kMax: if (numeric) return upper(v.bound); break;
    case ConstraintKind::kPositive: if (numeric) return lower(step); break;
    case ConstraintKind::kPositiveOrZero: if (numeric) return lower(0); break;
    case ConstraintKind::kNegative: if (numeric) return upper(-step); break;
    case ConstraintKind::kNegativeOrZero: if (numeric) return upper(0); break;
    case ConstraintKind::kSize:
      if (text) {
        r.min_length = std::max(r.min_length, static_cast<size_t>(std::max(0.0, v.bound)));
        r.max_length = std::min(r.max_length, static_cast<size_t>(std::max(0.0, v.upper)));
        return;
      }
      break;
    case ConstraintKind::kNotEmpty:
    case ConstraintKind::kNotBlank:
      if (text) {
        r.not_null = true;
        r.not_blank = true;
        r.min_length = std::max<size_t>(r.min_length, 1);
        return;
      }
      break;
    case ConstraintKind::kPattern:
      if (text) {
        r.pattern = v.pattern;
        return;
      }
      break;
    case ConstraintKind::kEnumMembership:
      if (text) {
        r.enum_values = v.values;
        return;
      }
      break;
    default:
      break;
  }
  warnings.push_back(where + ": constraint " + Describe(v) + " not used for data generation");
}

bool Empty(const ColumnRule& r) {
  if (IsNumeric(r.column.type)) {
    auto [lo, hi] = Domain(r);
    if (lo > hi) return true;
  }
  if (r.column.type == SqlType::kVarchar) {
    if (r.min_length > r.max_length) return true;
    if (!r.enum_values.empty()) {
      return std::none_of(r.enum_values.begin(), r.enum_values.end(),
                          [&](const std::string& v) {
                            return v.size() >= r.min_length && v.size() <= r.max_length;
                          });
    }
  }
  return false;
}

}  // namespace

bool SatisfiesTable(const Column& c, const Json& value) {
  if (value.is_null()) return c.nullable;
  switch (c.type) {
    case SqlType::kInteger:
    case SqlType::kBigint: {
      if (!value.is_number_integer()) return false;
      auto [lo, hi] = TableDomain(c);
      const double v = value.get<double>();
      return v >= lo && v <= hi;
    }
    case SqlType::kDouble: {
      if (!value.is_number()) return false;
      const double v = value.get<double>();
      return (!c.check_min || v >= *c.check_min) && (!c.check_max || v <= *c.check_max);
    }
    case SqlType::kVarchar:
      return value.is_string() && value.get_ref<const std::string&>().size() <= c.max_length;
    case SqlType::kBoolean:
      return value.is_boolean();
  }
  return false;
}

bool SatisfiesRule(const ColumnRule& r, const Json& value) {
  if (!SatisfiesTable(r.column, value)) return false;
  if (value.is_null()) return !r.not_null;
  if (IsNumeric(r.column.type)) {
    auto [lo, hi] = Domain(r);
    const double v = value.get<double>();
    return v >= lo && v <= hi;
  }
  if (r.column.type == SqlType::kVarchar) {
    const auto& s = value.get_ref<const std::string&>();
    if (s.size() < r.min_length || s.size() > r.max_length) return false;
    if (r.not_blank && IsBlank(s)) return false;
    if (!r.enum_values.empty() &&
        std::find(r.enum_values.begin(), r.enum_values.end(), s) == r.enum_values.end()) {
      return false;
    }
    if (!r.pattern.empty() && !RegexFullMatch(r.pattern, s)) return false;
  }
  return true;
}

bool Violates(const ExtraConstraint& e, const ColumnRule& r, const Json& value) {
  using K = ExtraConstraint::Kind;
  switch (e.kind) {
    case K::kNotNull:
      return value.is_null();
    case K::kEnum:
      return value.is_string() &&
             std::find(r.enum_values.begin(), r.enum_values.end(), value.get<std::string>()) ==
                 r.enum_values.end();
    case K::kRange: {
      if (!value.is_number()) return false;
      auto [lo, hi] = Domain(r);
      return value.get<double>() < lo || value.get<double>() > hi;
    }
    case K::kLength:
      return value.is_string() && (value.get_ref<const std::string&>().size() < r.min_length ||
                                   value.get_ref<const std::string&>().size() > r.max_length);
    case K::kNotBlank:
      return value.is_string() && IsBlank(value.get<std::string>());
    case K::kPattern:
      return value.is_string() && !RegexFullMatch(r.pattern, value.get<std::string>());
  }
  return false;
}

EffectiveConstraints Reconcile(const TableSchema& table, const EntityConstraintSet* entity,
                               const std::vector<TableSchema>& all_tables) {
  EffectiveConstraints eff;
  eff.table = table.name;
  for (const auto& c : table.columns) eff.columns.push_back(TableRule(c));
  if (entity == nullptr) return eff;
  const EntityBinding binding =
      Resolve(*entity, all_tables.empty() ? std::vector<TableSchema>{table} : all_tables);
  if (!SameName(binding.table, table.name)) {
    throw ReconcileError("entity " + entity->name + " maps to " + binding.table + ", not " +
                         table.name);
  }
  using K = ExtraConstraint::Kind;
  for (size_t i = 0; i < entity->fields.size(); ++i) {
    const EntityField& f = entity->fields[i];
    auto it = std::find_if(eff.columns.begin(), eff.columns.end(), [&](const ColumnRule& r) {
      return SameName(r.column.name, binding.fields[i].column);
    });
    ColumnRule& rule = *it;
    const ColumnRule table_rule = TableRule(rule.column);
    ColumnRule merged = rule;
    const std::string where = entity->name + "." + f.name;
    std::vector<ExtraConstraint> extras;
    auto extra = [&](K kind, std::string desc, bool crashes) {
      extras.push_back({kind, merged.column.name, std::move(desc), crashes});
    };
    if (f.primitive) merged.not_null = true;
    if (!f.enum_values.empty()) {
      if (merged.column.type == SqlType::kVarchar) {
        merged.enum_values = f.enum_values;
      } else {
        eff.warnings.push_back(where + ": enum on non-text column ignored");
      }
    }
    for (const auto& v : f.constraints) Tighten(merged, v, eff.warnings, where);
    // Keep only enum values the column can store.
    if (!merged.enum_values.empty()) {
      std::vector<std::string> fitting;
      for (const auto& v : merged.enum_values) {
        if (v.size() >= merged.min_length && v.size() <= merged.max_length) fitting.push_back(v);
      }
      if (!fitting.empty()) merged.enum_values = fitting;
    }
    if (Empty(merged)) {
      eff.warnings.push_back(where + ": entity constraints contradict table " + table.name +
                             ", using table constraints only");
      rule.contradictory = true;
      continue;
    }
    // Record each added rule that a row could break while staying
    // storable.
    const bool nullable = table_rule.column.nullable;
    const bool entity_not_null =
        f.primitive || std::any_of(f.constraints.begin(), f.constraints.end(),
                                   [](const ValidationConstraint& c) {
                                     return c.kind == ConstraintKind::kNotNull ||
                                            c.kind == ConstraintKind::kImpliedNotNull;
                                   });
    if (nullable && entity_not_null) {
      extra(K::kNotNull, f.primitive ? "primitive field" : "NotNull", f.primitive);
    }
    if (!merged.enum_values.empty()) {
      extra(K::kEnum, "enum", !f.enum_values.empty());
    }
    if (IsNumeric(merged.column.type)) {
      auto [tlo, thi] = Domain(table_rule);
      auto [lo, hi] = Domain(merged);
      if (lo > tlo || hi < thi) extra(K::kRange, "range", false);
    }
    if (merged.column.type == SqlType::kVarchar && merged.enum_values.empty()) {
      if (merged.not_blank) extra(K::kNotBlank, "not blank", false);
      if (merged.min_length > (merged.not_blank ? 1u : 0u) ||
          merged.max_length < table_rule.max_length) {
        extra(K::kLength, "size", false);
      }
      if (!merged.pattern.empty()) extra(K::kPattern, "pattern", false);
    }
    rule = merged;
    eff.extras.insert(eff.extras.end(), extras.begin(), extras.end());
  }
  return eff;
}

// ---------------------------------------------------------------------------

GeneBox GeneForRule(const ColumnRule& r) {
  GeneBox value;
  switch (r.column.type) {
    case SqlType::kInteger:
    case SqlType::kBigint: {
      auto [lo, hi] = Domain(r);
      value = IntegerGene(static_cast<int64_t>(lo), static_cast<int64_t>(hi),
                          r.column.type == SqlType::kBigint);
      break;
    }
    case SqlType::kDouble: {
      auto [lo, hi] = Domain(r);
      value = FloatGene(lo, hi);
      break;
    }
    case SqlType::kBoolean:
      value = BooleanGene();
      break;
    case SqlType::kVarchar:
      if (!r.enum_values.empty()) {
        value = EnumGene(r.enum_values);
      } else if (!r.pattern.empty()) {
        try {
          value = RegexGene(r.pattern);
        } catch (const ParseError&) {
        }
      }
      if (!value) {
        const size_t hi = std::min(r.max_length, std::max(r.min_length, kMaxGeneratedLength));
        value = StringGene(r.min_length, hi, std::string(kAlnum));
      }
      break;
  }
  if (r.not_null) return value;
  return OptionalGene(std::move(value), true);
}

Json SqlInsertAction::Values() const {
  Json out = Json::object();
  for (const auto& [name, gene] : columns) out[name] = gene->ToJson();
  if (violation) out[violation->constraint.column] = violation->value;
  return out;
}

namespace {

std::optional<Json> ViolatingValue(const ExtraConstraint& e, const ColumnRule& r, Rng& rng) {
  using K = ExtraConstraint::Kind;
  auto random_text = [&](size_t len) {
    std::string s;
    for (size_t i = 0; i < len; ++i) s += static_cast<char>('A' + rng.Index(26));
    return s;
  };
  std::vector<Json> candidates;
  switch (e.kind) {
    case K::kNotNull:
      candidates.push_back(nullptr);
      break;
    case K::kEnum:
      for (int i = 0; i < 8; ++i) {
        candidates.push_back(random_text(std::min<size_t>(10, r.column.max_length)));
      }
      break;
    case K::kRange: {
      auto [lo, hi] = Domain(r);
      const double below = lo - static_cast<double>(1 + rng.Index(5));
      const double above = hi + static_cast<double>(1 + rng.Index(5));
      for (double v : {rng.Chance(0.5) ? below : above, below, above, lo - 1, hi + 1}) {
        if (r.column.type == SqlType::kDouble) {
          candidates.push_back(v);
        } else {
          candidates.push_back(static_cast<int64_t>(v));
        }
      }
      break;
    }
    case K::kLength:
      if (r.min_length > 0) candidates.push_back(random_text(r.min_length - 1));
      candidates.push_back(random_text(r.max_length + 1));
      break;
    case K::kNotBlank:
      candidates.push_back("");
      candidates.push_back(" ");
      break;
    case K::kPattern:
      for (int i = 0; i < 8; ++i) candidates.push_back(random_text(1 + rng.Index(8)));
      candidates.push_back("");
      break;
  }
  for (const auto& v : candidates) {
    if (SatisfiesTable(r.column, v) && Violates(e, r, v)) return v;
  }
  return std::nullopt;
}

}  // namespace

SqlInsertAction GenerateInsert(const EffectiveConstraints& eff, Rng& rng,
                               double violate_probability, const GeneContext& ctx) {
  SqlInsertAction a;
  a.table = eff.table;
  for (const auto& r : eff.columns) {
    if (r.column.primary_key) continue;
    GeneBox g = GeneForRule(r);
    g->Randomize(rng, ctx);
    a.columns.emplace_back(r.column.name, std::move(g));
  }
  if (!eff.extras.empty() && rng.Chance(violate_probability)) {
    const ExtraConstraint& e = eff.extras[rng.Index(eff.extras.size())];
    const ColumnRule* r = eff.Find(e.column);
    if (auto v = ViolatingValue(e, *r, rng)) a.violation = Violation{e, *v};
  }
  return a;
}

std::vector<std::string> TablesToFill(const std::vector<std::string>& empty_selects,
                                      const std::vector<SqlInsertAction>& existing,
                                      size_t max_per_table) {
  std::vector<std::string> out;
  for (const auto& t : empty_selects) {
    if (std::any_of(out.begin(), out.end(), [&](const std::string& o) { return SameName(o, t); })) {
      continue;
    }
    const size_t have = std::count_if(existing.begin(), existing.end(),
                                      [&](const SqlInsertAction& a) { return SameName(a.table, t); });
    if (have < max_per_table) out.push_back(t);
  }
  return out;
}

}  // namespace wbfuzz
