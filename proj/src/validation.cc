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

#include "wbfuzz/validation.h"

#include <algorithm>
#include <cctype>
#include <limits>
#include <map>
#include <regex>
#include <utility>

#include "wbfuzz/errors.h"

namespace wbfuzz {

namespace {

constexpr std::pair<ConstraintKind, const char*> kNames[] = {
    {ConstraintKind::kMin, "Min"},
    {ConstraintKind::kMax, "Max"},
    {ConstraintKind::kPositive, "Positive"},
    {ConstraintKind::kPositiveOrZero, "PositiveOrZero"},
    {ConstraintKind::kNegative, "Negative"},
    {ConstraintKind::kNegativeOrZero, "NegativeOrZero"},
    {ConstraintKind::kSize, "Size"},
    {ConstraintKind::kNotEmpty, "NotEmpty"},
    {ConstraintKind::kNotBlank, "NotBlank"},
    {ConstraintKind::kNull, "Null"},
    {ConstraintKind::kNotNull, "NotNull"},
    {ConstraintKind::kAssertTrue, "AssertTrue"},
    {ConstraintKind::kAssertFalse, "AssertFalse"},
    {ConstraintKind::kPattern, "Pattern"},
    {ConstraintKind::kEnumMembership, "Enum"},
    {ConstraintKind::kImpliedNotNull, "ImpliedNotNull"},
    {ConstraintKind::kFuture, "Future"},
    {ConstraintKind::kFutureOrPresent, "FutureOrPresent"},
    {ConstraintKind::kPast, "Past"},
    {ConstraintKind::kPastOrPresent, "PastOrPresent"},
    {ConstraintKind::kCustom, "Custom"},
};

ClauseDistance Valid(double invalid_distance) {
  return {Distance::Zero(), Distance::Of(invalid_distance)};
}
ClauseDistance Invalid(double valid_distance) {
  return {Distance::Of(valid_distance), Distance::Zero()};
}

std::optional<double> Length(const Json& v) {
  if (v.is_string()) return static_cast<double>(v.get_ref<const std::string&>().size());
  if (v.is_array() || v.is_object()) return static_cast<double>(v.size());
  return std::nullopt;
}

ClauseDistance NumericClause(const ValidationConstraint& c, double v) {
  switch (c.kind) {
    case ConstraintKind::kMin:
      return v >= c.bound ? Valid(v - c.bound + 1.0) : Invalid(c.bound - v);
    case ConstraintKind::kMax:
      return v <= c.bound ? Valid(c.bound - v + 1.0) : Invalid(v - c.bound);
    case ConstraintKind::kPositive:
      return v > 0 ? Valid(v) : Invalid(1.0 - v);
    case ConstraintKind::kPositiveOrZero:
      return v >= 0 ? Valid(v + 1.0) : Invalid(-v);
    case ConstraintKind::kNegative:
      return v < 0 ? Valid(-v) : Invalid(v + 1.0);
    case ConstraintKind::kNegativeOrZero:
      return v <= 0 ? Valid(1.0 - v) : Invalid(v);
    default:
      break;
  }
  return Invalid(1.0);
}

bool NullPasses(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::kNotNull:
    case ConstraintKind::kImpliedNotNull:
    case ConstraintKind::kNotEmpty:
    case ConstraintKind::kNotBlank:
      return false;
    default:
      return true;
  }
}

}  // namespace

ValidationConstraint ValidationConstraint::Min(double k) {
  ValidationConstraint c;
  c.kind = ConstraintKind::kMin;
  c.bound = k;
  return c;
}

ValidationConstraint ValidationConstraint::Max(double k) {
  ValidationConstraint c;
  c.kind = ConstraintKind::kMax;
  c.bound = k;
  return c;
}

ValidationConstraint ValidationConstraint::Size(double lo, double hi) {
  ValidationConstraint c;
  c.kind = ConstraintKind::kSize;
  c.bound = lo;
  c.upper = hi;
  return c;
}

ValidationConstraint ValidationConstraint::Pattern(std::string regex) {
  ValidationConstraint c;
  c.kind = ConstraintKind::kPattern;
  c.pattern = std::move(regex);
  return c;
}

ValidationConstraint ValidationConstraint::OneOf(std::vector<std::string> values) {
  ValidationConstraint c;
  c.kind = ConstraintKind::kEnumMembership;
  c.values = std::move(values);
  return c;
}

ValidationConstraint ValidationConstraint::Of(ConstraintKind kind) {
  ValidationConstraint c;
  c.kind = kind;
  return c;
}

bool HasDistance(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::kFuture:
    case ConstraintKind::kFutureOrPresent:
    case ConstraintKind::kPast:
    case ConstraintKind::kPastOrPresent:
    case ConstraintKind::kCustom:
      return false;
    default:
      return true;
  }
}

std::string ConstraintName(ConstraintKind kind) {
  for (const auto& [k, name] : kNames) {
    if (k == kind) return name;
  }
  return "Unknown";
}

ConstraintKind ConstraintKindFromName(const std::string& name) {
  for (const auto& [k, n] : kNames) {
    if (name == n) return k;
  }
  throw ConfigError("unknown validation constraint '" + name + "'");
}

std::string Describe(const ValidationConstraint& c) {
  std::string out = ConstraintName(c.kind);
  switch (c.kind) {
    case ConstraintKind::kMin:
    case ConstraintKind::kMax:
      out += "(" + Json(c.bound).dump() + ")";
      break;
    case ConstraintKind::kSize:
      out += "(" + Json(c.bound).dump() + "," + Json(c.upper).dump() + ")";
      break;
    case ConstraintKind::kPattern:
      out += "(" + c.pattern + ")";
      break;
    case ConstraintKind::kEnumMembership: {
      out += "(";
      for (size_t i = 0; i < c.values.size(); ++i) {
        if (i) out += ",";
        out += c.values[i];
      }
      out += ")";
      break;
    }
    case ConstraintKind::kCustom:
      out += "(" + c.name + ")";
      break;
    default:
      break;
  }
  return out;
}

bool RegexFullMatch(const std::string& pattern, const std::string& text) {
  thread_local std::map<std::string, std::regex> cache;
  auto it = cache.find(pattern);
  if (it == cache.end()) {
    it = cache.emplace(pattern, std::regex(pattern, std::regex::ECMAScript))
             .first;
  }
  return std::regex_match(text, it->second);
}

ClauseDistance ConstraintDistance(const ValidationConstraint& c,
                                  const Json& value) {
  if (!HasDistance(c.kind)) {
    throw UnsupportedConstraint("no distance for constraint " +
                                ConstraintName(c.kind));
  }
  if (value.is_null()) {
    return NullPasses(c.kind) ? Valid(1.0) : Invalid(1.0);
  }
  switch (c.kind) {
    case ConstraintKind::kMin:
    case ConstraintKind::kMax:
    case ConstraintKind::kPositive:
    case ConstraintKind::kPositiveOrZero:
    case ConstraintKind::kNegative:
    case ConstraintKind::kNegativeOrZero:
      if (!value.is_number()) return Invalid(1.0);
      return NumericClause(c, value.get<double>());
    case ConstraintKind::kSize: {
      auto n = Length(value);
      if (!n) return Invalid(1.0);
      const double lo = c.bound;
      const double hi = c.upper;
      if (*n < lo) return Invalid(lo - *n);
      if (*n > hi) return Invalid(*n - hi);
      double flip = kMaxDistance;
      if (lo > 0) flip = std::min(flip, *n - lo + 1.0);
      if (hi < kMaxDistance) flip = std::min(flip, hi - *n + 1.0);
      return Valid(flip);
    }
    case ConstraintKind::kNotEmpty: {
      auto n = Length(value);
      if (!n) return Valid(1.0);
      return *n > 0 ? Valid(*n) : Invalid(1.0);
    }
    case ConstraintKind::kNotBlank: {
      if (!value.is_string()) return Invalid(1.0);
      const auto& s = value.get_ref<const std::string&>();
      const auto solid = std::count_if(s.begin(), s.end(), [](unsigned char ch) {
        return !std::isspace(ch);
      });
      return solid > 0 ? Valid(static_cast<double>(solid)) : Invalid(1.0);
    }
    case ConstraintKind::kNull:
      return Invalid(1.0);
    case ConstraintKind::kNotNull:
    case ConstraintKind::kImpliedNotNull:
      return Valid(1.0);
    case ConstraintKind::kAssertTrue:
      return value.is_boolean() && value.get<bool>() ? Valid(1.0) : Invalid(1.0);
    case ConstraintKind::kAssertFalse:
      return value.is_boolean() && !value.get<bool>() ? Valid(1.0)
                                                     : Invalid(1.0);
    case ConstraintKind::kPattern: {
      const std::string text =
          value.is_string() ? value.get<std::string>() : value.dump();
      return RegexFullMatch(c.pattern, text) ? Valid(1.0) : Invalid(1.0);
    }
    case ConstraintKind::kEnumMembership: {
      if (!value.is_string()) return Invalid(1.0);
      const auto& s = value.get_ref<const std::string&>();
      Distance best = Distance::Max();
      for (const auto& v : c.values) best = std::min(best, StringEqDistance(s, v));
      return best.IsZero() ? Valid(1.0) : ClauseDistance{best, Distance::Zero()};
    }
    default:
      break;
  }
  throw UnsupportedConstraint("no distance for constraint " +
                              ConstraintName(c.kind));
}

bool Satisfies(const ValidationConstraint& c, const Json& value,
               const std::string& today) {
  if (HasDistance(c.kind)) return ConstraintDistance(c, value).valid.IsZero();
  if (c.kind == ConstraintKind::kCustom || value.is_null()) return true;
  if (!value.is_string()) return false;
  const std::string date = value.get<std::string>().substr(0, 10);
  static const std::regex kIsoDate(R"(\d{4}-\d{2}-\d{2})");
  if (!std::regex_match(date, kIsoDate)) return false;
  switch (c.kind) {
    case ConstraintKind::kFuture:
      return date > today;
    case ConstraintKind::kFutureOrPresent:
      return date >= today;
    case ConstraintKind::kPast:
      return date < today;
    case ConstraintKind::kPastOrPresent:
      return date <= today;
    default:
      return true;
  }
}

}  // namespace wbfuzz
