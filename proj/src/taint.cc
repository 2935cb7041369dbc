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

#include "wbfuzz/taint.h"

#include <cctype>

namespace wbfuzz {

namespace {
constexpr std::string_view kPrefix = "_EM_";
constexpr std::string_view kSuffix = "_XYZ_";
}  // namespace

std::string TaintedValue::Text() const {
  return std::string(kPrefix) + std::to_string(id) + std::string(kSuffix);
}

std::optional<uint64_t> RecognizeTaint(std::string_view s) {
  if (s.size() <= kPrefix.size() + kSuffix.size()) return std::nullopt;
  if (!s.starts_with(kPrefix) || !s.ends_with(kSuffix)) return std::nullopt;
  std::string_view digits =
      s.substr(kPrefix.size(), s.size() - kPrefix.size() - kSuffix.size());
  if (digits.size() > 19) return std::nullopt;
  uint64_t id = 0;
  for (char c : digits) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    id = id * 10 + static_cast<uint64_t>(c - '0');
  }
  return id;
}

std::string SpecializationKindName(SpecializationKind kind) {
  switch (kind) {
    case SpecializationKind::kConstantEquals: return "ConstantEquals";
    case SpecializationKind::kConstantPrefix: return "ConstantPrefix";
    case SpecializationKind::kRegexMatch: return "RegexMatch";
    case SpecializationKind::kEnumMember: return "EnumMember";
    case SpecializationKind::kIntegerFormat: return "IntegerFormat";
    case SpecializationKind::kFloatFormat: return "FloatFormat";
    case SpecializationKind::kUuidFormat: return "UuidFormat";
    case SpecializationKind::kUriFormat: return "UriFormat";
    case SpecializationKind::kUrlFormat: return "UrlFormat";
  }
  return "Unknown";
}

}  // namespace wbfuzz
