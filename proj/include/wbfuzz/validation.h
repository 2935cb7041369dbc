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

#ifndef WBFUZZ_VALIDATION_H_
#define WBFUZZ_VALIDATION_H_

// Bean-validation style field constraints and their two-sided distances:
// how far a value is from satisfying a constraint, and how far it is from
// violating it.

#include <stdexcept>
#include <string>
#include <vector>

#include "wbfuzz/distance.h"
#include "wbfuzz/json.h"

namespace wbfuzz {

enum class ConstraintKind {
  kMin,
  kMax,
  kPositive,
  kPositiveOrZero,
  kNegative,
  kNegativeOrZero,
  kSize,
  kNotEmpty,
  kNotBlank,
  kNull,
  kNotNull,
  kAssertTrue,
  kAssertFalse,
  kPattern,
  kEnumMembership,
  kImpliedNotNull,
  // Recognized but without distances.
  kFuture,
  kFutureOrPresent,
  kPast,
  kPastOrPresent,
  kCustom,
};

struct ValidationConstraint {
  ConstraintKind kind = ConstraintKind::kNotNull;
  double bound = 0.0;  // Min/Max bound, Size lower bound
  double upper = 0.0;  // Size upper bound
  std::string pattern;
  std::vector<std::string> values;  // EnumMembership
  std::string name;                 // Custom constraint name

  static ValidationConstraint Min(double k);
  static ValidationConstraint Max(double k);
  static ValidationConstraint Size(double lo, double hi);
  static ValidationConstraint Pattern(std::string regex);
  static ValidationConstraint OneOf(std::vector<std::string> values);
  static ValidationConstraint Of(ConstraintKind kind);

  bool operator==(const ValidationConstraint&) const = default;
};

class UnsupportedConstraint : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ClauseDistance {
  Distance valid;
  Distance invalid;
};

bool HasDistance(ConstraintKind kind);
std::string ConstraintName(ConstraintKind kind);
// Parses names such as "Min", "NotBlank", "Size". Throws ConfigError.
ConstraintKind ConstraintKindFromName(const std::string& name);
std::string Describe(const ValidationConstraint& c);

// Null values satisfy every constraint except NotNull, ImpliedNotNull,
// NotEmpty and NotBlank. Throws UnsupportedConstraint for time-related and
// custom constraints.
ClauseDistance ConstraintDistance(const ValidationConstraint& c,
                                  const Json& value);

// Boolean check for every kind. Time-related constraints compare an ISO
// date (YYYY-MM-DD prefix) against `today`; custom constraints are treated
// as satisfied since their code is unknown here.
bool Satisfies(const ValidationConstraint& c, const Json& value,
               const std::string& today = "2024-01-01");

// Full-string regex match with a per-thread cache of compiled patterns.
bool RegexFullMatch(const std::string& pattern, const std::string& text);

}  // namespace wbfuzz

#endif  // WBFUZZ_VALIDATION_H_
