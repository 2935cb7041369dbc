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

#ifndef WBFUZZ_TAINT_H_
#define WBFUZZ_TAINT_H_

// Tainted marker strings and the specializations learned when a marker
// shows up inside a tracked operation.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wbfuzz {

struct TaintedValue {
  uint64_t id = 0;
  // "_EM_{id}_XYZ_"
  std::string Text() const;
};

// Some(id) iff `s` is exactly "_EM_<digits>_XYZ_".
std::optional<uint64_t> RecognizeTaint(std::string_view s);
inline bool IsTainted(std::string_view s) { return RecognizeTaint(s).has_value(); }

// Hands out fresh ids. Owned by a single run, so ids are unique per
// evaluation and reproducible from the seed.
class TaintMinter {
 public:
  TaintedValue Mint() { return TaintedValue{next_++}; }
  uint64_t minted() const { return next_; }

 private:
  uint64_t next_ = 0;
};

enum class SpecializationKind {
  kConstantEquals,
  kConstantPrefix,
  kRegexMatch,
  kEnumMember,
  kIntegerFormat,
  kFloatFormat,
  kUuidFormat,
  kUriFormat,
  kUrlFormat,
};

std::string SpecializationKindName(SpecializationKind kind);

struct Specialization {
  SpecializationKind kind = SpecializationKind::kConstantEquals;
  std::string text;                 // constant, prefix or regex
  std::vector<std::string> values;  // enum members
  std::string source_target;

  // Identity ignores the source target.
  bool SameAs(const Specialization& o) const {
    return kind == o.kind && text == o.text && values == o.values;
  }
};

struct TaintSighting {
  uint64_t taint_id = 0;
  Specialization specialization;
};

}  // namespace wbfuzz

#endif  // WBFUZZ_TAINT_H_
