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

#ifndef WBFUZZ_REGEX_GENE_H_
#define WBFUZZ_REGEX_GENE_H_

// Strings generated from a regular expression. The genotype is the list of
// decisions taken while walking the pattern (which alternative, how many
// repetitions, which character); any decision list renders to a matching
// string, so mutation can rewrite decisions freely.
//
// Supported subset: literals, escapes (\d \w \s and escaped punctuation),
// '.', character classes with ranges and negation, groups, alternation,
// and the quantifiers * + ? {n} {n,} {n,m}. Unbounded repetition is capped
// at the lower bound plus kRepeatSlack. Anchors are accepted and ignored.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "wbfuzz/genes.h"

namespace wbfuzz {

inline constexpr int kRepeatSlack = 4;

struct RegexNode;

class RegexGene : public CloneableGene<RegexGene> {
 public:
  // Throws ParseError for constructs outside the subset.
  explicit RegexGene(std::string pattern);

  GeneKind kind() const override { return GeneKind::kRegex; }
  void Randomize(Rng& rng, const GeneContext& ctx) override;
  void Mutate(Rng& rng, const GeneContext& ctx) override;
  std::string Render() const override;
  bool IsValid() const override;
  bool IsSingleton() const override;

  const std::string& pattern() const { return pattern_; }

 private:
  std::string pattern_;
  std::shared_ptr<const RegexNode> root_;
  std::vector<uint32_t> decisions_;
};

}  // namespace wbfuzz

#endif  // WBFUZZ_REGEX_GENE_H_
