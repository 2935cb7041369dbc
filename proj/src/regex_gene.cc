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

#include "wbfuzz/regex_gene.h"

#include <algorithm>
#include <cctype>

#include "wbfuzz/errors.h"
#include "wbfuzz/genes.h"
#include "wbfuzz/validation.h"

namespace wbfuzz {

struct RegexNode {
  enum class Type { kConcat, kAlternation, kRepeat, kChars };
  Type type = Type::kConcat;
  std::vector<std::shared_ptr<const RegexNode>> children;
  std::string chars;
  int min = 0;
  int max = 0;
};

namespace {

using NodePtr = std::shared_ptr<const RegexNode>;

constexpr std::string_view kDigits = "0123456789";
constexpr std::string_view kWord =
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_";

std::string Printable() { return std::string(kPrintableAscii); }

std::string Complement(const std::string& set) {
  std::string out;
  for (char c : kPrintableAscii) {
    if (set.find(c) == std::string::npos) out += c;
  }
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view pattern) : p_(pattern) {}

  NodePtr Parse() {
    NodePtr root = ParseAlternation();
    if (pos_ != p_.size()) Fail("unexpected ')'");
    return root;
  }

 private:
  [[noreturn]] void Fail(const std::string& what) const {
    throw ParseError("regex '" + std::string(p_) + "' at " + std::to_string(pos_) +
                     ": " + what);
  }
  bool AtEnd() const { return pos_ >= p_.size(); }
  char Peek() const { return p_[pos_]; }

  NodePtr ParseAlternation() {
    std::vector<NodePtr> branches{ParseConcat()};
    while (!AtEnd() && Peek() == '|') {
      ++pos_;
      branches.push_back(ParseConcat());
    }
    if (branches.size() == 1) return branches[0];
    auto node = std::make_shared<RegexNode>();
    node->type = RegexNode::Type::kAlternation;
    node->children = std::move(branches);
    return node;
  }

  NodePtr ParseConcat() {
    auto node = std::make_shared<RegexNode>();
    node->type = RegexNode::Type::kConcat;
    while (!AtEnd() && Peek() != '|' && Peek() != ')') {
      NodePtr atom = ParseAtom();
      if (atom) node->children.push_back(ParseQuantifier(atom));
    }
    return node;
  }

  NodePtr Chars(std::string set) {
    if (set.empty()) Fail("empty character set");
    auto node = std::make_shared<RegexNode>();
    node->type = RegexNode::Type::kChars;
    node->chars = std::move(set);
    return node;
  }

  std::string Escape() {
    if (AtEnd()) Fail("dangling escape");
    const char c = p_[pos_++];
    switch (c) {
      case 'd': return std::string(kDigits);
      case 'w': return std::string(kWord);
      case 's': return " ";
      case 'D': return Complement(std::string(kDigits));
      case 'W': return Complement(std::string(kWord));
      case 'S': return Complement(" \t");
      case 't': return "\t";
      case 'n': return "\n";
      default:
        if (c >= '1' && c <= '9') Fail("back-references are not supported");
        if (std::isalnum(static_cast<unsigned char>(c))) {
          Fail(std::string("unsupported escape \\") + c);
        }
        return std::string(1, c);
    }
  }

  NodePtr ParseAtom() {
    const char c = p_[pos_++];
    switch (c) {
      case '^':
      case '$':
        return nullptr;
      case '.':
        return Chars(Printable());
      case '\\':
        return Chars(Escape());
      case '[':
        return Chars(ParseClass());
      case '(': {
        if (!AtEnd() && Peek() == '?') {
          if (pos_ + 1 < p_.size() && p_[pos_ + 1] == ':') {
            pos_ += 2;
          } else {
            Fail("lookaround and named groups are not supported");
          }
        }
        NodePtr inner = ParseAlternation();
        if (AtEnd() || Peek() != ')') Fail("missing ')'");
        ++pos_;
        return inner;
      }
      case '*':
      case '+':
      case '?':
      case '{':
        Fail("quantifier without operand");
      default:
        return Chars(std::string(1, c));
    }
  }

  std::string ParseClass() {
    bool negated = false;
    if (!AtEnd() && Peek() == '^') {
      negated = true;
      ++pos_;
    }
    std::string set;
    bool first = true;
    while (true) {
      if (AtEnd()) Fail("unterminated character class");
      char c = p_[pos_++];
      if (c == ']' && !first) break;
      first = false;
      std::string item;
      if (c == '\\') {
        item = Escape();
      } else {
        item = std::string(1, c);
      }
      if (item.size() == 1 && pos_ + 1 < p_.size() && Peek() == '-' &&
          p_[pos_ + 1] != ']') {
        ++pos_;
        char hi = p_[pos_++];
        if (hi == '\\') {
          std::string esc = Escape();
          if (esc.size() != 1) Fail("bad range end");
          hi = esc[0];
        }
        if (hi < item[0]) Fail("reversed range");
        for (int ch = item[0]; ch <= hi; ++ch) set += static_cast<char>(ch);
      } else {
        set += item;
      }
    }
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    return negated ? Complement(set) : set;
  }

  int Number() {
    if (AtEnd() || !std::isdigit(static_cast<unsigned char>(Peek()))) Fail("expected number");
    int n = 0;
    while (!AtEnd() && std::isdigit(static_cast<unsigned char>(Peek()))) {
      n = n * 10 + (p_[pos_++] - '0');
      if (n > 1000) Fail("repetition bound too large");
    }
    return n;
  }

  NodePtr ParseQuantifier(NodePtr atom) {
    if (AtEnd()) return atom;
    int min = 0;
    int max = 0;
    switch (Peek()) {
      case '*':
        ++pos_;
        min = 0;
        max = kRepeatSlack;
        break;
      case '+':
        ++pos_;
        min = 1;
        max = 1 + kRepeatSlack;
        break;
      case '?':
        ++pos_;
        min = 0;
        max = 1;
        break;
      case '{': {
        ++pos_;
        min = Number();
        max = min;
        if (!AtEnd() && Peek() == ',') {
          ++pos_;
          max = (!AtEnd() && Peek() == '}') ? min + kRepeatSlack : Number();
        }
        if (AtEnd() || Peek() != '}') Fail("missing '}'");
        ++pos_;
        if (max < min) Fail("reversed repetition bounds");
        break;
      }
      default:
        return atom;
    }
    if (!AtEnd() && (Peek() == '?' || Peek() == '+')) ++pos_;  // lazy/possessive
    auto node = std::make_shared<RegexNode>();
    node->type = RegexNode::Type::kRepeat;
    node->children.push_back(std::move(atom));
    node->min = min;
    node->max = max;
    return ParseQuantifier(node);
  }

  std::string_view p_;
  size_t pos_ = 0;
};

// Walks the tree consuming decisions. When `rng` is given, missing
// decisions are drawn and appended; otherwise they read as 0.
class Walker {
 public:
  Walker(std::vector<uint32_t>& decisions, Rng* rng) : d_(decisions), rng_(rng) {}

  void Walk(const RegexNode& node, std::string& out) {
    switch (node.type) {
      case RegexNode::Type::kConcat:
        for (const auto& c : node.children) Walk(*c, out);
        break;
      case RegexNode::Type::kAlternation:
        Walk(*node.children[Next() % node.children.size()], out);
        break;
      case RegexNode::Type::kRepeat: {
        const auto span = static_cast<uint32_t>(node.max - node.min + 1);
        const int count = node.min + static_cast<int>(Next() % span);
        for (int i = 0; i < count; ++i) Walk(*node.children[0], out);
        break;
      }
      case RegexNode::Type::kChars:
        out += node.chars[Next() % node.chars.size()];
        break;
    }
  }

  size_t consumed() const { return i_; }

 private:
  uint32_t Next() {
    if (i_ >= d_.size()) {
      d_.push_back(rng_ ? static_cast<uint32_t>(rng_->Bits()) : 0u);
    }
    return d_[i_++];
  }

  std::vector<uint32_t>& d_;
  Rng* rng_;
  size_t i_ = 0;
};

bool IsSingletonNode(const RegexNode& node) {
  switch (node.type) {
    case RegexNode::Type::kConcat:
      return std::all_of(node.children.begin(), node.children.end(),
                         [](const NodePtr& c) { return IsSingletonNode(*c); });
    case RegexNode::Type::kAlternation:
      return node.children.size() == 1 && IsSingletonNode(*node.children[0]);
    case RegexNode::Type::kRepeat:
      return node.min == node.max && IsSingletonNode(*node.children[0]);
    case RegexNode::Type::kChars:
      return node.chars.size() == 1;
  }
  return true;
}

}  // namespace

RegexGene::RegexGene(std::string pattern)
    : pattern_(std::move(pattern)), root_(Parser(pattern_).Parse()) {
  std::string ignored;
  Walker(decisions_, nullptr).Walk(*root_, ignored);
}

void RegexGene::Randomize(Rng& rng, const GeneContext&) {
  decisions_.clear();
  std::string ignored;
  Walker(decisions_, &rng).Walk(*root_, ignored);
}

void RegexGene::Mutate(Rng& rng, const GeneContext&) {
  if (IsSingletonNode(*root_)) return;
  const std::string before = Render();
  for (int attempt = 0; attempt < 16; ++attempt) {
    if (!decisions_.empty()) {
      decisions_[rng.Index(decisions_.size())] = static_cast<uint32_t>(rng.Bits());
    }
    std::string out;
    Walker walker(decisions_, &rng);
    walker.Walk(*root_, out);
    decisions_.resize(walker.consumed());
    if (out != before) return;
  }
}

std::string RegexGene::Render() const {
  std::vector<uint32_t> copy = decisions_;
  std::string out;
  Walker(copy, nullptr).Walk(*root_, out);
  return out;
}

bool RegexGene::IsSingleton() const { return IsSingletonNode(*root_); }

bool RegexGene::IsValid() const { return RegexFullMatch(pattern_, Render()); }

}  // namespace wbfuzz
