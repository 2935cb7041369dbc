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

#include "wbfuzz/genes.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "wbfuzz/errors.h"
#include "wbfuzz/regex_gene.h"
#include "wbfuzz/uri_gene.h"

namespace wbfuzz {

std::string GeneKindName(GeneKind kind) {
  switch (kind) {
    case GeneKind::kInteger: return "Integer";
    case GeneKind::kLong: return "Long";
    case GeneKind::kFloat: return "Float";
    case GeneKind::kBoolean: return "Boolean";
    case GeneKind::kString: return "String";
    case GeneKind::kEnum: return "Enum";
    case GeneKind::kChoice: return "Choice";
    case GeneKind::kObject: return "Object";
    case GeneKind::kOptional: return "Optional";
    case GeneKind::kArray: return "Array";
    case GeneKind::kUuid: return "Uuid";
    case GeneKind::kUri: return "Uri";
    case GeneKind::kUrl: return "Url";
    case GeneKind::kHostname: return "Hostname";
    case GeneKind::kInet: return "Inet";
    case GeneKind::kUrlPath: return "UrlPath";
    case GeneKind::kUriPart: return "UriPart";
    case GeneKind::kRegex: return "Regex";
  }
  return "Unknown";
}

// ---------------------------------------------------------------------------
// IntegerGene

IntegerGene::IntegerGene(int64_t min, int64_t max, bool is_long)
    : min_(min), max_(max), value_(0), is_long_(is_long) {
  if (min > max) {
    throw ConfigError("integer gene bounds inconsistent: " +
                      std::to_string(min) + " > " + std::to_string(max));
  }
  set_value(0);
}

IntegerGene IntegerGene::Long() {
  return IntegerGene(std::numeric_limits<int64_t>::min(),
                     std::numeric_limits<int64_t>::max(), true);
}

IntegerGene IntegerGene::Int32() {
  return IntegerGene(std::numeric_limits<int32_t>::min(),
                     std::numeric_limits<int32_t>::max());
}

void IntegerGene::set_value(int64_t v) { value_ = std::clamp(v, min_, max_); }

void IntegerGene::Randomize(Rng& rng, const GeneContext&) {
  const int64_t lo = std::max<int64_t>(min_, -100);
  const int64_t hi = std::min<int64_t>(max_, 100);
  if (lo <= hi && rng.Chance(0.5)) {
    value_ = rng.Int(lo, hi);
  } else {
    value_ = rng.Int(min_, max_);
  }
}

void IntegerGene::Mutate(Rng& rng, const GeneContext&) {
  if (IsSingleton()) return;
  const int64_t old = value_;
  for (int attempt = 0; attempt < 8; ++attempt) {
    int64_t candidate;
    if (rng.Chance(0.1)) {
      candidate = rng.Int(min_, max_);
    } else {
      // Geometric step: +/- 2^k with k uniform up to the span's magnitude.
      const __int128 span = static_cast<__int128>(max_) - min_;
      int top = 0;
      while (top < 126 && (static_cast<__int128>(1) << (top + 1)) <= span) ++top;
      const int k = static_cast<int>(rng.Int(0, std::min(top, 62)));
      const __int128 delta = static_cast<__int128>(1) << k;
      __int128 next = rng.Chance(0.5) ? static_cast<__int128>(old) + delta
                                      : static_cast<__int128>(old) - delta;
      next = std::clamp<__int128>(next, min_, max_);
      candidate = static_cast<int64_t>(next);
    }
    if (candidate != old) {
      value_ = candidate;
      return;
    }
  }
  value_ = old < max_ ? old + 1 : old - 1;
}

// ---------------------------------------------------------------------------
// FloatGene

FloatGene::FloatGene(double min, double max) : min_(min), max_(max), value_(0) {
  if (!std::isfinite(min) || !std::isfinite(max) || min > max) {
    throw ConfigError("float gene bounds inconsistent");
  }
  set_value(0.0);
}

void FloatGene::set_value(double v) {
  if (!std::isfinite(v)) v = 0.0;
  value_ = std::clamp(v, min_, max_);
}

bool FloatGene::IsValid() const {
  return std::isfinite(value_) && value_ >= min_ && value_ <= max_;
}

void FloatGene::Randomize(Rng& rng, const GeneContext&) {
  if (min_ == max_) {
    value_ = min_;
  } else if (rng.Chance(0.5)) {
    // Log-uniform magnitude between 1e-2 and 1e6, either sign.
    const double magnitude = std::pow(10.0, rng.Real(-2.0, 6.0));
    set_value(rng.Chance(0.5) ? magnitude : -magnitude);
  } else {
    set_value(rng.Real(min_, max_));
  }
}

void FloatGene::Mutate(Rng& rng, const GeneContext&) {
  if (IsSingleton()) return;
  const double old = value_;
  const int top = static_cast<int>(std::ceil(std::log10(max_ - min_ + 1.0)));
  for (int attempt = 0; attempt < 8; ++attempt) {
    if (rng.Chance(0.1)) {
      set_value(rng.Real(min_, max_));
    } else if (rng.Chance(0.1)) {
      set_value(std::round(old));
    } else {
      const double delta = std::pow(10.0, static_cast<double>(rng.Int(-3, top)));
      set_value(rng.Chance(0.5) ? old + delta : old - delta);
    }
    if (value_ != old) return;
  }
  set_value(old < max_ ? std::nextafter(old, max_) : std::nextafter(old, min_));
}

std::string FloatGene::Render() const {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value_);
  return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// EnumGene

EnumGene::EnumGene(std::vector<std::string> values) : values_(std::move(values)) {
  if (values_.empty()) throw ConfigError("enum gene needs at least one value");
}

void EnumGene::Mutate(Rng& rng, const GeneContext&) {
  if (IsSingleton()) return;
  index_ = (index_ + 1 + rng.Index(values_.size() - 1)) % values_.size();
}

// ---------------------------------------------------------------------------
// StringGene

StringGene::StringGene(size_t min_length, size_t max_length, std::string charset)
    : min_length_(min_length), max_length_(max_length), charset_(std::move(charset)) {
  if (min_length > max_length) {
    throw ConfigError("string gene length bounds inconsistent");
  }
  if (charset_.empty()) throw ConfigError("string gene needs a charset");
  value_.assign(min_length_, charset_[0]);
}

void StringGene::set_free_value(std::string v) {
  value_ = std::move(v);
  active_ = kFree;
}

void StringGene::SampleFree(Rng& rng) {
  const size_t hi = std::max(min_length_, std::min<size_t>(max_length_, 16));
  const size_t len = static_cast<size_t>(rng.Int(static_cast<int64_t>(min_length_),
                                                 static_cast<int64_t>(hi)));
  value_.clear();
  for (size_t i = 0; i < len; ++i) value_ += charset_[rng.Index(charset_.size())];
}

void StringGene::Randomize(Rng& rng, const GeneContext& ctx) {
  if (ctx.minter != nullptr && rng.Chance(ctx.taint_probability)) {
    std::string taint = ctx.minter->Mint().Text();
    if (FitsTaint(taint.size())) {
      set_free_value(std::move(taint));
      return;
    }
  }
  if (!specializations_.empty() && rng.Chance(0.5)) {
    active_ = rng.Index(specializations_.size());
    specializations_[active_].gene->Randomize(rng, ctx);
    return;
  }
  active_ = kFree;
  SampleFree(rng);
}

void StringGene::Mutate(Rng& rng, const GeneContext& ctx) {
  if (ctx.minter != nullptr && rng.Chance(ctx.taint_probability)) {
    std::string taint = ctx.minter->Mint().Text();
    if (FitsTaint(taint.size())) {
      set_free_value(std::move(taint));
      return;
    }
  }
  const size_t options = specializations_.size() + 1;
  const bool stuck = active_ != kFree && specializations_[active_].gene->IsSingleton();
  if (options > 1 && (stuck || rng.Chance(0.2))) {
    // Switch alternative; index options-1 stands for the free form.
    const size_t current = active_ == kFree ? options - 1 : active_;
    const size_t next = (current + 1 + rng.Index(options - 1)) % options;
    active_ = next == options - 1 ? kFree : next;
    return;
  }
  if (active_ != kFree) {
    specializations_[active_].gene->Mutate(rng, ctx);
    return;
  }
  const bool in_charset = std::all_of(value_.begin(), value_.end(), [&](char c) {
    return charset_.find(c) != std::string::npos;
  });
  if (!in_charset || rng.Chance(0.05)) {
    const std::string old = value_;
    for (int i = 0; i < 8 && value_ == old; ++i) SampleFree(rng);
    if (value_ != old) return;
  }
  std::vector<int> ops;
  if (!value_.empty() && charset_.size() > 1) {
    ops.push_back(0);
    ops.push_back(3);
  }
  if (value_.size() < max_length_) ops.push_back(1);
  if (value_.size() > min_length_) ops.push_back(2);
  if (ops.empty()) return;
  switch (ops[rng.Index(ops.size())]) {
    case 0: {
      const size_t pos = rng.Index(value_.size());
      char c = value_[pos];
      while (c == value_[pos]) c = charset_[rng.Index(charset_.size())];
      value_[pos] = c;
      break;
    }
    case 3: {
      // Geometric step through the charset, so that character distances
      // can be climbed.
      const size_t pos = rng.Index(value_.size());
      const auto at = static_cast<int64_t>(charset_.find(value_[pos]));
      const auto last = static_cast<int64_t>(charset_.size()) - 1;
      int top = 0;
      while ((int64_t{1} << (top + 1)) <= last) ++top;
      const int64_t delta = int64_t{1} << rng.Int(0, top);
      int64_t next = rng.Chance(0.5) ? at + delta : at - delta;
      if (next < 0 || next > last) next = at + delta <= last ? at + delta : at - delta;
      value_[pos] = charset_[static_cast<size_t>(std::clamp<int64_t>(next, 0, last))];
      break;
    }
    case 1:
      value_.insert(value_.begin() + static_cast<std::ptrdiff_t>(rng.Index(value_.size() + 1)),
                    charset_[rng.Index(charset_.size())]);
      break;
    default:
      value_.erase(value_.begin() + static_cast<std::ptrdiff_t>(rng.Index(value_.size())));
      break;
  }
}

std::string StringGene::Render() const {
  if (active_ == kFree) return value_;
  return specializations_[active_].gene->Render();
}

bool StringGene::IsValid() const {
  if (active_ != kFree) {
    return active_ < specializations_.size() &&
           specializations_[active_].gene->IsValid();
  }
  if (value_.size() < min_length_ || value_.size() > max_length_) return false;
  if (IsTainted(value_)) return true;
  return std::all_of(value_.begin(), value_.end(), [&](char c) {
    return charset_.find(c) != std::string::npos;
  });
}

std::optional<uint64_t> StringGene::TaintId() const {
  if (active_ != kFree) return std::nullopt;
  return RecognizeTaint(value_);
}

bool StringGene::HasSpecialization(const Specialization& spec) const {
  return std::any_of(specializations_.begin(), specializations_.end(),
                     [&](const Alternative& a) { return a.spec.SameAs(spec); });
}

std::vector<Specialization> StringGene::specializations() const {
  std::vector<Specialization> out;
  for (const auto& a : specializations_) out.push_back(a.spec);
  return out;
}

bool StringGene::AddSpecialization(const Specialization& spec, Rng& rng) {
  if (HasSpecialization(spec)) return false;
  GeneBox gene;
  switch (spec.kind) {
    case SpecializationKind::kConstantEquals:
    case SpecializationKind::kConstantPrefix:
      gene = EnumGene({spec.text});
      break;
    case SpecializationKind::kEnumMember:
      if (spec.values.empty()) return false;
      gene = EnumGene(spec.values);
      break;
    case SpecializationKind::kRegexMatch:
      try {
        gene = RegexGene(spec.text);
      } catch (const ParseError&) {
        return false;
      }
      break;
    case SpecializationKind::kIntegerFormat:
      gene = IntegerGene::Int32();
      break;
    case SpecializationKind::kFloatFormat:
      gene = FloatGene();
      break;
    case SpecializationKind::kUuidFormat:
      gene = UuidGene();
      break;
    case SpecializationKind::kUriFormat:
      gene = UriGene(false);
      break;
    case SpecializationKind::kUrlFormat:
      gene = UriGene(true);
      break;
  }
  gene->Randomize(rng, GeneContext{});
  specializations_.push_back(Alternative{spec, std::move(gene)});
  active_ = specializations_.size() - 1;
  return true;
}

// ---------------------------------------------------------------------------
// ChoiceGene

ChoiceGene::ChoiceGene(std::vector<std::pair<std::string, GeneBox>> children,
                       size_t active)
    : children_(std::move(children)), active_(active) {
  if (children_.empty()) throw ConfigError("choice gene needs children");
  active_ %= children_.size();
}

void ChoiceGene::Randomize(Rng& rng, const GeneContext& ctx) {
  for (auto& [name, child] : children_) child->Randomize(rng, ctx);
  active_ = rng.Index(children_.size());
}

void ChoiceGene::Mutate(Rng& rng, const GeneContext& ctx) {
  const size_t n = children_.size();
  if (n > 1 && (rng.Chance(0.5) || active_gene().IsSingleton())) {
    active_ = (active_ + 1 + rng.Index(n - 1)) % n;
    return;
  }
  active_gene().Mutate(rng, ctx);
}

bool ChoiceGene::IsValid() const {
  if (active_ >= children_.size()) return false;
  return std::all_of(children_.begin(), children_.end(),
                     [](const auto& c) { return c.second->IsValid(); });
}

bool ChoiceGene::IsSingleton() const {
  return children_.size() == 1 && children_[0].second->IsSingleton();
}

// ---------------------------------------------------------------------------
// OptionalGene

void OptionalGene::Randomize(Rng& rng, const GeneContext& ctx) {
  child_->Randomize(rng, ctx);
  present_ = rng.Chance(ctx.optional_presence);
}

void OptionalGene::Mutate(Rng& rng, const GeneContext& ctx) {
  if (!present_) {
    // A hidden child never changes, so reveal a fresh one rather than retry
    // the same value.
    present_ = true;
    child_->Randomize(rng, ctx);
    return;
  }
  if (child_->IsSingleton() || rng.Chance(0.2)) {
    present_ = false;
    return;
  }
  child_->Mutate(rng, ctx);
}

// ---------------------------------------------------------------------------
// CompositeGene / ObjectGene

void CompositeGene::Randomize(Rng& rng, const GeneContext& ctx) {
  for (auto& [name, child] : fields_) child->Randomize(rng, ctx);
}

void CompositeGene::Mutate(Rng& rng, const GeneContext& ctx) {
  std::vector<Gene*> candidates;
  for (auto& [name, child] : fields_) {
    if (!child->IsSingleton()) candidates.push_back(child.get());
  }
  if (candidates.empty()) return;
  candidates[rng.Index(candidates.size())]->Mutate(rng, ctx);
}

bool CompositeGene::IsValid() const {
  return std::all_of(fields_.begin(), fields_.end(),
                     [](const auto& f) { return f.second->IsValid(); });
}

bool CompositeGene::IsSingleton() const {
  return std::all_of(fields_.begin(), fields_.end(),
                     [](const auto& f) { return f.second->IsSingleton(); });
}

Gene* CompositeGene::Find(std::string_view name) {
  for (auto& [n, child] : fields_) {
    if (n == name) return child.get();
  }
  return nullptr;
}

const Gene* CompositeGene::Find(std::string_view name) const {
  return const_cast<CompositeGene*>(this)->Find(name);
}

void CompositeGene::Add(std::string name, GeneBox gene) {
  fields_.emplace_back(std::move(name), std::move(gene));
}

Json ObjectGene::ToJson() const {
  Json out = Json::object();
  for (const auto& [name, child] : fields_) {
    if (child->kind() == GeneKind::kOptional &&
        !static_cast<const OptionalGene&>(*child).present()) {
      continue;
    }
    out[name] = child->ToJson();
  }
  return out;
}

// ---------------------------------------------------------------------------
// ArrayGene

ArrayGene::ArrayGene(GeneBox element_template, size_t min_size, size_t max_size)
    : template_(std::move(element_template)), min_size_(min_size), max_size_(max_size) {
  if (min_size > max_size) throw ConfigError("array gene size bounds inconsistent");
  for (size_t i = 0; i < min_size_; ++i) elements_.push_back(template_);
}

void ArrayGene::Randomize(Rng& rng, const GeneContext& ctx) {
  const auto n = static_cast<size_t>(
      rng.Int(static_cast<int64_t>(min_size_), static_cast<int64_t>(max_size_)));
  elements_.clear();
  for (size_t i = 0; i < n; ++i) {
    GeneBox e = template_;
    e->Randomize(rng, ctx);
    elements_.push_back(std::move(e));
  }
}

void ArrayGene::Mutate(Rng& rng, const GeneContext& ctx) {
  std::vector<int> ops;
  if (elements_.size() < max_size_) ops.push_back(0);
  if (elements_.size() > min_size_) ops.push_back(1);
  if (!elements_.empty() && !template_->IsSingleton()) ops.push_back(2);
  if (ops.empty()) return;
  switch (ops[rng.Index(ops.size())]) {
    case 0: {
      GeneBox e = template_;
      e->Randomize(rng, ctx);
      elements_.insert(elements_.begin() +
                           static_cast<std::ptrdiff_t>(rng.Index(elements_.size() + 1)),
                       std::move(e));
      break;
    }
    case 1:
      elements_.erase(elements_.begin() +
                      static_cast<std::ptrdiff_t>(rng.Index(elements_.size())));
      break;
    default:
      elements_[rng.Index(elements_.size())]->Mutate(rng, ctx);
      break;
  }
}

Json ArrayGene::ToJson() const {
  Json out = Json::array();
  for (const auto& e : elements_) out.push_back(e->ToJson());
  return out;
}

bool ArrayGene::IsValid() const {
  if (elements_.size() < min_size_ || elements_.size() > max_size_) return false;
  return std::all_of(elements_.begin(), elements_.end(),
                     [](const GeneBox& e) { return e->IsValid(); });
}

// ---------------------------------------------------------------------------
// Paths

std::string JoinPath(std::string_view prefix, std::string_view name) {
  if (prefix.empty()) return std::string(name);
  std::string out(prefix);
  out += '/';
  out += name;
  return out;
}

void VisitGenes(Gene& root, const std::function<void(const std::string&, Gene&)>& fn,
                const std::string& prefix) {
  fn(prefix, root);
  for (size_t i = 0; i < root.ChildCount(); ++i) {
    VisitGenes(*root.Child(i), fn, JoinPath(prefix, root.ChildName(i)));
  }
}

void VisitGenes(const Gene& root,
                const std::function<void(const std::string&, const Gene&)>& fn,
                const std::string& prefix) {
  fn(prefix, root);
  for (size_t i = 0; i < root.ChildCount(); ++i) {
    VisitGenes(*root.Child(i), fn, JoinPath(prefix, root.ChildName(i)));
  }
}

Gene* FindGene(Gene& root, std::string_view path) {
  Gene* node = &root;
  while (!path.empty()) {
    const size_t slash = path.find('/');
    const std::string_view head = path.substr(0, slash);
    Gene* next = nullptr;
    for (size_t i = 0; i < node->ChildCount(); ++i) {
      if (node->ChildName(i) == head) {
        next = node->Child(i);
        break;
      }
    }
    if (next == nullptr) return nullptr;
    node = next;
    path = slash == std::string_view::npos ? std::string_view() : path.substr(slash + 1);
  }
  return node;
}

}  // namespace wbfuzz
