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

#ifndef WBFUZZ_GENES_H_
#define WBFUZZ_GENES_H_

// Tree-structured genotypes. Every gene knows how to sample itself, mutate
// itself while keeping its constraints, and render its phenotype. Children
// are addressed by name, so a slash-joined path identifies any node of an
// individual across copies.

#include <concepts>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wbfuzz/json.h"
#include "wbfuzz/rng.h"
#include "wbfuzz/taint.h"

namespace wbfuzz {

enum class GeneKind {
  kInteger,
  kLong,
  kFloat,
  kBoolean,
  kString,
  kEnum,
  kChoice,
  kObject,
  kOptional,
  kArray,
  kUuid,
  kUri,
  kUrl,
  kHostname,
  kInet,
  kUrlPath,
  kUriPart,
  kRegex,
};

std::string GeneKindName(GeneKind kind);

// String genes pick up tainted values with `taint_probability` whenever
// they are sampled or mutated, provided a minter is present.
struct GeneContext {
  TaintMinter* minter = nullptr;
  double taint_probability = 0.0;
  // Inclusion probability for optional genes at sampling time.
  double optional_presence = 0.5;
};

class Gene {
 public:
  virtual ~Gene() = default;

  virtual GeneKind kind() const = 0;
  virtual std::unique_ptr<Gene> Clone() const = 0;
  virtual void Randomize(Rng& rng, const GeneContext& ctx) = 0;
  // Changes at least one leaf unless IsSingleton().
  virtual void Mutate(Rng& rng, const GeneContext& ctx) = 0;
  virtual std::string Render() const = 0;
  // Body payload form; strings by default.
  virtual Json ToJson() const { return Render(); }
  virtual bool IsValid() const = 0;
  virtual bool IsSingleton() const { return false; }

  virtual size_t ChildCount() const { return 0; }
  virtual Gene* Child(size_t) { return nullptr; }
  virtual std::string ChildName(size_t i) const { return std::to_string(i); }
  const Gene* Child(size_t i) const {
    return const_cast<Gene*>(this)->Child(i);
  }
};

// Owning handle with deep-copy semantics.
class GeneBox {
 public:
  GeneBox() = default;
  explicit GeneBox(std::unique_ptr<Gene> gene) : gene_(std::move(gene)) {}
  template <std::derived_from<Gene> T>
  GeneBox(T gene) : gene_(std::make_unique<T>(std::move(gene))) {}  // NOLINT

  GeneBox(const GeneBox& other)
      : gene_(other.gene_ ? other.gene_->Clone() : nullptr) {}
  GeneBox& operator=(const GeneBox& other) {
    if (this != &other) gene_ = other.gene_ ? other.gene_->Clone() : nullptr;
    return *this;
  }
  GeneBox(GeneBox&&) noexcept = default;
  GeneBox& operator=(GeneBox&&) noexcept = default;

  Gene& operator*() { return *gene_; }
  const Gene& operator*() const { return *gene_; }
  Gene* operator->() { return gene_.get(); }
  const Gene* operator->() const { return gene_.get(); }
  Gene* get() { return gene_.get(); }
  const Gene* get() const { return gene_.get(); }
  explicit operator bool() const { return gene_ != nullptr; }

 private:
  std::unique_ptr<Gene> gene_;
};

template <typename Derived>
class CloneableGene : public Gene {
 public:
  std::unique_ptr<Gene> Clone() const override {
    return std::make_unique<Derived>(static_cast<const Derived&>(*this));
  }
};

class IntegerGene : public CloneableGene<IntegerGene> {
 public:
  // Throws ConfigError if min > max.
  IntegerGene(int64_t min, int64_t max, bool is_long = false);
  static IntegerGene Long();
  static IntegerGene Int32();

  GeneKind kind() const override {
    return is_long_ ? GeneKind::kLong : GeneKind::kInteger;
  }
  void Randomize(Rng& rng, const GeneContext& ctx) override;
  void Mutate(Rng& rng, const GeneContext& ctx) override;
  std::string Render() const override { return std::to_string(value_); }
  Json ToJson() const override { return value_; }
  bool IsValid() const override { return value_ >= min_ && value_ <= max_; }
  bool IsSingleton() const override { return min_ == max_; }

  int64_t value() const { return value_; }
  // Clamped into bounds.
  void set_value(int64_t v);
  int64_t min() const { return min_; }
  int64_t max() const { return max_; }

 private:
  int64_t min_;
  int64_t max_;
  int64_t value_;
  bool is_long_;
};

class FloatGene : public CloneableGene<FloatGene> {
 public:
  FloatGene(double min = -1e9, double max = 1e9);

  GeneKind kind() const override { return GeneKind::kFloat; }
  void Randomize(Rng& rng, const GeneContext& ctx) override;
  void Mutate(Rng& rng, const GeneContext& ctx) override;
  // Shortest round-trip decimal form.
  std::string Render() const override;
  Json ToJson() const override { return value_; }
  bool IsValid() const override;
  bool IsSingleton() const override { return min_ == max_; }

  double value() const { return value_; }
  void set_value(double v);

 private:
  double min_;
  double max_;
  double value_;
};

class BooleanGene : public CloneableGene<BooleanGene> {
 public:
  explicit BooleanGene(bool value = false) : value_(value) {}

  GeneKind kind() const override { return GeneKind::kBoolean; }
  void Randomize(Rng& rng, const GeneContext&) override { value_ = rng.Chance(0.5); }
  void Mutate(Rng&, const GeneContext&) override { value_ = !value_; }
  std::string Render() const override { return value_ ? "true" : "false"; }
  Json ToJson() const override { return value_; }
  bool IsValid() const override { return true; }

  bool value() const { return value_; }
  void set_value(bool v) { value_ = v; }

 private:
  bool value_;
};

class EnumGene : public CloneableGene<EnumGene> {
 public:
  // Throws ConfigError on an empty value list.
  explicit EnumGene(std::vector<std::string> values);

  GeneKind kind() const override { return GeneKind::kEnum; }
  void Randomize(Rng& rng, const GeneContext&) override {
    index_ = rng.Index(values_.size());
  }
  void Mutate(Rng& rng, const GeneContext& ctx) override;
  std::string Render() const override { return values_[index_]; }
  bool IsValid() const override { return index_ < values_.size(); }
  bool IsSingleton() const override { return values_.size() == 1; }

  const std::vector<std::string>& values() const { return values_; }
  size_t index() const { return index_; }
  void set_index(size_t i) { index_ = i % values_.size(); }

 private:
  std::vector<std::string> values_;
  size_t index_ = 0;
};

inline constexpr std::string_view kPrintableAscii =
    " !\"#$%&'()*+,-./0123456789:;<=>?@ABCDEFGHIJKLMNOPQRSTUVWXYZ[\\]^_`"
    "abcdefghijklmnopqrstuvwxyz{|}~";
inline constexpr size_t kDefaultMaxLength = 64;

// Free-form string plus the specializations learned through taint
// analysis. At most one alternative is active: either the free-form value
// (active_ == kFree) or one specialization child.
class StringGene : public CloneableGene<StringGene> {
 public:
  static constexpr size_t kFree = static_cast<size_t>(-1);

  StringGene(size_t min_length = 0, size_t max_length = kDefaultMaxLength,
             std::string charset = std::string(kPrintableAscii));

  GeneKind kind() const override { return GeneKind::kString; }
  void Randomize(Rng& rng, const GeneContext& ctx) override;
  void Mutate(Rng& rng, const GeneContext& ctx) override;
  std::string Render() const override;
  bool IsValid() const override;

  size_t ChildCount() const override { return specializations_.size(); }
  Gene* Child(size_t i) override { return specializations_[i].gene.get(); }
  std::string ChildName(size_t i) const override {
    return "spec" + std::to_string(i);
  }

  const std::string& free_value() const { return value_; }
  void set_free_value(std::string v);
  bool IsFree() const { return active_ == kFree; }
  size_t active() const { return active_; }
  void set_active(size_t i) { active_ = i; }

  // Adds an alternative built from `spec` and activates it. Returns false
  // if an identical specialization is already present or none can be
  // built (for example an unsupported regex).
  bool AddSpecialization(const Specialization& spec, Rng& rng);
  std::vector<Specialization> specializations() const;
  bool HasSpecialization(const Specialization& spec) const;

  size_t max_length() const { return max_length_; }
  std::optional<uint64_t> TaintId() const;

 private:
  struct Alternative {
    Specialization spec;
    GeneBox gene;
  };

  void SampleFree(Rng& rng);
  bool FitsTaint(size_t len) const { return len <= max_length_; }

  size_t min_length_;
  size_t max_length_;
  std::string charset_;
  std::string value_;
  std::vector<Alternative> specializations_;
  size_t active_ = kFree;
};

class ChoiceGene : public CloneableGene<ChoiceGene> {
 public:
  ChoiceGene(std::vector<std::pair<std::string, GeneBox>> children,
             size_t active = 0);

  GeneKind kind() const override { return GeneKind::kChoice; }
  void Randomize(Rng& rng, const GeneContext& ctx) override;
  void Mutate(Rng& rng, const GeneContext& ctx) override;
  // Exactly the active child's phenotype.
  std::string Render() const override { return children_[active_].second->Render(); }
  Json ToJson() const override { return children_[active_].second->ToJson(); }
  bool IsValid() const override;
  bool IsSingleton() const override;

  size_t ChildCount() const override { return children_.size(); }
  Gene* Child(size_t i) override { return children_[i].second.get(); }
  std::string ChildName(size_t i) const override { return children_[i].first; }

  size_t active() const { return active_; }
  void set_active(size_t i) { active_ = i % children_.size(); }
  Gene& active_gene() { return *children_[active_].second; }
  const Gene& active_gene() const { return *children_[active_].second; }

 private:
  std::vector<std::pair<std::string, GeneBox>> children_;
  size_t active_;
};

class OptionalGene : public CloneableGene<OptionalGene> {
 public:
  explicit OptionalGene(GeneBox child, bool present = false)
      : child_(std::move(child)), present_(present) {}

  GeneKind kind() const override { return GeneKind::kOptional; }
  void Randomize(Rng& rng, const GeneContext& ctx) override;
  void Mutate(Rng& rng, const GeneContext& ctx) override;
  std::string Render() const override { return present_ ? child_->Render() : ""; }
  Json ToJson() const override { return present_ ? child_->ToJson() : Json(); }
  bool IsValid() const override { return child_->IsValid(); }

  size_t ChildCount() const override { return 1; }
  Gene* Child(size_t) override { return child_.get(); }
  std::string ChildName(size_t) const override { return "value"; }

  bool present() const { return present_; }
  void set_present(bool p) { present_ = p; }
  Gene& child() { return *child_; }
  const Gene& child() const { return *child_; }

 private:
  GeneBox child_;
  bool present_;
};

// Named children mutated one at a time. Subclasses choose the phenotype.
class CompositeGene : public Gene {
 public:
  void Randomize(Rng& rng, const GeneContext& ctx) override;
  void Mutate(Rng& rng, const GeneContext& ctx) override;
  bool IsValid() const override;
  bool IsSingleton() const override;

  size_t ChildCount() const override { return fields_.size(); }
  Gene* Child(size_t i) override { return fields_[i].second.get(); }
  std::string ChildName(size_t i) const override { return fields_[i].first; }

  Gene* Find(std::string_view name);
  const Gene* Find(std::string_view name) const;
  void Add(std::string name, GeneBox gene);

 protected:
  std::vector<std::pair<std::string, GeneBox>> fields_;
};

// JSON object; absent optional fields are omitted from the payload.
class ObjectGene : public CompositeGene {
 public:
  ObjectGene() = default;
  explicit ObjectGene(std::vector<std::pair<std::string, GeneBox>> fields) {
    fields_ = std::move(fields);
  }

  GeneKind kind() const override { return GeneKind::kObject; }
  std::unique_ptr<Gene> Clone() const override {
    return std::make_unique<ObjectGene>(*this);
  }
  std::string Render() const override { return ToJson().dump(); }
  Json ToJson() const override;
  const std::vector<std::pair<std::string, GeneBox>>& fields() const {
    return fields_;
  }
};

class ArrayGene : public CloneableGene<ArrayGene> {
 public:
  ArrayGene(GeneBox element_template, size_t min_size = 0, size_t max_size = 4);

  GeneKind kind() const override { return GeneKind::kArray; }
  void Randomize(Rng& rng, const GeneContext& ctx) override;
  void Mutate(Rng& rng, const GeneContext& ctx) override;
  std::string Render() const override { return ToJson().dump(); }
  Json ToJson() const override;
  bool IsValid() const override;

  size_t ChildCount() const override { return elements_.size(); }
  Gene* Child(size_t i) override { return elements_[i].get(); }

  size_t size() const { return elements_.size(); }

 private:
  GeneBox template_;
  std::vector<GeneBox> elements_;
  size_t min_size_;
  size_t max_size_;
};

// Depth-first visit of every node with its slash-joined path from `root`
// (the root itself has the empty path).
void VisitGenes(Gene& root, const std::function<void(const std::string&, Gene&)>& fn,
                const std::string& prefix = "");
void VisitGenes(const Gene& root,
                const std::function<void(const std::string&, const Gene&)>& fn,
                const std::string& prefix = "");
Gene* FindGene(Gene& root, std::string_view path);
std::string JoinPath(std::string_view prefix, std::string_view name);

}  // namespace wbfuzz

#endif  // WBFUZZ_GENES_H_
