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

#ifndef WBFUZZ_URI_GENE_H_
#define WBFUZZ_URI_GENE_H_

// Specialized string genes whose phenotypes always parse: UUIDs built from
// two 64-bit halves, and URIs built from a scheme choice over structured
// parts (http/https, ftp, file, data, urn).

#include <string>
#include <vector>

#include "wbfuzz/genes.h"

namespace wbfuzz {

class UuidGene : public CompositeGene {
 public:
  UuidGene();
  UuidGene(int64_t most_significant, int64_t least_significant);

  GeneKind kind() const override { return GeneKind::kUuid; }
  std::unique_ptr<Gene> Clone() const override {
    return std::make_unique<UuidGene>(*this);
  }
  // 8-4-4-4-12 lowercase hex, as java.util.UUID prints it.
  std::string Render() const override;
};

// DNS-safe host name: 1-3 labels of [a-z0-9-], no leading or trailing
// hyphen, at most 63 characters per label.
class HostnameGene : public CloneableGene<HostnameGene> {
 public:
  HostnameGene();
  explicit HostnameGene(std::vector<std::string> labels);

  GeneKind kind() const override { return GeneKind::kHostname; }
  void Randomize(Rng& rng, const GeneContext& ctx) override;
  void Mutate(Rng& rng, const GeneContext& ctx) override;
  std::string Render() const override;
  bool IsValid() const override;

 private:
  std::vector<std::string> labels_;
};

// Four octets constrained to [0, 255].
class InetGene : public CompositeGene {
 public:
  InetGene();
  InetGene(int a, int b, int c, int d);

  GeneKind kind() const override { return GeneKind::kInet; }
  std::unique_ptr<Gene> Clone() const override {
    return std::make_unique<InetGene>(*this);
  }
  std::string Render() const override;
};

// Absolute path: "/" followed by 0-4 segments of unreserved characters.
class UrlPathGene : public CloneableGene<UrlPathGene> {
 public:
  UrlPathGene() = default;
  explicit UrlPathGene(std::vector<std::string> segments)
      : segments_(std::move(segments)) {}

  GeneKind kind() const override { return GeneKind::kUrlPath; }
  void Randomize(Rng& rng, const GeneContext& ctx) override;
  void Mutate(Rng& rng, const GeneContext& ctx) override;
  std::string Render() const override;
  bool IsValid() const override;

 private:
  std::vector<std::string> segments_;
};

// One scheme branch of a URI tree.
class UriPartGene : public CompositeGene {
 public:
  enum class Form { kHttp, kFtp, kFile, kData, kUrn };

  explicit UriPartGene(Form form);
  // http/https tree with explicit parts; port < 0 means absent, empty path
  // means absent.
  static UriPartGene Http(const std::string& scheme, const std::string& host,
                          int port, const std::string& path);

  GeneKind kind() const override { return GeneKind::kUriPart; }
  std::unique_ptr<Gene> Clone() const override {
    return std::make_unique<UriPartGene>(*this);
  }
  std::string Render() const override;
  Form form() const { return form_; }

 private:
  Form form_;
};

class UriGene : public CloneableGene<UriGene> {
 public:
  // URLs restrict the scheme choice to http/https, ftp and file.
  explicit UriGene(bool url_only = false);
  explicit UriGene(UriPartGene part);

  GeneKind kind() const override {
    return url_only_ ? GeneKind::kUrl : GeneKind::kUri;
  }
  // Parts never carry taint: their phenotype must stay a valid URI.
  void Randomize(Rng& rng, const GeneContext&) override {
    scheme_.Randomize(rng, GeneContext{});
  }
  void Mutate(Rng& rng, const GeneContext&) override {
    scheme_.Mutate(rng, GeneContext{});
  }
  std::string Render() const override { return scheme_.Render(); }
  bool IsValid() const override { return scheme_.IsValid(); }

  size_t ChildCount() const override { return 1; }
  Gene* Child(size_t) override { return &scheme_; }
  std::string ChildName(size_t) const override { return "scheme"; }

 private:
  bool url_only_;
  ChoiceGene scheme_;
};

std::string Base64Encode(std::string_view data);

}  // namespace wbfuzz

#endif  // WBFUZZ_URI_GENE_H_
