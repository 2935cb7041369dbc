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

#include "wbfuzz/uri_gene.h"

#include <algorithm>
#include <cstdio>

namespace wbfuzz {

namespace {

constexpr std::string_view kLabelEdge = "abcdefghijklmnopqrstuvwxyz0123456789";
constexpr std::string_view kLabelInner = "abcdefghijklmnopqrstuvwxyz0123456789-";
constexpr std::string_view kLetters = "abcdefghijklmnopqrstuvwxyz";
constexpr std::string_view kSegmentChars =
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_~-";
constexpr size_t kMaxLabels = 4;
constexpr size_t kMaxLabelLength = 63;
constexpr size_t kMaxSegments = 4;
constexpr size_t kMaxSegmentLength = 12;

std::string Hex(uint64_t v, int digits) {
  std::string out(static_cast<size_t>(digits), '0');
  for (int i = digits - 1; i >= 0; --i) {
    out[static_cast<size_t>(i)] = "0123456789abcdef"[v & 0xF];
    v >>= 4;
  }
  return out;
}

std::vector<std::string> Split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::string PercentEncode(std::string_view s) {
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '.' || c == '_' || c == '~') {
      out += static_cast<char>(c);
    } else {
      char buf[4];
      std::snprintf(buf, sizeof(buf), "%%%02X", c);
      out += buf;
    }
  }
  return out;
}

bool LabelValid(const std::string& label, bool last) {
  if (label.empty() || label.size() > kMaxLabelLength) return false;
  if (kLabelEdge.find(label.front()) == std::string_view::npos) return false;
  if (kLabelEdge.find(label.back()) == std::string_view::npos) return false;
  if (last && kLetters.find(label.front()) == std::string_view::npos) return false;
  return std::all_of(label.begin(), label.end(), [](char c) {
    return kLabelInner.find(c) != std::string_view::npos;
  });
}

std::string RandomLabel(Rng& rng, bool last) {
  const size_t len = static_cast<size_t>(rng.Int(1, 8));
  std::string label;
  for (size_t i = 0; i < len; ++i) {
    const bool edge = i == 0 || i + 1 == len;
    std::string_view pool = edge ? kLabelEdge : kLabelInner;
    if (i == 0 && last) pool = kLetters;
    label += pool[rng.Index(pool.size())];
  }
  return label;
}

std::string RandomSegment(Rng& rng) {
  const size_t len = static_cast<size_t>(rng.Int(1, 8));
  std::string seg;
  for (size_t i = 0; i < len; ++i) seg += kSegmentChars[rng.Index(kSegmentChars.size())];
  return seg;
}

}  // namespace

std::string Base64Encode(std::string_view data) {
  static constexpr char kTable[] =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  size_t i = 0;
  for (; i + 2 < data.size(); i += 3) {
    const uint32_t n = (static_cast<unsigned char>(data[i]) << 16) |
                       (static_cast<unsigned char>(data[i + 1]) << 8) |
                       static_cast<unsigned char>(data[i + 2]);
    out += kTable[(n >> 18) & 63];
    out += kTable[(n >> 12) & 63];
    out += kTable[(n >> 6) & 63];
    out += kTable[n & 63];
  }
  if (i + 1 == data.size()) {
    const uint32_t n = static_cast<unsigned char>(data[i]) << 16;
    out += kTable[(n >> 18) & 63];
    out += kTable[(n >> 12) & 63];
    out += "==";
  } else if (i + 2 == data.size()) {
    const uint32_t n = (static_cast<unsigned char>(data[i]) << 16) |
                       (static_cast<unsigned char>(data[i + 1]) << 8);
    out += kTable[(n >> 18) & 63];
    out += kTable[(n >> 12) & 63];
    out += kTable[(n >> 6) & 63];
    out += '=';
  }
  return out;
}

// ---------------------------------------------------------------------------

UuidGene::UuidGene() : UuidGene(0, 0) {}

UuidGene::UuidGene(int64_t most_significant, int64_t least_significant) {
  IntegerGene msb = IntegerGene::Long();
  msb.set_value(most_significant);
  IntegerGene lsb = IntegerGene::Long();
  lsb.set_value(least_significant);
  Add("mostSigBits", std::move(msb));
  Add("leastSigBits", std::move(lsb));
}

std::string UuidGene::Render() const {
  const auto msb = static_cast<uint64_t>(
      static_cast<const IntegerGene&>(*fields_[0].second).value());
  const auto lsb = static_cast<uint64_t>(
      static_cast<const IntegerGene&>(*fields_[1].second).value());
  return Hex(msb >> 32, 8) + "-" + Hex((msb >> 16) & 0xFFFF, 4) + "-" +
         Hex(msb & 0xFFFF, 4) + "-" + Hex(lsb >> 48, 4) + "-" +
         Hex(lsb & 0xFFFFFFFFFFFFULL, 12);
}

// ---------------------------------------------------------------------------

HostnameGene::HostnameGene() : labels_{"example", "com"} {}

HostnameGene::HostnameGene(std::vector<std::string> labels)
    : labels_(std::move(labels)) {}

void HostnameGene::Randomize(Rng& rng, const GeneContext&) {
  const auto n = static_cast<size_t>(rng.Int(1, 3));
  labels_.clear();
  for (size_t i = 0; i < n; ++i) labels_.push_back(RandomLabel(rng, i + 1 == n));
}

void HostnameGene::Mutate(Rng& rng, const GeneContext& ctx) {
  const std::string before = Render();
  for (int attempt = 0; attempt < 16; ++attempt) {
    std::vector<std::string> next = labels_;
    switch (rng.Int(0, 3)) {
      case 0: {  // change a character
        const size_t li = rng.Index(next.size());
        std::string& label = next[li];
        const size_t pos = rng.Index(label.size());
        const bool edge = pos == 0 || pos + 1 == label.size();
        std::string_view pool = edge ? kLabelEdge : kLabelInner;
        if (pos == 0 && li + 1 == next.size()) pool = kLetters;
        label[pos] = pool[rng.Index(pool.size())];
        break;
      }
      case 1:  // add a label in front
        if (next.size() < kMaxLabels) next.insert(next.begin(), RandomLabel(rng, false));
        break;
      case 2:  // drop a label
        if (next.size() > 1) next.erase(next.begin() + static_cast<std::ptrdiff_t>(rng.Index(next.size() - 1)));
        break;
      default: {  // grow or shrink a label
        std::string& label = next[rng.Index(next.size())];
        if (label.size() > 1 && rng.Chance(0.5)) {
          label.erase(label.begin() + 1 + static_cast<std::ptrdiff_t>(rng.Index(label.size() - 1)));
        } else if (label.size() < kMaxLabelLength) {
          label.insert(label.begin() + 1, kLabelEdge[rng.Index(kLabelEdge.size())]);
        }
        break;
      }
    }
    bool ok = true;
    for (size_t i = 0; i < next.size(); ++i) ok = ok && LabelValid(next[i], i + 1 == next.size());
    if (!ok) continue;
    labels_ = std::move(next);
    if (Render() != before) return;
  }
  Randomize(rng, ctx);
}

std::string HostnameGene::Render() const {
  std::string out;
  for (size_t i = 0; i < labels_.size(); ++i) {
    if (i) out += '.';
    out += labels_[i];
  }
  return out;
}

bool HostnameGene::IsValid() const {
  if (labels_.empty() || labels_.size() > kMaxLabels) return false;
  for (size_t i = 0; i < labels_.size(); ++i) {
    if (!LabelValid(labels_[i], i + 1 == labels_.size())) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

InetGene::InetGene() : InetGene(127, 0, 0, 1) {}

InetGene::InetGene(int a, int b, int c, int d) {
  const int octets[] = {a, b, c, d};
  for (int i = 0; i < 4; ++i) {
    IntegerGene g(0, 255);
    g.set_value(octets[i]);
    Add("octet" + std::to_string(i), std::move(g));
  }
}

std::string InetGene::Render() const {
  std::string out;
  for (size_t i = 0; i < fields_.size(); ++i) {
    if (i) out += '.';
    out += fields_[i].second->Render();
  }
  return out;
}

// ---------------------------------------------------------------------------

void UrlPathGene::Randomize(Rng& rng, const GeneContext&) {
  const auto n = static_cast<size_t>(rng.Int(0, 3));
  segments_.clear();
  for (size_t i = 0; i < n; ++i) segments_.push_back(RandomSegment(rng));
}

void UrlPathGene::Mutate(Rng& rng, const GeneContext&) {
  std::vector<int> ops;
  if (segments_.size() < kMaxSegments) ops.push_back(0);
  if (!segments_.empty()) {
    ops.push_back(1);
    ops.push_back(2);
  }
  switch (ops[rng.Index(ops.size())]) {
    case 0:
      segments_.insert(segments_.begin() + static_cast<std::ptrdiff_t>(rng.Index(segments_.size() + 1)),
                       RandomSegment(rng));
      break;
    case 1:
      segments_.erase(segments_.begin() + static_cast<std::ptrdiff_t>(rng.Index(segments_.size())));
      break;
    default: {
      std::string& seg = segments_[rng.Index(segments_.size())];
      const size_t pos = rng.Index(seg.size());
      char c = seg[pos];
      while (c == seg[pos]) c = kSegmentChars[rng.Index(kSegmentChars.size())];
      seg[pos] = c;
      if (seg.size() < kMaxSegmentLength && rng.Chance(0.3)) seg += c;
      break;
    }
  }
}

std::string UrlPathGene::Render() const {
  std::string out = "/";
  for (size_t i = 0; i < segments_.size(); ++i) {
    if (i) out += '/';
    out += segments_[i];
  }
  return out;
}

bool UrlPathGene::IsValid() const {
  if (segments_.size() > kMaxSegments) return false;
  return std::all_of(segments_.begin(), segments_.end(), [](const std::string& s) {
    return !s.empty() && s.size() <= kMaxSegmentLength &&
           std::all_of(s.begin(), s.end(), [](char c) {
             return kSegmentChars.find(c) != std::string_view::npos;
           });
  });
}

// ---------------------------------------------------------------------------

namespace {

void AddAuthority(CompositeGene& g) {
  g.Add("host", ChoiceGene({{"hostname", HostnameGene()}, {"ipv4", InetGene()}}));
  g.Add("port", OptionalGene(IntegerGene(0, 65535)));
  g.Add("path", OptionalGene(UrlPathGene()));
}

}  // namespace

UriPartGene::UriPartGene(Form form) : form_(form) {
  switch (form) {
    case Form::kHttp:
      Add("scheme", EnumGene({"http", "https"}));
      AddAuthority(*this);
      break;
    case Form::kFtp:
      Add("scheme", EnumGene({"ftp"}));
      AddAuthority(*this);
      break;
    case Form::kFile:
      Add("path", UrlPathGene());
      break;
    case Form::kData:
      Add("media", EnumGene({"text/plain", "application/json", "text/html",
                             "image/png", "application/octet-stream"}));
      Add("base64", BooleanGene(false));
      Add("payload", StringGene(0, 32,
                                "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
                                "0123456789 "));
      break;
    case Form::kUrn:
      Add("nid", EnumGene({"isbn", "uuid", "example", "ietf"}));
      Add("nss", StringGene(1, 32,
                            "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
                            "0123456789-._"));
      break;
  }
}

UriPartGene UriPartGene::Http(const std::string& scheme, const std::string& host,
                              int port, const std::string& path) {
  UriPartGene g(Form::kHttp);
  auto& s = static_cast<EnumGene&>(*g.Find("scheme"));
  s.set_index(scheme == "https" ? 1 : 0);
  auto& h = static_cast<ChoiceGene&>(*g.Find("host"));
  h = ChoiceGene({{"hostname", HostnameGene(Split(host, '.'))}, {"ipv4", InetGene()}}, 0);
  auto& p = static_cast<OptionalGene&>(*g.Find("port"));
  if (port >= 0) {
    static_cast<IntegerGene&>(p.child()).set_value(port);
    p.set_present(true);
  }
  auto& path_gene = static_cast<OptionalGene&>(*g.Find("path"));
  if (!path.empty()) {
    path_gene = OptionalGene(UrlPathGene(Split(path, '/')), true);
  }
  return g;
}

std::string UriPartGene::Render() const {
  auto field = [&](std::string_view name) -> const Gene& { return *Find(name); };
  switch (form_) {
    case Form::kHttp:
    case Form::kFtp: {
      std::string out = field("scheme").Render() + "://" + field("host").Render();
      const auto& port = static_cast<const OptionalGene&>(field("port"));
      if (port.present()) out += ":" + port.child().Render();
      const auto& path = static_cast<const OptionalGene&>(field("path"));
      if (path.present()) out += path.child().Render();
      return out;
    }
    case Form::kFile:
      return "file://" + field("path").Render();
    case Form::kData: {
      const bool b64 = static_cast<const BooleanGene&>(field("base64")).value();
      const std::string payload = field("payload").Render();
      return "data:" + field("media").Render() + (b64 ? ";base64" : "") + "," +
             (b64 ? Base64Encode(payload) : PercentEncode(payload));
    }
    case Form::kUrn:
      return "urn:" + field("nid").Render() + ":" + field("nss").Render();
  }
  return "";
}

// ---------------------------------------------------------------------------

namespace {

ChoiceGene SchemeChoice(bool url_only) {
  std::vector<std::pair<std::string, GeneBox>> parts;
  parts.emplace_back("http", UriPartGene(UriPartGene::Form::kHttp));
  parts.emplace_back("ftp", UriPartGene(UriPartGene::Form::kFtp));
  parts.emplace_back("file", UriPartGene(UriPartGene::Form::kFile));
  if (!url_only) {
    parts.emplace_back("data", UriPartGene(UriPartGene::Form::kData));
    parts.emplace_back("urn", UriPartGene(UriPartGene::Form::kUrn));
  }
  return ChoiceGene(std::move(parts), 0);
}

}  // namespace

UriGene::UriGene(bool url_only) : url_only_(url_only), scheme_(SchemeChoice(url_only)) {}

UriGene::UriGene(UriPartGene part)
    : url_only_(false), scheme_({{"custom", std::move(part)}}, 0) {}

}  // namespace wbfuzz
