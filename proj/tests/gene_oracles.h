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

#ifndef WBFUZZ_TESTS_GENE_ORACLES_H_
#define WBFUZZ_TESTS_GENE_ORACLES_H_

// Phenotype checkers written independently from the gene code. The URI
// checker follows the RFC 3986 grammar and additionally rejects empty
// hosts and out-of-range ports for the schemes that carry an authority.

#include <cctype>
#include <cstdlib>
#include <string>
#include <string_view>

namespace wbfuzz::testing {

inline bool IsUnreserved(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.' ||
         c == '_' || c == '~';
}

inline bool IsSubDelim(char c) {
  return std::string_view("!$&'()*+,;=").find(c) != std::string_view::npos;
}

inline bool IsHex(char c) { return std::isxdigit(static_cast<unsigned char>(c)) != 0; }

// Consumes pchar-like runs; `extra` lists additional literal characters.
inline bool ValidRun(std::string_view s, std::string_view extra) {
  for (size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '%') {
      if (i + 2 >= s.size() || !IsHex(s[i + 1]) || !IsHex(s[i + 2])) return false;
      i += 2;
      continue;
    }
    if (IsUnreserved(c) || IsSubDelim(c) || extra.find(c) != std::string_view::npos) {
      continue;
    }
    return false;
  }
  return true;
}

inline bool IsDecOctet(std::string_view s) {
  if (s.empty() || s.size() > 3) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  if (s.size() > 1 && s[0] == '0') return false;
  return std::atoi(std::string(s).c_str()) <= 255;
}

inline bool IsIpv4(std::string_view s) {
  int parts = 0;
  size_t start = 0;
  while (true) {
    const size_t dot = s.find('.', start);
    const auto part = s.substr(start, dot == std::string_view::npos ? s.npos : dot - start);
    if (!IsDecOctet(part)) return false;
    ++parts;
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return parts == 4;
}

// DNS host name: labels of [a-z0-9-], 1..63 chars, no edge hyphen.
inline bool IsHostname(std::string_view s) {
  if (s.empty()) return false;
  size_t start = 0;
  while (true) {
    const size_t dot = s.find('.', start);
    const auto label = s.substr(start, dot == std::string_view::npos ? s.npos : dot - start);
    if (label.empty() || label.size() > 63) return false;
    if (label.front() == '-' || label.back() == '-') return false;
    for (char c : label) {
      if (!(std::islower(static_cast<unsigned char>(c)) ||
            std::isdigit(static_cast<unsigned char>(c)) || c == '-')) {
        return false;
      }
    }
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return true;
}

inline bool IsStrictUri(std::string_view s) {
  const size_t colon = s.find(':');
  if (colon == std::string_view::npos || colon == 0) return false;
  const auto scheme = s.substr(0, colon);
  if (!std::isalpha(static_cast<unsigned char>(scheme[0]))) return false;
  for (char c : scheme) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '-' ||
          c == '.')) {
      return false;
    }
  }
  std::string_view rest = s.substr(colon + 1);
  // Fragment and query.
  if (auto hash = rest.find('#'); hash != std::string_view::npos) {
    if (!ValidRun(rest.substr(hash + 1), ":@/?")) return false;
    rest = rest.substr(0, hash);
  }
  if (auto q = rest.find('?'); q != std::string_view::npos) {
    if (!ValidRun(rest.substr(q + 1), ":@/?")) return false;
    rest = rest.substr(0, q);
  }
  const bool needs_host = scheme == "http" || scheme == "https" || scheme == "ftp";
  if (rest.substr(0, 2) == "//") {
    rest = rest.substr(2);
    const size_t slash = rest.find('/');
    std::string_view authority = rest.substr(0, slash);
    std::string_view path = slash == std::string_view::npos ? "" : rest.substr(slash);
    if (auto at = authority.rfind('@'); at != std::string_view::npos) {
      if (!ValidRun(authority.substr(0, at), ":")) return false;
      authority = authority.substr(at + 1);
    }
    std::string_view host = authority;
    if (auto pc = authority.rfind(':'); pc != std::string_view::npos) {
      host = authority.substr(0, pc);
      const auto port = authority.substr(pc + 1);
      for (char c : port) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
      }
      if (needs_host && (port.empty() || port.size() > 5 ||
                         std::atoi(std::string(port).c_str()) > 65535)) {
        return false;
      }
    }
    if (!ValidRun(host, "")) return false;
    if (needs_host && !(IsIpv4(host) || IsHostname(host))) return false;
    if (!path.empty() && path[0] != '/') return false;
    return ValidRun(path, ":@/");
  }
  if (needs_host) return false;
  // path-absolute, path-rootless or path-empty.
  if (rest.substr(0, 2) == "//") return false;
  return ValidRun(rest, ":@/");
}

inline bool IsUuidLayout(std::string_view s) {
  if (s.size() != 36) return false;
  for (size_t i = 0; i < s.size(); ++i) {
    const bool dash = i == 8 || i == 13 || i == 18 || i == 23;
    if (dash != (s[i] == '-')) return false;
    if (!dash && !(std::isdigit(static_cast<unsigned char>(s[i])) ||
                   (s[i] >= 'a' && s[i] <= 'f'))) {
      return false;
    }
  }
  return true;
}

}  // namespace wbfuzz::testing

#endif  // WBFUZZ_TESTS_GENE_ORACLES_H_
