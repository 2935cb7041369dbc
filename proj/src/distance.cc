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

#include "wbfuzz/distance.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <sstream>

#include "wbfuzz/errors.h"

namespace wbfuzz {

Distance Distance::Of(double d) {
  Distance out;
  if (!std::isfinite(d)) {
    out.value_ = kMaxDistance;
  } else {
    out.value_ = d < 0.0 ? 0.0 : d;
  }
  return out;
}

double Scale(Distance d, double base) {
  if (!(base > 0.0 && base < 1.0)) {
    throw ConfigError("heuristic base must lie in (0, 1), got " +
                      std::to_string(base));
  }
  return base + (1.0 - base) / (1.0 + d.value());
}

Distance NumericEqDistance(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b)) {
    return a == b ? Distance::Zero() : Distance::Max();
  }
  return Distance::Of(std::fabs(a - b));
}

Distance StringEqDistance(std::string_view s, std::string_view t) {
  const size_t overlap = std::min(s.size(), t.size());
  double d = 0.0;
  for (size_t i = 0; i < overlap; ++i) {
    d += std::abs(static_cast<int>(static_cast<unsigned char>(s[i])) -
                  static_cast<int>(static_cast<unsigned char>(t[i])));
  }
  const size_t longer = std::max(s.size(), t.size());
  d += kCharacterPenalty * static_cast<double>(longer - overlap);
  return Distance::Of(d);
}

namespace {

std::optional<double> AsNumber(const Element& e) {
  if (auto* i = std::get_if<int64_t>(&e)) return static_cast<double>(*i);
  if (auto* f = std::get_if<double>(&e)) return *f;
  return std::nullopt;
}

}  // namespace

bool ElementEquals(const Element& a, const Element& b) {
  auto na = AsNumber(a);
  auto nb = AsNumber(b);
  if (na && nb) {
    if (a.index() != b.index()) return false;
    return *na == *nb;
  }
  return a == b;
}

Distance ElementDistance(const Element& a, const Element& b) {
  auto na = AsNumber(a);
  auto nb = AsNumber(b);
  if (na && nb && a.index() == b.index()) return NumericEqDistance(*na, *nb);
  auto* sa = std::get_if<std::string>(&a);
  auto* sb = std::get_if<std::string>(&b);
  if (sa && sb) return StringEqDistance(*sa, *sb);
  return ElementEquals(a, b) ? Distance::Zero() : Distance::Of(1.0);
}

Distance LessThanDistance(double a, double b) {
  if (std::isnan(a) || std::isnan(b)) return Distance::Max();
  return a < b ? Distance::Zero() : Distance::Of(a - b + 1.0);
}

Distance LessEqualDistance(double a, double b) {
  if (std::isnan(a) || std::isnan(b)) return Distance::Max();
  return a <= b ? Distance::Zero() : Distance::Of(a - b);
}

Distance NotEqualDistance(double a, double b) {
  if (std::isnan(a) || std::isnan(b)) return Distance::Zero();
  return a != b ? Distance::Zero() : Distance::Of(1.0);
}

Distance ContainsDistance(const Element& e, std::span<const Element> xs) {
  Distance best = Distance::Max();
  for (const Element& x : xs) {
    best = std::min(best, ElementDistance(x, e));
    if (best.IsZero()) break;
  }
  return best;
}

Distance ContainsAllDistance(std::span<const Element> ys,
                             std::span<const Element> xs) {
  double sum = 0.0;
  for (const Element& y : ys) sum += ContainsDistance(y, xs).value();
  return Distance::Of(sum);
}

double ContainsAllHeuristic(std::span<const Element> ys,
                            std::span<const Element> xs, double base) {
  if (ys.empty()) {
    Scale(Distance::Zero(), base);  // validates base
    return 1.0;
  }
  double sum = 0.0;
  for (const Element& y : ys) sum += Scale(ContainsDistance(y, xs), base);
  const double n = static_cast<double>(ys.size());
  return sum / (n + std::log(n));
}

Distance RemoveAllDistance(std::span<const Element> ys,
                           std::span<const Element> xs) {
  Distance best = Distance::Max();
  for (const Element& y : ys) best = std::min(best, ContainsDistance(y, xs));
  return best;
}

Distance Conjunction(std::span<const Distance> ds) {
  double sum = 0.0;
  for (Distance d : ds) sum += d.value();
  return Distance::Of(sum);
}

Distance Disjunction(std::span<const Distance> ds) {
  if (ds.empty()) return Distance::Max();
  return *std::min_element(ds.begin(), ds.end());
}

std::string ElementToString(const Element& e) {
  struct Visitor {
    std::string operator()(std::monostate) const { return "null"; }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(int64_t i) const { return std::to_string(i); }
    std::string operator()(double d) const {
      std::ostringstream out;
      out << d;
      return out.str();
    }
    std::string operator()(const std::string& s) const { return s; }
  };
  return std::visit(Visitor{}, e);
}

}  // namespace wbfuzz
