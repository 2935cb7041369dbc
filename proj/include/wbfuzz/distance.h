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

#ifndef WBFUZZ_DISTANCE_H_
#define WBFUZZ_DISTANCE_H_

// Branch distances and their scaling into heuristic values in [0, 1].
//
// A distance d >= 0 measures how far an input is from making a predicate
// true; d == 0 means the predicate holds. Heuristic values are what the
// search archive optimizes: h = b + (1 - b) / (1 + d), so h == 1 iff d == 0.

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>

namespace wbfuzz {

inline constexpr double kDefaultBase = 0.1;
// Non-finite inputs and unsatisfiable predicates map here.
inline constexpr double kMaxDistance = 2147483648.0;  // 2^31
// Penalty per missing or surplus character in string distances. Larger
// than any single byte difference, so fixing length always pays off.
inline constexpr double kCharacterPenalty = 256.0;

class Distance {
 public:
  constexpr Distance() = default;
  // Negative values clamp to 0; NaN and infinities clamp to kMaxDistance.
  static Distance Of(double d);
  static constexpr Distance Zero() { return Distance(); }
  static Distance Max() { return Of(kMaxDistance); }

  constexpr double value() const { return value_; }
  constexpr bool IsZero() const { return value_ == 0.0; }

  friend constexpr auto operator<=>(const Distance&, const Distance&) = default;

 private:
  double value_ = 0.0;
};

// h = b + (1 - b) / (1 + d). Throws ConfigError unless 0 < base < 1.
double Scale(Distance d, double base = kDefaultBase);

// Runtime-typed values that collection heuristics compare. Elements of
// different kinds never compare equal and fall back to a 0/1 distance.
using Element = std::variant<std::monostate, bool, int64_t, double, std::string>;

Distance NumericEqDistance(double a, double b);
Distance StringEqDistance(std::string_view s, std::string_view t);
Distance ElementDistance(const Element& a, const Element& b);
bool ElementEquals(const Element& a, const Element& b);

// Korel-style relational distances; 0 iff the relation holds.
Distance LessThanDistance(double a, double b);
Distance LessEqualDistance(double a, double b);
Distance NotEqualDistance(double a, double b);

// d_c(e, X) = min over x in X of d(x, e); empty X is maximal.
Distance ContainsDistance(const Element& e, std::span<const Element> xs);
// Sum of d_c(y, X) over y; 0 iff X contains every y.
Distance ContainsAllDistance(std::span<const Element> ys,
                             std::span<const Element> xs);
// h_a(Y, X) = sum of h_c(y, X) / (|Y| + ln |Y|), with h_a(empty) = 1.
double ContainsAllHeuristic(std::span<const Element> ys,
                            std::span<const Element> xs,
                            double base = kDefaultBase);
// removeAll(Y) changes X iff some y is in X: min over y of d_c(y, X).
Distance RemoveAllDistance(std::span<const Element> ys,
                           std::span<const Element> xs);

// d(A and B) = d(A) + d(B); empty conjunction is satisfied.
Distance Conjunction(std::span<const Distance> ds);
// d(A or B) = min(d(A), d(B)); empty disjunction is maximal.
Distance Disjunction(std::span<const Distance> ds);

std::string ElementToString(const Element& e);

}  // namespace wbfuzz

#endif  // WBFUZZ_DISTANCE_H_
