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

#ifndef WBFUZZ_RNG_H_
#define WBFUZZ_RNG_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>

namespace wbfuzz {

// Seeded generator shared by every randomized component. All draws go
// through these helpers so that a run is reproducible from its seed.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  // Uniform in [lo, hi], both inclusive.
  int64_t Int(int64_t lo, int64_t hi) {
    return std::uniform_int_distribution<int64_t>(lo, hi)(engine_);
  }
  uint64_t Bits() { return engine_(); }
  size_t Index(size_t n) {
    if (n == 0) throw std::logic_error("Rng::Index on empty range");
    return static_cast<size_t>(Int(0, static_cast<int64_t>(n) - 1));
  }
  // Uniform in [lo, hi).
  double Real(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  bool Chance(double p) { return p > 0.0 && Real() < p; }

  template <typename T>
  const T& Pick(std::span<const T> items) {
    return items[Index(items.size())];
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace wbfuzz

#endif  // WBFUZZ_RNG_H_
