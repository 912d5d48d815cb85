// Copyright 2026 The reidbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace reidbench {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives an independent stream seed from a base seed and up to three
/// stream coordinates (stage tag, task index, ...). Every randomized stage
/// owns a stream derived this way, so concurrent tasks never share state.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t s = splitmix64(base);
  s = splitmix64(s ^ a);
  s = splitmix64(s ^ b);
  s = splitmix64(s ^ c);
  return s;
}

// Stage tags for seed derivation. Values only need to be distinct.
namespace seed_stream {
inline constexpr std::uint64_t kLabeling = 0x4c41424cULL;
inline constexpr std::uint64_t kSplit = 0x53504c49ULL;
inline constexpr std::uint64_t kSampling = 0x53414d50ULL;
inline constexpr std::uint64_t kForest = 0x464f5245ULL;
inline constexpr std::uint64_t kCv = 0x43563532ULL;
inline constexpr std::uint64_t kSmote = 0x534d4f54ULL;
inline constexpr std::uint64_t kApl = 0x41504cULL;
inline constexpr std::uint64_t kCell = 0x43454c4cULL;
inline constexpr std::uint64_t kIdentical = 0x4944ULL;
inline constexpr std::uint64_t kNegative = 0x4e4547ULL;
}  // namespace seed_stream

/// Seeded RNG with portable bounded/uniform draws. std::uniform_*
/// distributions are implementation-defined, so reruns would not be
/// bit-reproducible across standard libraries; these helpers are.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Unbiased draw in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= threshold) return r % bound;
    }
  }

  std::size_t index(std::size_t bound) {
    return static_cast<std::size_t>(below(bound));
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[index(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace reidbench
