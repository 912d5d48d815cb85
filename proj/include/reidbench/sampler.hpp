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
#include <filesystem>
#include <fstream>
#include <numeric>
#include <vector>

#include "reidbench/rng.hpp"
#include "reidbench/split.hpp"

namespace reidbench {

/// One training example: a (sanitized, auxiliary) node pair with the
/// ground-truth label (1 = same original node, 0 = different).
struct PairExample {
  NodeId san = 0;
  NodeId aux = 0;
  std::uint8_t label = 0;
};

struct SamplePlan {
  std::size_t ell = 1000;
  std::size_t subsample_size = 2000;
  std::uint64_t seed = 0;
  /// Upper bound on streamed non-identical pairs; bounds the one-pass cost
  /// on huge graphs. Recorded in reports when it truncates.
  std::size_t negative_cap = 5'000'000;
};

/// Streaming view over the pair population S of a split: the |V_alpha|
/// identical pairs plus every cross pair with differing original identity.
/// Non-identical pairs are visited in a seeded full-period affine
/// permutation of the product grid, so nothing is materialized and a
/// capped prefix is not biased toward low indices.
class PairPopulation {
 public:
  explicit PairPopulation(const OverlapSplit& split) : split_(&split) {
    if (split.identity_map.empty()) {
      throw DataError("pair population: empty overlap");
    }
    identical_partner_.assign(split.san.node_count(), kNoNode);
    for (const auto& [s, a] : split.identity_map) {
      identical_partner_[s] = a;
    }
  }

  /// |S|: identical plus non-identical pair count.
  std::uint64_t total() const {
    return static_cast<std::uint64_t>(split_->san.node_count()) *
           static_cast<std::uint64_t>(split_->aux.node_count());
  }

  std::uint64_t identical_count() const {
    return split_->identity_map.size();
  }

  std::uint64_t negative_count() const { return total() - identical_count(); }

  template <typename Fn>
  void for_each_identical(Fn&& fn) const {
    for (const auto& [s, a] : split_->identity_map) {
      fn(PairExample{s, a, 1});
    }
  }

  /// Streams up to `cap` non-identical pairs in seeded-shuffled order
  /// (cap = 0 streams them all).
  template <typename Fn>
  void for_each_negative(std::uint64_t seed, std::uint64_t cap,
                         Fn&& fn) const {
    const std::uint64_t m = total();
    const std::uint64_t aux_n = split_->aux.node_count();
    Rng rng(derive_seed(seed, seed_stream::kNegative));
    // Full-period permutation i -> (a*i + c) mod m with gcd(a, m) = 1.
    std::uint64_t mult = 0;
    do {
      mult = 1 + rng.below(m);
    } while (std::gcd(mult, m) != 1);
    const std::uint64_t offset = rng.below(m);
    std::uint64_t remaining = cap == 0 ? negative_count()
                                       : std::min(cap, negative_count());
    for (std::uint64_t i = 0; i < m && remaining > 0; ++i) {
      const std::uint64_t idx = static_cast<std::uint64_t>(
          (static_cast<unsigned __int128>(mult) * i + offset) % m);
      const NodeId san = static_cast<NodeId>(idx / aux_n);
      const NodeId aux = static_cast<NodeId>(idx % aux_n);
      if (identical_partner_[san] == aux) continue;
      fn(PairExample{san, aux, 0});
      --remaining;
    }
  }

 private:
  const OverlapSplit* split_;
  std::vector<NodeId> identical_partner_;
};

/// Single Algorithm-R reservoir with its own RNG stream.
template <typename T>
class Reservoir {
 public:
  Reservoir(std::size_t capacity, std::uint64_t seed)
      : capacity_(capacity), rng_(seed) {
    items_.reserve(capacity);
  }

  void offer(const T& item) {
    if (items_.size() < capacity_) {
      items_.push_back(item);
    } else if (capacity_ > 0) {
      const std::uint64_t j = rng_.below(seen_ + 1);
      if (j < capacity_) items_[static_cast<std::size_t>(j)] = item;
    }
    ++seen_;
  }

  const std::vector<T>& items() const { return items_; }
  std::vector<T> take() { return std::move(items_); }

 private:
  std::size_t capacity_;
  std::vector<T> items_;
  std::uint64_t seen_ = 0;
  Rng rng_;
};

/// Draws `ell` subsamples in one pass over the population. Reservoirs are
/// stratified by class so every subsample keeps both classes: identical
/// pairs fill up to min(|V_alpha|, size/2) slots, non-identical pairs the
/// rest, and SMOTE retires the residual imbalance downstream. Identical
/// items precede non-identical ones in each returned subsample.
inline std::vector<std::vector<PairExample>> reservoir_subsamples(
    const OverlapSplit& split, const SamplePlan& plan) {
  if (plan.ell < 1) throw DataError("sample plan: ell must be >= 1");
  if (plan.subsample_size < 20) {
    throw DataError("sample plan: subsample_size must be >= 20");
  }
  PairPopulation population(split);
  if (population.identical_count() < 2) {
    throw DataError("pair population: fewer than 2 identical pairs");
  }
  const std::uint64_t negatives_available =
      plan.negative_cap == 0
          ? population.negative_count()
          : std::min<std::uint64_t>(population.negative_count(),
                                    plan.negative_cap);
  std::size_t identical_quota = static_cast<std::size_t>(
      std::min<std::uint64_t>(population.identical_count(),
                              plan.subsample_size / 2));
  std::size_t negative_quota = plan.subsample_size - identical_quota;
  if (negative_quota > negatives_available) {
    // Not enough negatives in reach: refill from the identical stratum.
    negative_quota = static_cast<std::size_t>(negatives_available);
    identical_quota = static_cast<std::size_t>(
        std::min<std::uint64_t>(population.identical_count(),
                                plan.subsample_size - negative_quota));
  }
  if (identical_quota + negative_quota < plan.subsample_size) {
    throw DataError("pair population smaller than subsample_size");
  }

  std::vector<Reservoir<PairExample>> identical_res;
  std::vector<Reservoir<PairExample>> negative_res;
  identical_res.reserve(plan.ell);
  negative_res.reserve(plan.ell);
  for (std::size_t r = 0; r < plan.ell; ++r) {
    identical_res.emplace_back(
        identical_quota, derive_seed(plan.seed, seed_stream::kIdentical, r));
    negative_res.emplace_back(
        negative_quota, derive_seed(plan.seed, seed_stream::kNegative, r));
  }
  population.for_each_identical([&](const PairExample& e) {
    for (auto& res : identical_res) res.offer(e);
  });
  population.for_each_negative(
      plan.seed, negatives_available, [&](const PairExample& e) {
        for (auto& res : negative_res) res.offer(e);
      });

  std::vector<std::vector<PairExample>> subsamples;
  subsamples.reserve(plan.ell);
  for (std::size_t r = 0; r < plan.ell; ++r) {
    std::vector<PairExample> s = identical_res[r].take();
    std::vector<PairExample> neg = negative_res[r].take();
    s.insert(s.end(), neg.begin(), neg.end());
    subsamples.push_back(std::move(s));
  }
  return subsamples;
}

/// CSV export of one subsample: `san_id,aux_id,label`.
inline void write_subsample_csv(const std::vector<PairExample>& subsample,
                                const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open " + path.string());
  out << "san_id,aux_id,label\n";
  for (const auto& e : subsample) {
    out << e.san << ',' << e.aux << ',' << static_cast<int>(e.label) << '\n';
  }
}

}  // namespace reidbench
