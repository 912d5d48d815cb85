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

#include <algorithm>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "reidbench/dataset.hpp"
#include "reidbench/rng.hpp"

namespace reidbench {

struct SmoteConfig {
  /// Nearest minority neighbors considered per synthetic point; capped at
  /// minority size - 1.
  unsigned k_neighbors = 5;
};

/// Balances the dataset by synthesizing minority rows: each synthetic
/// point is x + lambda * (nn - x) with lambda ~ U[0,1] and nn one of x's k
/// nearest minority neighbors (Euclidean). Original rows are preserved and
/// come first; an already balanced input is returned unchanged.
inline Dataset smote_oversample(const Dataset& data, const SmoteConfig& cfg,
                                std::uint64_t seed) {
  if (cfg.k_neighbors < 1) throw DataError("SMOTE: k_neighbors must be >= 1");
  const std::size_t ones = data.class_count(1);
  const std::size_t zeros = data.size() - ones;
  if (ones == 0 || zeros == 0) {
    throw DataError("SMOTE: both classes must be present");
  }
  if (ones == zeros) return data;
  const std::uint8_t minority_label = ones < zeros ? 1 : 0;
  const std::size_t minority = std::min(ones, zeros);
  const std::size_t majority = std::max(ones, zeros);
  if (minority < 2) {
    throw DataError("SMOTE: minority class needs at least 2 rows");
  }

  std::vector<std::size_t> minority_rows;
  minority_rows.reserve(minority);
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.labels[i] == minority_label) minority_rows.push_back(i);
  }

  const std::size_t k = std::min<std::size_t>(cfg.k_neighbors, minority - 1);
  // k nearest minority neighbors per minority row (squared Euclidean).
  std::vector<std::vector<std::size_t>> nearest(minority);
  std::vector<std::pair<double, std::size_t>> dist(minority);
  for (std::size_t a = 0; a < minority; ++a) {
    const auto xa = data.row(minority_rows[a]);
    for (std::size_t b = 0; b < minority; ++b) {
      double d2 = 0.0;
      const auto xb = data.row(minority_rows[b]);
      for (std::size_t f = 0; f < data.n_features; ++f) {
        const double diff = xa[f] - xb[f];
        d2 += diff * diff;
      }
      dist[b] = {d2, b};
    }
    dist[a].first = std::numeric_limits<double>::infinity();  // not itself
    std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
    nearest[a].reserve(k);
    for (std::size_t j = 0; j < k; ++j) nearest[a].push_back(dist[j].second);
  }

  Dataset out = data;
  Rng rng(derive_seed(seed, seed_stream::kSmote));
  std::vector<double> synth(data.n_features);
  for (std::size_t s = 0; s < majority - minority; ++s) {
    const std::size_t a = rng.index(minority);
    const std::size_t b = nearest[a][rng.index(k)];
    const double lambda = rng.uniform01();
    const auto xa = data.row(minority_rows[a]);
    const auto xb = data.row(minority_rows[b]);
    for (std::size_t f = 0; f < data.n_features; ++f) {
      synth[f] = xa[f] + lambda * (xb[f] - xa[f]);
    }
    out.add_row(synth, minority_label);
  }
  return out;
}

}  // namespace reidbench
