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
#include <span>
#include <string>
#include <vector>

#include "reidbench/errors.hpp"

namespace reidbench {

/// Rectangular feature matrix with binary labels, stored row-major.
struct Dataset {
  std::vector<double> values;
  std::vector<std::uint8_t> labels;
  std::vector<std::string> feature_names;
  std::size_t n_features = 0;

  std::size_t size() const { return labels.size(); }

  std::span<const double> row(std::size_t i) const {
    return {values.data() + i * n_features, n_features};
  }

  void add_row(std::span<const double> features, std::uint8_t label) {
    if (features.size() != n_features) {
      throw DataError("row width does not match dataset");
    }
    values.insert(values.end(), features.begin(), features.end());
    labels.push_back(label);
  }

  std::size_t class_count(std::uint8_t label) const {
    std::size_t c = 0;
    for (auto l : labels) c += l == label;
    return c;
  }

  Dataset subset(const std::vector<std::size_t>& indices) const {
    Dataset out;
    out.n_features = n_features;
    out.feature_names = feature_names;
    out.values.reserve(indices.size() * n_features);
    out.labels.reserve(indices.size());
    for (std::size_t i : indices) out.add_row(row(i), labels[i]);
    return out;
  }
};

}  // namespace reidbench
