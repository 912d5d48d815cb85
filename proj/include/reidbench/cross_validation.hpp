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

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "reidbench/forest.hpp"
#include "reidbench/smote.hpp"

namespace reidbench {

/// F1 on the positive class: 2PR / (P + R), defined as 0 when P + R == 0.
inline double f1_score(std::span<const std::uint8_t> predictions,
                       std::span<const std::uint8_t> truth) {
  if (predictions.size() != truth.size() || predictions.empty()) {
    throw DataError("f1_score: mismatched or empty inputs");
  }
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (predictions[i] == 1 && truth[i] == 1) ++tp;
    if (predictions[i] == 1 && truth[i] == 0) ++fp;
    if (predictions[i] == 0 && truth[i] == 1) ++fn;
  }
  const double precision =
      tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
  const double recall =
      tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

struct CvResult {
  /// 5 repetitions x 2 folds, in (repetition, fold) order.
  std::array<double, 10> fold_f1{};
  double mean_f1 = 0.0;
  /// Per-feature mean decrease in impurity, averaged over the 10 trained
  /// forests and normalized to sum 1 (all-zero if nothing ever split).
  std::vector<double> importances;
  bool no_splits = false;
};

/// 5x2 cross-validation: five seeded stratified 50/50 halvings; each half
/// trains once and tests once. SMOTE runs on the training half only, so
/// synthetic rows never leak into a test fold. The same `seed` reproduces
/// the same fold assignments, which lets two feature encodings of the same
/// examples share folds exactly.
inline CvResult cross_validate_5x2(const Dataset& data,
                                   const ForestConfig& forest_cfg,
                                   const SmoteConfig& smote_cfg,
                                   std::uint64_t seed) {
  const std::size_t ones = data.class_count(1);
  const std::size_t zeros = data.size() - ones;
  if (ones < 10 || zeros < 10) {
    throw DataError("5x2 CV: need at least 10 rows per class");
  }
  std::vector<std::size_t> one_rows, zero_rows;
  one_rows.reserve(ones);
  zero_rows.reserve(zeros);
  for (std::size_t i = 0; i < data.size(); ++i) {
    (data.labels[i] == 1 ? one_rows : zero_rows).push_back(i);
  }

  CvResult result;
  result.importances.assign(data.n_features, 0.0);
  std::size_t forests_with_splits = 0;
  for (int rep = 0; rep < 5; ++rep) {
    Rng rng(derive_seed(seed, seed_stream::kCv, rep));
    rng.shuffle(one_rows);
    rng.shuffle(zero_rows);
    std::array<std::vector<std::size_t>, 2> halves;
    for (std::size_t i = 0; i < one_rows.size(); ++i) {
      halves[i < ones / 2 ? 0 : 1].push_back(one_rows[i]);
    }
    for (std::size_t i = 0; i < zero_rows.size(); ++i) {
      halves[i < zeros / 2 ? 0 : 1].push_back(zero_rows[i]);
    }
    for (int fold = 0; fold < 2; ++fold) {
      const Dataset train_raw = data.subset(halves[fold]);
      const Dataset test = data.subset(halves[1 - fold]);
      const Dataset train = smote_oversample(
          train_raw, smote_cfg, derive_seed(seed, seed_stream::kSmote, rep,
                                            fold));
      ForestConfig cfg = forest_cfg;
      cfg.seed = derive_seed(seed, seed_stream::kForest, rep, fold);
      const RandomForest forest = train_forest(train, cfg);
      std::vector<std::uint8_t> predictions(test.size());
      for (std::size_t i = 0; i < test.size(); ++i) {
        predictions[i] = forest.predict_label(test.row(i));
      }
      result.fold_f1[rep * 2 + fold] = f1_score(predictions, test.labels);
      if (!forest.no_splits()) {
        ++forests_with_splits;
        for (std::size_t f = 0; f < data.n_features; ++f) {
          result.importances[f] += forest.importances()[f];
        }
      }
    }
  }
  double sum = 0.0;
  for (double v : result.fold_f1) sum += v;
  result.mean_f1 = sum / 10.0;
  if (forests_with_splits == 0) {
    result.no_splits = true;
  } else {
    double total = 0.0;
    for (double v : result.importances) total += v;
    for (double& v : result.importances) v /= total;
  }
  return result;
}

}  // namespace reidbench
