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
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "reidbench/dataset.hpp"
#include "reidbench/parallel.hpp"
#include "reidbench/rng.hpp"

namespace reidbench {

struct ForestConfig {
  unsigned n_trees = 100;
  /// Per-split candidate feature count; 0 means ceil(sqrt(F)).
  unsigned max_features = 0;
  unsigned min_leaf = 1;
  /// Maximum tree depth; -1 means unlimited.
  int max_depth = -1;
  std::uint64_t seed = 0;
};

/// Binary CART tree. Internal nodes route row[feature] <= threshold to the
/// left child; leaves carry the class-1 fraction of their training rows.
class DecisionTree {
 public:
  struct Node {
    std::int32_t feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    double p1 = 0.0;
  };

  double predict_p1(std::span<const double> row) const {
    std::int32_t i = 0;
    while (nodes_[i].feature >= 0) {
      const Node& node = nodes_[i];
      i = row[node.feature] <= node.threshold ? node.left : node.right;
    }
    return nodes_[i].p1;
  }

  const std::vector<Node>& nodes() const { return nodes_; }
  std::vector<Node>& mutable_nodes() { return nodes_; }

 private:
  std::vector<Node> nodes_;
};

class RandomForest {
 public:
  RandomForest(std::vector<DecisionTree> trees, std::vector<double> importances,
               bool no_splits, std::size_t n_features)
      : trees_(std::move(trees)),
        importances_(std::move(importances)),
        no_splits_(no_splits),
        n_features_(n_features) {}

  /// Mean leaf class-1 probability over all trees.
  double predict_score(std::span<const double> row) const {
    if (row.size() != n_features_) {
      throw DataError("predict: feature dimension mismatch");
    }
    double sum = 0.0;
    for (const auto& tree : trees_) sum += tree.predict_p1(row);
    return sum / static_cast<double>(trees_.size());
  }

  /// Score >= 0.5 predicts class 1 (the fixed tie rule).
  std::uint8_t predict_label(std::span<const double> row) const {
    return predict_score(row) >= 0.5 ? 1 : 0;
  }

  /// Mean decrease in Gini impurity per feature, averaged over trees and
  /// normalized to sum 1. All-zero (with no_splits set) when no tree found
  /// any split.
  const std::vector<double>& importances() const { return importances_; }
  bool no_splits() const { return no_splits_; }
  std::size_t n_features() const { return n_features_; }
  const std::vector<DecisionTree>& trees() const { return trees_; }

 private:
  std::vector<DecisionTree> trees_;
  std::vector<double> importances_;
  bool no_splits_ = false;
  std::size_t n_features_ = 0;
};

namespace detail {

inline double gini_binary(std::size_t ones, std::size_t total) {
  if (total == 0) return 0.0;
  const double p = static_cast<double>(ones) / static_cast<double>(total);
  return 2.0 * p * (1.0 - p);
}

struct TreeScratch {
  std::vector<std::size_t> indices;           // bootstrap row indices
  std::vector<std::pair<double, std::uint8_t>> column;  // (value, label)
  std::vector<unsigned> feature_pool;
};

/// Grows one CART tree on a bootstrap resample. Per node, max_features
/// features are drawn without replacement; thresholds are midpoints of
/// consecutive distinct sorted values; the best Gini decrease wins, ties
/// broken by lowest feature index then lowest threshold (candidates are
/// scanned in exactly that order, so the first strict improvement
/// implements the rule). Importance accumulates (n_node / n_root) * gain.
inline DecisionTree grow_tree(const Dataset& data, const ForestConfig& cfg,
                              unsigned max_features, Rng& rng,
                              std::vector<double>& importance,
                              TreeScratch& scratch) {
  const std::size_t n = data.size();
  auto& idx = scratch.indices;
  idx.resize(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = rng.index(n);

  DecisionTree tree;
  auto& nodes = tree.mutable_nodes();

  struct Pending {
    std::int32_t node;
    std::size_t begin, end;
    int depth;
  };
  std::vector<Pending> stack;
  nodes.emplace_back();
  stack.push_back({0, 0, n, 0});

  auto& pool = scratch.feature_pool;
  pool.resize(data.n_features);
  for (unsigned f = 0; f < data.n_features; ++f) pool[f] = f;

  std::vector<unsigned> sampled;
  while (!stack.empty()) {
    const Pending task = stack.back();
    stack.pop_back();
    const std::size_t size = task.end - task.begin;
    std::size_t ones = 0;
    for (std::size_t i = task.begin; i < task.end; ++i) {
      ones += data.labels[idx[i]];
    }
    DecisionTree::Node& node = nodes[task.node];
    node.p1 = static_cast<double>(ones) / static_cast<double>(size);
    const bool pure = ones == 0 || ones == size;
    const bool depth_capped = cfg.max_depth >= 0 && task.depth >= cfg.max_depth;
    if (pure || size < 2 * cfg.min_leaf || size < 2 || depth_capped) {
      continue;  // leaf
    }

    // Sample candidate features without replacement, then visit them in
    // ascending index order for the tie-break rule.
    sampled.clear();
    for (unsigned j = 0; j < max_features; ++j) {
      const std::size_t pick = j + rng.index(pool.size() - j);
      std::swap(pool[j], pool[pick]);
      sampled.push_back(pool[j]);
    }
    std::sort(sampled.begin(), sampled.end());

    const double parent_gini = gini_binary(ones, size);
    double best_gain = 0.0;
    int best_feature = -1;
    double best_threshold = 0.0;
    auto& column = scratch.column;
    for (unsigned f : sampled) {
      column.clear();
      for (std::size_t i = task.begin; i < task.end; ++i) {
        column.emplace_back(data.values[idx[i] * data.n_features + f],
                            data.labels[idx[i]]);
      }
      std::sort(column.begin(), column.end());
      std::size_t left_ones = 0;
      for (std::size_t i = 0; i + 1 < size; ++i) {
        left_ones += column[i].second;
        if (column[i].first == column[i + 1].first) continue;
        const std::size_t n_left = i + 1;
        const std::size_t n_right = size - n_left;
        if (n_left < cfg.min_leaf || n_right < cfg.min_leaf) continue;
        const double child_impurity =
            (static_cast<double>(n_left) * gini_binary(left_ones, n_left) +
             static_cast<double>(n_right) *
                 gini_binary(ones - left_ones, n_right)) /
            static_cast<double>(size);
        const double gain = parent_gini - child_impurity;
        if (gain > best_gain) {
          best_gain = gain;
          best_feature = static_cast<int>(f);
          double mid =
              column[i].first + (column[i + 1].first - column[i].first) / 2.0;
          // Keep the boundary strictly below the right value even if the
          // midpoint rounds onto it.
          if (mid >= column[i + 1].first) mid = column[i].first;
          best_threshold = mid;
        }
      }
    }
    if (best_feature < 0) continue;  // all sampled features constant

    const auto split_point = std::stable_partition(
        idx.begin() + task.begin, idx.begin() + task.end,
        [&](std::size_t row) {
          return data.values[row * data.n_features + best_feature] <=
                 best_threshold;
        });
    const std::size_t mid = static_cast<std::size_t>(
        split_point - idx.begin());

    importance[best_feature] +=
        static_cast<double>(size) / static_cast<double>(n) * best_gain;

    const std::int32_t left = static_cast<std::int32_t>(nodes.size());
    const std::int32_t right = left + 1;
    nodes.emplace_back();
    nodes.emplace_back();  // may reallocate; re-index the parent below
    DecisionTree::Node& parent = nodes[task.node];
    parent.feature = best_feature;
    parent.threshold = best_threshold;
    parent.left = left;
    parent.right = right;
    stack.push_back({right, mid, task.end, task.depth + 1});
    stack.push_back({left, task.begin, mid, task.depth + 1});
  }
  return tree;
}

}  // namespace detail

/// Trains a bagged CART forest with Gini impurity. Deterministic for a
/// given seed: each tree owns a stream derived from (seed, tree index), so
/// the result does not depend on worker scheduling.
inline RandomForest train_forest(const Dataset& data, const ForestConfig& cfg,
                                 unsigned workers = 1) {
  if (cfg.n_trees < 1) throw DataError("forest needs at least one tree");
  if (data.size() < 2) throw DataError("forest needs at least 2 rows");
  const std::size_t ones = data.class_count(1);
  if (ones == 0 || ones == data.size()) {
    throw DataError("forest training needs both classes");
  }
  if (cfg.max_features > data.n_features) {
    throw DataError("max_features exceeds feature count");
  }
  const unsigned max_features =
      cfg.max_features != 0
          ? cfg.max_features
          : static_cast<unsigned>(std::ceil(
                std::sqrt(static_cast<double>(data.n_features))));

  std::vector<DecisionTree> trees(cfg.n_trees);
  std::vector<std::vector<double>> tree_importances(
      cfg.n_trees, std::vector<double>(data.n_features, 0.0));
  parallel_for(cfg.n_trees, workers, [&](std::size_t t) {
    Rng rng(derive_seed(cfg.seed, seed_stream::kForest, t));
    detail::TreeScratch scratch;
    trees[t] = detail::grow_tree(data, cfg, max_features, rng,
                                 tree_importances[t], scratch);
  });

  std::vector<double> importances(data.n_features, 0.0);
  for (const auto& imp : tree_importances) {
    for (std::size_t f = 0; f < importances.size(); ++f) {
      importances[f] += imp[f];
    }
  }
  double total = 0.0;
  for (auto& v : importances) {
    v /= static_cast<double>(cfg.n_trees);
    total += v;
  }
  const bool no_splits = total == 0.0;
  if (!no_splits) {
    for (auto& v : importances) v /= total;
  }
  return RandomForest(std::move(trees), std::move(importances), no_splits,
                      data.n_features);
}

}  // namespace reidbench
