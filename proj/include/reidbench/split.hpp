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

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "reidbench/graph.hpp"
#include "reidbench/rng.hpp"

namespace reidbench {

struct SplitConfig {
  /// Target Jaccard overlap of the two node sets, in (0, 1).
  double alpha = 0.2;
  std::uint64_t seed = 0;
  /// Recursion depth for recursive_split; depth 1 is a single split.
  int depth = 1;
};

/// Minimum node count for any graph produced by recursive_split. Below
/// this, downstream 5x2 CV folds degenerate.
inline constexpr std::size_t kMinLeafNodes = 50;

/// A sanitized/auxiliary graph pair with ground-truth identity mapping.
/// The overlap nodes exist in both graphs; identity_map pairs their dense
/// ids (sanitized first).
struct OverlapSplit {
  LabeledGraph san;
  LabeledGraph aux;
  /// Overlap node set in the parent graph's dense ids, sorted.
  std::vector<NodeId> overlap_parent_ids;
  /// (san dense id, aux dense id) per overlap node, sorted by san id.
  std::vector<std::pair<NodeId, NodeId>> identity_map;
  /// Lineage path for recursive splits ("", "0", "1", "01", ...).
  std::string lineage;
};

namespace detail {

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Deterministic BFS order from the highest-degree node: degree ties break
/// to the smaller dense id, and the queue order follows sorted adjacency.
inline std::vector<NodeId> bfs_hd_order(const LabeledGraph& g) {
  NodeId root = 0;
  for (NodeId u = 1; u < g.node_count(); ++u) {
    if (g.degree(u) > g.degree(root)) root = u;
  }
  std::vector<bool> visited(g.node_count(), false);
  std::vector<NodeId> order;
  order.reserve(g.node_count());
  visited[root] = true;
  order.push_back(root);
  std::size_t head = 0;
  while (head < order.size()) {
    const NodeId u = order[head++];
    for (NodeId v : g.neighbors(u)) {
      if (!visited[v]) {
        visited[v] = true;
        order.push_back(v);
      }
    }
  }
  return order;
}

}  // namespace detail

/// Splits `g` into overlapping sanitized/auxiliary subgraphs. The overlap
/// is the first k = round(alpha * N) nodes in BFS order from the
/// highest-degree node, so it is identical across runs and seeds; the seed
/// only shuffles the remaining nodes into the two exclusive parts. The two
/// node sets cover all of V, which makes Jaccard(V1, V2) = alpha exact up
/// to the rounding of k.
inline OverlapSplit bfs_hd_overlap_split(const LabeledGraph& g,
                                         const SplitConfig& config) {
  const std::size_t n = g.node_count();
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
    throw DataError("alpha must be in (0, 1)");
  }
  const std::size_t k = static_cast<std::size_t>(
      std::llround(config.alpha * static_cast<double>(n)));
  if (k < 1) throw DataError("alpha too small: overlap would be empty");
  const std::vector<NodeId> bfs = detail::bfs_hd_order(g);
  if (bfs.size() < k) {
    throw DataError(
        "BFS component from the highest-degree node is smaller than the "
        "overlap target (" +
        std::to_string(bfs.size()) + " < " + std::to_string(k) + ")");
  }
  std::vector<NodeId> overlap(bfs.begin(), bfs.begin() + k);
  std::vector<bool> in_overlap(n, false);
  for (NodeId u : overlap) in_overlap[u] = true;
  std::vector<NodeId> rest;
  rest.reserve(n - k);
  for (NodeId u = 0; u < n; ++u) {
    if (!in_overlap[u]) rest.push_back(u);
  }
  Rng rng(derive_seed(config.seed, seed_stream::kSplit));
  rng.shuffle(rest);
  const std::size_t half = rest.size() / 2;

  std::vector<NodeId> v1(overlap.begin(), overlap.end());
  v1.insert(v1.end(), rest.begin(), rest.begin() + half);
  std::vector<NodeId> v2(overlap.begin(), overlap.end());
  v2.insert(v2.end(), rest.begin() + half, rest.end());

  auto sub1 = g.induced_subgraph(std::move(v1));
  auto sub2 = g.induced_subgraph(std::move(v2));

  OverlapSplit split;
  split.san = std::move(sub1.graph);
  split.aux = std::move(sub2.graph);
  std::sort(overlap.begin(), overlap.end());
  split.overlap_parent_ids = std::move(overlap);

  std::vector<NodeId> parent_to_aux(n, kNoNode);
  for (std::size_t i = 0; i < sub2.to_parent.size(); ++i) {
    parent_to_aux[sub2.to_parent[i]] = static_cast<NodeId>(i);
  }
  for (std::size_t i = 0; i < sub1.to_parent.size(); ++i) {
    const NodeId parent = sub1.to_parent[i];
    if (in_overlap[parent]) {
      split.identity_map.emplace_back(static_cast<NodeId>(i),
                                      parent_to_aux[parent]);
    }
  }
  return split;
}

/// Applies bfs_hd_overlap_split `depth` times, re-splitting every leaf
/// with the same alpha. Returns the 2^(depth-1) splits of the final round,
/// each annotated with its lineage path. Fails if any produced leaf drops
/// below kMinLeafNodes.
inline std::vector<OverlapSplit> recursive_split(const LabeledGraph& g,
                                                 const SplitConfig& config) {
  if (config.depth < 1) throw DataError("depth must be >= 1");
  struct Item {
    LabeledGraph graph;
    std::string lineage;
  };
  std::vector<Item> level;
  level.push_back({g, ""});
  std::vector<OverlapSplit> result;
  for (int d = 0; d < config.depth; ++d) {
    const bool last = d + 1 == config.depth;
    std::vector<Item> next;
    result.clear();
    for (auto& item : level) {
      SplitConfig child_config = config;
      child_config.seed = derive_seed(config.seed, seed_stream::kSplit, d,
                                      detail::fnv1a(item.lineage));
      OverlapSplit split = bfs_hd_overlap_split(item.graph, child_config);
      if (split.san.node_count() < kMinLeafNodes ||
          split.aux.node_count() < kMinLeafNodes) {
        throw DataError("recursive split leaf below " +
                        std::to_string(kMinLeafNodes) + " nodes at depth " +
                        std::to_string(d + 1));
      }
      split.lineage = item.lineage;
      if (last) {
        result.push_back(std::move(split));
      } else {
        next.push_back({std::move(split.san), item.lineage + "0"});
        next.push_back({std::move(split.aux), item.lineage + "1"});
      }
    }
    level = std::move(next);
  }
  return result;
}

/// Recomputes the Jaccard coefficient of the two node sets from source
/// identifiers, independently of the stored overlap metadata.
inline double jaccard_overlap(const OverlapSplit& split) {
  std::unordered_set<std::string> v1;
  for (NodeId u = 0; u < split.san.node_count(); ++u) {
    v1.insert(split.san.source_id(u));
  }
  std::size_t intersection = 0;
  std::size_t union_size = v1.size();
  for (NodeId u = 0; u < split.aux.node_count(); ++u) {
    if (v1.count(split.aux.source_id(u))) {
      ++intersection;
    } else {
      ++union_size;
    }
  }
  if (union_size == 0) return 0.0;
  return static_cast<double>(intersection) / static_cast<double>(union_size);
}

/// Writes san.edges, aux.edges and identity_map.csv (`san_id,aux_id`,
/// subgraph dense ids) plus the two id-map CSVs, for external consumers.
inline void write_split(const OverlapSplit& split,
                        const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  split.san.write_edge_list(dir / "san.edges");
  split.aux.write_edge_list(dir / "aux.edges");
  split.san.write_id_map_csv(dir / "san_ids.csv");
  split.aux.write_id_map_csv(dir / "aux_ids.csv");
  std::ofstream out(dir / "identity_map.csv");
  if (!out) throw DataError("cannot open identity_map.csv");
  out << "san_id,aux_id\n";
  for (const auto& [s, a] : split.identity_map) {
    out << s << ',' << a << '\n';
  }
  if (split.san.is_labeled()) {
    split.san.write_attributes(dir / "san.attrs");
    split.aux.write_attributes(dir / "aux.attrs");
  }
}

}  // namespace reidbench
