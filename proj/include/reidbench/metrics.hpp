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
#include <deque>
#include <optional>
#include <vector>

#include "reidbench/graph.hpp"
#include "reidbench/parallel.hpp"
#include "reidbench/rng.hpp"

namespace reidbench {

/// Fraction of all possible edges: 2E / (N(N-1)).
inline double density(const LabeledGraph& g) {
  const double n = static_cast<double>(g.node_count());
  if (g.node_count() < 2) throw DataError("density needs at least 2 nodes");
  return 2.0 * static_cast<double>(g.edge_count()) / (n * (n - 1.0));
}

/// Global clustering coefficient: 3 * triangles / connected triples.
/// Returns 0 when the graph has no connected triples.
inline double transitivity(const LabeledGraph& g) {
  std::uint64_t triples = 0;
  std::uint64_t closed = 0;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    const auto& nb = g.neighbors(u);
    const std::uint64_t d = nb.size();
    if (d < 2) continue;
    triples += d * (d - 1) / 2;
    for (std::size_t i = 0; i < nb.size(); ++i) {
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        if (g.has_edge(nb[i], nb[j])) ++closed;
      }
    }
  }
  if (triples == 0) return 0.0;
  // Each triangle closes three centered triples, so closed == 3 * triangles.
  return static_cast<double>(closed) / static_cast<double>(triples);
}

/// Pearson correlation of endpoint degrees over all edges, each edge
/// counted in both orientations. nullopt when endpoint-degree variance is
/// zero (e.g. any regular graph).
inline std::optional<double> degree_assortativity(const LabeledGraph& g) {
  if (g.edge_count() == 0) {
    throw DataError("assortativity needs at least one edge");
  }
  // Integer moments keep the oracle comparison exact.
  unsigned __int128 sum_x = 0, sum_xx = 0, sum_xy = 0;
  std::uint64_t m = 0;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    const std::uint64_t du = g.degree(u);
    for (NodeId v : g.neighbors(u)) {
      const std::uint64_t dv = g.degree(v);
      sum_x += du;
      sum_xx += du * du;
      sum_xy += du * dv;
      ++m;
    }
  }
  // Both orientations make the x and y marginals identical.
  const __int128 num = static_cast<__int128>(m) * static_cast<__int128>(sum_xy) -
                       static_cast<__int128>(sum_x) * static_cast<__int128>(sum_x);
  const __int128 den = static_cast<__int128>(m) * static_cast<__int128>(sum_xx) -
                       static_cast<__int128>(sum_x) * static_cast<__int128>(sum_x);
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

struct AplResult {
  double hops = 0.0;
  /// Fraction of examined ordered pairs that were unreachable; such pairs
  /// are excluded from the average.
  double disconnected_fraction = 0.0;
  bool exact = true;
  std::size_t sources_used = 0;
};

namespace detail {

/// BFS from `src`; accumulates distance sum and reached count (excluding
/// src itself). dist/queue are caller-owned scratch.
inline void bfs_accumulate(const LabeledGraph& g, NodeId src,
                           std::vector<std::uint32_t>& dist,
                           std::vector<NodeId>& queue,
                           std::uint64_t& dist_sum, std::uint64_t& reached) {
  dist.assign(g.node_count(), UINT32_MAX);
  queue.clear();
  dist[src] = 0;
  queue.push_back(src);
  std::size_t head = 0;
  dist_sum = 0;
  reached = 0;
  while (head < queue.size()) {
    const NodeId u = queue[head++];
    for (NodeId v : g.neighbors(u)) {
      if (dist[v] != UINT32_MAX) continue;
      dist[v] = dist[u] + 1;
      dist_sum += dist[v];
      ++reached;
      queue.push_back(v);
    }
  }
}

inline AplResult apl_from_sources(const LabeledGraph& g,
                                  const std::vector<NodeId>& sources,
                                  bool exact, unsigned workers) {
  const std::size_t n = g.node_count();
  std::vector<std::uint64_t> sums(sources.size());
  std::vector<std::uint64_t> reached(sources.size());
  parallel_for(sources.size(), workers, [&](std::size_t i) {
    std::vector<std::uint32_t> dist;
    std::vector<NodeId> queue;
    detail::bfs_accumulate(g, sources[i], dist, queue, sums[i], reached[i]);
  });
  std::uint64_t dist_sum = 0, pair_count = 0;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    dist_sum += sums[i];
    pair_count += reached[i];
  }
  const std::uint64_t examined =
      static_cast<std::uint64_t>(sources.size()) * (n - 1);
  AplResult r;
  r.exact = exact;
  r.sources_used = sources.size();
  r.disconnected_fraction =
      examined == 0
          ? 0.0
          : static_cast<double>(examined - pair_count) /
                static_cast<double>(examined);
  r.hops = pair_count == 0 ? 0.0
                           : static_cast<double>(dist_sum) /
                                 static_cast<double>(pair_count);
  return r;
}

}  // namespace detail

/// All-pairs BFS average over connected ordered pairs.
inline AplResult average_path_length_exact(const LabeledGraph& g,
                                           unsigned workers = 0) {
  if (g.node_count() == 0) throw DataError("empty graph");
  std::vector<NodeId> sources(g.node_count());
  for (NodeId u = 0; u < g.node_count(); ++u) sources[u] = u;
  return detail::apl_from_sources(g, sources, true, workers);
}

/// BFS from `sources` seeded-uniform distinct source nodes. With
/// sources == N this equals the exact average.
inline AplResult average_path_length_sampled(const LabeledGraph& g,
                                             std::size_t sources,
                                             std::uint64_t seed,
                                             unsigned workers = 0) {
  if (g.node_count() == 0) throw DataError("empty graph");
  if (sources > g.node_count()) {
    throw DataError("sampled APL: sources exceeds node count");
  }
  std::vector<NodeId> all(g.node_count());
  for (NodeId u = 0; u < g.node_count(); ++u) all[u] = u;
  Rng rng(derive_seed(seed, seed_stream::kApl));
  // Partial Fisher-Yates: first `sources` entries are a uniform sample
  // without replacement.
  for (std::size_t i = 0; i < sources; ++i) {
    std::swap(all[i], all[i + rng.index(all.size() - i)]);
  }
  all.resize(sources);
  AplResult r = detail::apl_from_sources(g, all, false, workers);
  r.exact = sources == g.node_count();
  return r;
}

/// Exact-distance-q neighborhood, q in {1, 2}; hop 2 excludes u and all
/// hop-1 neighbors. Returned sorted.
inline std::vector<NodeId> neighbors_at_hop(const LabeledGraph& g, NodeId u,
                                            int hop) {
  if (hop != 1 && hop != 2) throw DataError("hop must be 1 or 2");
  if (hop == 1) return g.neighbors(u);
  std::vector<NodeId> result;
  std::vector<bool> excluded(g.node_count(), false);
  excluded[u] = true;
  for (NodeId v : g.neighbors(u)) excluded[v] = true;
  for (NodeId v : g.neighbors(u)) {
    for (NodeId w : g.neighbors(v)) {
      if (!excluded[w]) {
        excluded[w] = true;
        result.push_back(w);
      }
    }
  }
  std::sort(result.begin(), result.end());
  return result;
}

struct GraphMetrics {
  double density = 0.0;
  double transitivity = 0.0;
  std::optional<double> assortativity;
  AplResult apl;
};

/// Convenience bundle of all four metrics. Graphs above
/// `exact_apl_node_limit` nodes fall back to sampled APL with 1000 sources
/// (exact all-pairs BFS is impractical there); exact mode stays available
/// through average_path_length_exact.
inline GraphMetrics compute_graph_metrics(const LabeledGraph& g,
                                          std::uint64_t seed = 0,
                                          unsigned workers = 0,
                                          std::size_t exact_apl_node_limit =
                                              5000) {
  GraphMetrics m;
  m.density = density(g);
  m.transitivity = transitivity(g);
  m.assortativity =
      g.edge_count() == 0 ? std::nullopt : degree_assortativity(g);
  if (g.node_count() > exact_apl_node_limit) {
    m.apl = average_path_length_sampled(
        g, std::min<std::size_t>(1000, g.node_count()), seed, workers);
  } else {
    m.apl = average_path_length_exact(g, workers);
  }
  return m;
}

}  // namespace reidbench
