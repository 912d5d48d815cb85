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
#include <string>
#include <vector>

#include "reidbench/graph.hpp"
#include "reidbench/metrics.hpp"
#include "reidbench/parallel.hpp"

namespace reidbench {

/// Binning layout for neighborhood degree distributions. Bin j holds
/// degrees k with j*b <= k < (j+1)*b; everything from (bins_per_hop-1)*b
/// up lands in the last (overflow) bin, so the default 21 bins of size 50
/// resolve degrees below 1050.
struct SignatureConfig {
  unsigned bin_size = 50;
  unsigned bins_per_hop = 21;
};

enum class FeatureMode { GS, GS_LBL };

/// Per-node feature block: degree histograms of the exact 1-hop and 2-hop
/// neighborhoods, attribute counts of the same neighborhoods, and the
/// node's own attribute (R -> 0, B -> 1). Degrees are measured in the
/// graph the node lives in — an attacker only sees the released graphs.
struct NodeSignature {
  std::vector<std::uint32_t> ndd1;
  std::vector<std::uint32_t> ndd2;
  std::array<std::uint32_t, 2> nad1{0, 0};
  std::array<std::uint32_t, 2> nad2{0, 0};
  std::uint8_t own_attr = 0;
};

inline unsigned degree_bin(std::size_t degree, const SignatureConfig& cfg) {
  const std::size_t bin = degree / cfg.bin_size;
  return static_cast<unsigned>(
      std::min<std::size_t>(bin, cfg.bins_per_hop - 1));
}

/// Binned degree histogram of u's exact hop-q neighborhood.
inline std::vector<std::uint32_t> compute_ndd(const LabeledGraph& g, NodeId u,
                                              int hop,
                                              const SignatureConfig& cfg) {
  if (cfg.bin_size < 1 || cfg.bins_per_hop < 1) {
    throw DataError("invalid signature config");
  }
  std::vector<std::uint32_t> bins(cfg.bins_per_hop, 0);
  for (NodeId v : neighbors_at_hop(g, u, hop)) {
    bins[degree_bin(g.degree(v), cfg)]++;
  }
  return bins;
}

/// Attribute counts of u's exact hop-q neighborhood, indexed by Attr.
inline std::array<std::uint32_t, 2> compute_nad(const LabeledGraph& g,
                                                NodeId u, int hop) {
  if (!g.is_labeled()) throw DataError("NAD requires a labeled graph");
  std::array<std::uint32_t, 2> counts{0, 0};
  for (NodeId v : neighbors_at_hop(g, u, hop)) {
    counts[static_cast<std::size_t>(g.attribute(v))]++;
  }
  return counts;
}

/// Full signature for one node; the two hop sets are walked once. NAD and
/// own_attr stay zero on unlabeled graphs (GS-only use).
inline NodeSignature compute_node_signature(const LabeledGraph& g, NodeId u,
                                            const SignatureConfig& cfg) {
  if (cfg.bin_size < 1 || cfg.bins_per_hop < 1) {
    throw DataError("invalid signature config");
  }
  NodeSignature sig;
  sig.ndd1.assign(cfg.bins_per_hop, 0);
  sig.ndd2.assign(cfg.bins_per_hop, 0);
  const bool labeled = g.is_labeled();
  for (int hop : {1, 2}) {
    auto& ndd = hop == 1 ? sig.ndd1 : sig.ndd2;
    auto& nad = hop == 1 ? sig.nad1 : sig.nad2;
    for (NodeId v : neighbors_at_hop(g, u, hop)) {
      ndd[degree_bin(g.degree(v), cfg)]++;
      if (labeled) nad[static_cast<std::size_t>(g.attribute(v))]++;
    }
  }
  if (labeled) {
    sig.own_attr = static_cast<std::uint8_t>(g.attribute(u));
  }
  return sig;
}

/// Signatures for every node; embarrassingly parallel.
inline std::vector<NodeSignature> compute_all_signatures(
    const LabeledGraph& g, const SignatureConfig& cfg, unsigned workers = 0) {
  std::vector<NodeSignature> sigs(g.node_count());
  parallel_for(g.node_count(), workers, [&](std::size_t u) {
    sigs[u] = compute_node_signature(g, static_cast<NodeId>(u), cfg);
  });
  return sigs;
}

inline std::size_t features_per_node(const SignatureConfig& cfg,
                                     FeatureMode mode) {
  const std::size_t ndd = 2 * cfg.bins_per_hop;
  return mode == FeatureMode::GS ? ndd : ndd + 4 + 1;
}

inline std::size_t pair_feature_count(const SignatureConfig& cfg,
                                      FeatureMode mode) {
  return 2 * features_per_node(cfg, mode);
}

/// Canonical feature names: node-major, NDD before NAD before the own
/// attribute, hop-minor, bin-minor. Bins are 1-indexed in names, so
/// N1-H2-B1 is the first bin of node 1's 2-hop degree histogram.
inline std::vector<std::string> feature_names(const SignatureConfig& cfg,
                                              FeatureMode mode) {
  std::vector<std::string> names;
  names.reserve(pair_feature_count(cfg, mode));
  for (int node = 1; node <= 2; ++node) {
    const std::string prefix = "N" + std::to_string(node);
    for (int hop = 1; hop <= 2; ++hop) {
      for (unsigned b = 1; b <= cfg.bins_per_hop; ++b) {
        names.push_back(prefix + "-H" + std::to_string(hop) + "-B" +
                        std::to_string(b));
      }
    }
    if (mode == FeatureMode::GS_LBL) {
      for (int hop = 1; hop <= 2; ++hop) {
        names.push_back(prefix + "-H" + std::to_string(hop) + "-R");
        names.push_back(prefix + "-H" + std::to_string(hop) + "-B");
      }
      names.push_back(prefix + "-ATTR");
    }
  }
  return names;
}

namespace detail {

inline void append_node_block(const NodeSignature& sig, FeatureMode mode,
                              std::vector<double>& out) {
  for (auto v : sig.ndd1) out.push_back(static_cast<double>(v));
  for (auto v : sig.ndd2) out.push_back(static_cast<double>(v));
  if (mode == FeatureMode::GS_LBL) {
    out.push_back(static_cast<double>(sig.nad1[0]));
    out.push_back(static_cast<double>(sig.nad1[1]));
    out.push_back(static_cast<double>(sig.nad2[0]));
    out.push_back(static_cast<double>(sig.nad2[1]));
    out.push_back(static_cast<double>(sig.own_attr));
  }
}

}  // namespace detail

/// Concatenated pair feature vector; slot 1 is always the sanitized-graph
/// node. Both signatures must come from the same config.
inline std::vector<double> pair_features(const NodeSignature& sig_san,
                                         const NodeSignature& sig_aux,
                                         FeatureMode mode) {
  if (sig_san.ndd1.size() != sig_aux.ndd1.size() ||
      sig_san.ndd2.size() != sig_aux.ndd2.size()) {
    throw DataError("pair_features: signature configs differ");
  }
  std::vector<double> values;
  values.reserve(2 * (sig_san.ndd1.size() + sig_san.ndd2.size() + 5));
  detail::append_node_block(sig_san, mode, values);
  detail::append_node_block(sig_aux, mode, values);
  return values;
}

}  // namespace reidbench
