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
#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "reidbench/errors.hpp"

namespace reidbench {

/// Dense node index in [0, N). The mapping back to the input file's node
/// identifiers is kept on the graph and is bijective.
using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

/// The binary node attribute. R is the canonical minority value; attribute
/// files are canonicalized on load so the minority symbol maps to R.
enum class Attr : std::uint8_t { R = 0, B = 1 };

struct EdgeListStats {
  std::size_t duplicate_edges = 0;
  std::size_t self_loops = 0;
};

struct InducedSubgraph;

/// Undirected simple graph with an optional binary attribute per node.
/// Immutable after construction: labeling or subgraph extraction returns a
/// new graph, so metric and signature passes can share one instance freely
/// across threads.
class LabeledGraph {
 public:
  LabeledGraph() = default;

  /// Builds a graph over nodes 0..node_count-1. Rejects self-loops and
  /// duplicate edges; file loading goes through load_edge_list, which
  /// drops them with counts instead.
  static LabeledGraph from_edges(
      std::size_t node_count,
      const std::vector<std::pair<NodeId, NodeId>>& edges) {
    LabeledGraph g;
    g.adj_.assign(node_count, {});
    g.source_ids_.reserve(node_count);
    for (std::size_t i = 0; i < node_count; ++i) {
      g.source_ids_.push_back(std::to_string(i));
    }
    for (const auto& [u, v] : edges) {
      if (u >= node_count || v >= node_count) {
        throw DataError("edge endpoint out of range");
      }
      if (u == v) throw DataError("self-loop in edge set");
      g.adj_[u].push_back(v);
      g.adj_[v].push_back(u);
    }
    g.finalize_adjacency();
    g.rebuild_source_index();
    return g;
  }

  std::size_t node_count() const { return adj_.size(); }
  std::size_t edge_count() const { return edges_; }

  const std::vector<NodeId>& neighbors(NodeId u) const {
    check_node(u);
    return adj_[u];
  }

  std::size_t degree(NodeId u) const {
    check_node(u);
    return adj_[u].size();
  }

  bool has_edge(NodeId u, NodeId v) const {
    check_node(u);
    check_node(v);
    return std::binary_search(adj_[u].begin(), adj_[u].end(), v);
  }

  bool is_labeled() const { return !attrs_.empty(); }

  Attr attribute(NodeId u) const {
    check_node(u);
    if (!is_labeled()) throw DataError("graph has no attributes");
    return attrs_[u];
  }

  const std::vector<Attr>& attributes() const {
    if (!is_labeled()) throw DataError("graph has no attributes");
    return attrs_;
  }

  /// Node counts per attribute value, indexed by Attr.
  std::array<std::size_t, 2> attribute_counts() const {
    std::array<std::size_t, 2> counts{0, 0};
    for (Attr a : attributes()) counts[static_cast<std::size_t>(a)]++;
    return counts;
  }

  const std::string& source_id(NodeId u) const {
    check_node(u);
    return source_ids_[u];
  }

  /// Dense id for an input-file identifier, or kNoNode if unknown.
  NodeId dense_id(const std::string& source) const {
    auto it = source_to_dense_.find(source);
    return it == source_to_dense_.end() ? kNoNode : it->second;
  }

  /// Input-file symbol rendered for an attribute value (defaults "R"/"B").
  const std::string& attr_symbol(Attr a) const {
    return attr_symbols_[static_cast<std::size_t>(a)];
  }

  /// Copy of this graph with the given total attribute assignment.
  LabeledGraph with_attributes(std::vector<Attr> attrs,
                               std::string r_symbol = "R",
                               std::string b_symbol = "B") const {
    if (attrs.size() != node_count()) {
      throw DataError("attribute assignment does not cover every node");
    }
    LabeledGraph g = *this;
    g.attrs_ = std::move(attrs);
    g.attr_symbols_ = {std::move(r_symbol), std::move(b_symbol)};
    return g;
  }

  /// Subgraph induced by `nodes` (parent dense ids; deduplicated and
  /// sorted, so new ids follow parent id order). Attributes and source
  /// identifiers carry over.
  InducedSubgraph induced_subgraph(std::vector<NodeId> nodes) const;

  /// Writes the dense-id mapping as CSV: `source_id,dense_id`.
  void write_id_map_csv(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open " + path.string());
    out << "source_id,dense_id\n";
    for (std::size_t i = 0; i < source_ids_.size(); ++i) {
      out << source_ids_[i] << ',' << i << '\n';
    }
  }

  /// Writes the edge list in dense ids, one `u v` pair per line.
  void write_edge_list(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open " + path.string());
    for (NodeId u = 0; u < adj_.size(); ++u) {
      for (NodeId v : adj_[u]) {
        if (u < v) out << u << ' ' << v << '\n';
      }
    }
  }

  /// Writes attributes as `node value` lines using the original symbols.
  /// With use_source_ids the node column carries the input file's tokens,
  /// so the file pairs with the original edge list; otherwise it carries
  /// dense ids, pairing with write_edge_list output.
  void write_attributes(const std::filesystem::path& path,
                        bool use_source_ids = false) const {
    if (!is_labeled()) throw DataError("graph has no attributes");
    std::ofstream out(path);
    if (!out) throw DataError("cannot open " + path.string());
    for (NodeId u = 0; u < adj_.size(); ++u) {
      if (use_source_ids) {
        out << source_ids_[u];
      } else {
        out << u;
      }
      out << ' ' << attr_symbol(attrs_[u]) << '\n';
    }
  }

  // Loader-only hooks; see load_edge_list / load_attributes below.
  struct LoaderAccess;

 private:
  friend struct LoaderAccess;

  void check_node(NodeId u) const {
    if (u >= adj_.size()) {
      throw DataError("unknown node id " + std::to_string(u));
    }
  }

  // Sorts adjacency, rejects inconsistencies, and sets the edge count.
  // Symmetry holds by construction (both directions inserted together);
  // this re-checks it after every build.
  void finalize_adjacency() {
    std::size_t degree_sum = 0;
    for (auto& list : adj_) {
      std::sort(list.begin(), list.end());
      if (std::adjacent_find(list.begin(), list.end()) != list.end()) {
        throw DataError("duplicate edge in edge set");
      }
      degree_sum += list.size();
    }
    for (NodeId u = 0; u < adj_.size(); ++u) {
      for (NodeId v : adj_[u]) {
        if (!std::binary_search(adj_[v].begin(), adj_[v].end(), u)) {
          throw DataError("asymmetric adjacency");
        }
      }
    }
    edges_ = degree_sum / 2;
  }

  void rebuild_source_index() {
    source_to_dense_.clear();
    source_to_dense_.reserve(source_ids_.size());
    for (std::size_t i = 0; i < source_ids_.size(); ++i) {
      source_to_dense_.emplace(source_ids_[i], static_cast<NodeId>(i));
    }
  }

  std::vector<std::vector<NodeId>> adj_;
  std::vector<Attr> attrs_;  // empty until labeled
  std::vector<std::string> source_ids_;
  std::unordered_map<std::string, NodeId> source_to_dense_;
  std::array<std::string, 2> attr_symbols_{"R", "B"};
  std::size_t edges_ = 0;
};

struct InducedSubgraph {
  LabeledGraph graph;
  std::vector<NodeId> to_parent;  // new dense id -> parent dense id
};

inline InducedSubgraph LabeledGraph::induced_subgraph(
    std::vector<NodeId> nodes) const {
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  std::vector<NodeId> parent_to_new(node_count(), kNoNode);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    check_node(nodes[i]);
    parent_to_new[nodes[i]] = static_cast<NodeId>(i);
  }
  InducedSubgraph out;
  out.to_parent = nodes;
  LabeledGraph& g = out.graph;
  g.adj_.assign(nodes.size(), {});
  g.source_ids_.reserve(nodes.size());
  if (is_labeled()) g.attrs_.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const NodeId p = nodes[i];
    g.source_ids_.push_back(source_ids_[p]);
    if (is_labeled()) g.attrs_.push_back(attrs_[p]);
    for (NodeId w : adj_[p]) {
      const NodeId nw = parent_to_new[w];
      if (nw != kNoNode) g.adj_[i].push_back(nw);
    }
  }
  g.attr_symbols_ = attr_symbols_;
  g.finalize_adjacency();
  g.rebuild_source_index();
  return out;
}

struct LoadedGraph {
  LabeledGraph graph;
  EdgeListStats stats;
};

struct LabeledGraph::LoaderAccess {
  static LoadedGraph build_from_raw(
      std::vector<std::string> source_ids,
      std::vector<std::pair<NodeId, NodeId>>& raw_edges) {
    LoadedGraph out;
    LabeledGraph& g = out.graph;
    g.adj_.assign(source_ids.size(), {});
    g.source_ids_ = std::move(source_ids);
    // Normalize: drop self-loops, then duplicates, with counts.
    std::vector<std::pair<NodeId, NodeId>> edges;
    edges.reserve(raw_edges.size());
    for (auto [u, v] : raw_edges) {
      if (u == v) {
        out.stats.self_loops++;
        continue;
      }
      edges.emplace_back(std::min(u, v), std::max(u, v));
    }
    std::sort(edges.begin(), edges.end());
    auto last = std::unique(edges.begin(), edges.end());
    out.stats.duplicate_edges =
        static_cast<std::size_t>(std::distance(last, edges.end()));
    edges.erase(last, edges.end());
    for (const auto& [u, v] : edges) {
      g.adj_[u].push_back(v);
      g.adj_[v].push_back(u);
    }
    g.finalize_adjacency();
    g.rebuild_source_index();
    return out;
  }

  static LabeledGraph attach_attributes(const LabeledGraph& base,
                                        std::vector<Attr> attrs,
                                        std::string r_symbol,
                                        std::string b_symbol) {
    return base.with_attributes(std::move(attrs), std::move(r_symbol),
                                std::move(b_symbol));
  }
};

namespace detail {

inline bool split_two_tokens(const std::string& line, std::string& a,
                             std::string& b) {
  std::istringstream in(line);
  std::string extra;
  if (!(in >> a >> b)) return false;
  if (in >> extra) return false;
  return true;
}

inline bool is_blank_or_comment(const std::string& line) {
  const auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == '#';
}

}  // namespace detail

/// Loads a UTF-8 edge list: one edge per line, two whitespace-separated
/// tokens, `#` comment lines ignored. Node identifiers are mapped to dense
/// ids in first-appearance order; self-loops and duplicate edges are
/// dropped and counted in the returned stats.
inline LoadedGraph load_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::vector<std::string> source_ids;
  std::unordered_map<std::string, NodeId> index;
  std::vector<std::pair<NodeId, NodeId>> raw;
  auto intern = [&](const std::string& token) {
    auto [it, inserted] =
        index.emplace(token, static_cast<NodeId>(source_ids.size()));
    if (inserted) source_ids.push_back(token);
    return it->second;
  };
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::is_blank_or_comment(line)) continue;
    std::string a, b;
    if (!detail::split_two_tokens(line, a, b)) {
      throw DataError(path.string() + ":" + std::to_string(lineno) +
                      ": expected two whitespace-separated tokens");
    }
    const NodeId ua = intern(a);
    const NodeId ub = intern(b);
    raw.emplace_back(ua, ub);
  }
  if (source_ids.empty()) {
    throw DataError(path.string() + ": empty graph");
  }
  return LabeledGraph::LoaderAccess::build_from_raw(std::move(source_ids),
                                                    raw);
}

/// Loads `node value` attribute lines for every node of `graph`. Exactly
/// two distinct value symbols must appear; the minority symbol is
/// canonicalized to R (ties break to the lexicographically smaller symbol).
inline LabeledGraph load_attributes(const LabeledGraph& graph,
                                    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  const std::size_t n = graph.node_count();
  std::vector<std::string> raw_values(n);
  std::vector<bool> seen(n, false);
  std::vector<std::string> symbols;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::is_blank_or_comment(line)) continue;
    std::string node, value;
    if (!detail::split_two_tokens(line, node, value)) {
      throw DataError(path.string() + ":" + std::to_string(lineno) +
                      ": expected `node value`");
    }
    const NodeId u = graph.dense_id(node);
    if (u == kNoNode) {
      throw DataError(path.string() + ":" + std::to_string(lineno) +
                      ": unknown node id `" + node + "`");
    }
    if (seen[u] && raw_values[u] != value) {
      throw DataError(path.string() + ":" + std::to_string(lineno) +
                      ": conflicting attribute for node `" + node + "`");
    }
    seen[u] = true;
    raw_values[u] = value;
    if (std::find(symbols.begin(), symbols.end(), value) == symbols.end()) {
      symbols.push_back(value);
      if (symbols.size() > 2) {
        throw DataError(path.string() + ": not binary: more than two " +
                        "distinct attribute values");
      }
    }
  }
  for (NodeId u = 0; u < n; ++u) {
    if (!seen[u]) {
      throw DataError(path.string() + ": node `" + graph.source_id(u) +
                      "` missing an attribute");
    }
  }
  if (symbols.size() != 2) {
    throw DataError(path.string() + ": not binary: expected exactly two " +
                    "distinct attribute values");
  }
  std::array<std::size_t, 2> counts{0, 0};
  for (const auto& v : raw_values) counts[v == symbols[1] ? 1 : 0]++;
  // Minority symbol becomes R; tie breaks to the smaller symbol.
  std::string r_sym, b_sym;
  if (counts[0] < counts[1] ||
      (counts[0] == counts[1] && symbols[0] < symbols[1])) {
    r_sym = symbols[0];
    b_sym = symbols[1];
  } else {
    r_sym = symbols[1];
    b_sym = symbols[0];
  }
  std::vector<Attr> attrs(n);
  for (NodeId u = 0; u < n; ++u) {
    attrs[u] = raw_values[u] == r_sym ? Attr::R : Attr::B;
  }
  return LabeledGraph::LoaderAccess::attach_attributes(graph, std::move(attrs),
                                                       r_sym, b_sym);
}

}  // namespace reidbench
