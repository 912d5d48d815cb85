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
#include <fstream>
#include <vector>

#include "reidbench/graph.hpp"
#include "reidbench/parallel.hpp"
#include "reidbench/rng.hpp"

namespace reidbench {

/// Attraction-model parameters: p is the minority proportion (diversity),
/// tau the inbreeding coefficient (homophily strength).
struct LabelingParams {
  double p = 0.5;
  double tau = 0.0;
  std::uint64_t seed = 0;
  /// Swap-attempt budget; 0 means 200 * N.
  std::uint64_t max_iters = 0;
};

struct LabelingResult {
  std::vector<Attr> assignment;
  std::size_t achieved_cross_ties = 0;
  std::size_t target_delta = 0;
  /// Swap attempts drawn (accepted or not).
  std::uint64_t iterations = 0;
  bool converged = false;
  /// Cross-tie reduction of the last accepted swap; 0 if none was needed.
  /// achieved + final_swap_delta > target_delta whenever a swap closed the
  /// gap, which bounds how far below the target the walk can land.
  std::size_t final_swap_delta = 0;
};

/// Swap-based labeling ended short of its target cross-tie count. Not
/// every (p, tau) pair is achievable on a fixed topology.
class ConvergenceFailure : public std::runtime_error {
 public:
  ConvergenceFailure(const std::string& message, LabelingResult result)
      : std::runtime_error(message), result_(std::move(result)) {}
  const LabelingResult& result() const { return result_; }

 private:
  LabelingResult result_;
};

/// Expected number of cross-group edges under the attraction model:
/// round(2 E (1 - tau) p (1 - p)).
inline std::size_t target_cross_ties(std::size_t edge_count,
                                     const LabelingParams& params) {
  const double delta = 2.0 * static_cast<double>(edge_count) *
                       (1.0 - params.tau) * params.p * (1.0 - params.p);
  return static_cast<std::size_t>(std::llround(delta));
}

/// Number of edges whose endpoints carry different attribute values.
inline std::size_t cross_tie_count(const LabeledGraph& g,
                                   const std::vector<Attr>& assignment) {
  if (assignment.size() != g.node_count()) {
    throw DataError("assignment does not cover every node");
  }
  std::size_t cross = 0;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    for (NodeId v : g.neighbors(u)) {
      if (u < v && assignment[u] != assignment[v]) ++cross;
    }
  }
  return cross;
}

/// Places round(p*N) minority labels at random, then repeatedly draws one
/// R node and one B node and swaps their labels when that strictly
/// decreases the cross-tie count, until the count reaches the target delta
/// or the budget runs out. Label counts and the topology never change;
/// non-convergence is reported in the result, not thrown.
inline LabelingResult assign_labels(const LabeledGraph& g,
                                    const LabelingParams& params) {
  const std::size_t n = g.node_count();
  if (n == 0) throw DataError("empty graph");
  if (!(params.p > 0.0 && params.p < 1.0)) {
    throw DataError("p must be in (0, 1)");
  }
  if (!(params.tau >= 0.0 && params.tau <= 1.0)) {
    throw DataError("tau must be in [0, 1]");
  }
  // p is canonically the minority proportion; fold p > 0.5 onto 1 - p
  // (delta is symmetric in p and 1 - p).
  const double p = std::min(params.p, 1.0 - params.p);
  const std::size_t minority = static_cast<std::size_t>(
      std::llround(p * static_cast<double>(n)));

  LabelingResult result;
  result.target_delta =
      target_cross_ties(g.edge_count(), {p, params.tau, 0, 0});

  Rng rng(derive_seed(params.seed, seed_stream::kLabeling));
  std::vector<NodeId> nodes(n);
  for (NodeId u = 0; u < n; ++u) nodes[u] = u;
  rng.shuffle(nodes);
  std::vector<Attr> label(n, Attr::B);
  std::vector<NodeId> r_nodes(nodes.begin(), nodes.begin() + minority);
  std::vector<NodeId> b_nodes(nodes.begin() + minority, nodes.end());
  for (NodeId u : r_nodes) label[u] = Attr::R;

  std::size_t cross = cross_tie_count(g, label);
  const std::uint64_t budget =
      params.max_iters == 0 ? 200 * static_cast<std::uint64_t>(n)
                            : params.max_iters;

  // Degree-local swap evaluation; the full recount above is only paid once.
  auto swap_delta = [&](NodeId u, NodeId v) {
    // u flips R->B, v flips B->R; the (u, v) edge, if any, stays cross.
    std::int64_t delta = 0;
    for (NodeId w : g.neighbors(u)) {
      if (w == v) continue;
      delta += label[w] == Attr::R ? 1 : -1;
    }
    for (NodeId w : g.neighbors(v)) {
      if (w == u) continue;
      delta += label[w] == Attr::B ? 1 : -1;
    }
    return delta;
  };

  while (cross > result.target_delta && result.iterations < budget &&
         !r_nodes.empty() && !b_nodes.empty()) {
    ++result.iterations;
    const std::size_t ri = rng.index(r_nodes.size());
    const std::size_t bi = rng.index(b_nodes.size());
    const NodeId u = r_nodes[ri];
    const NodeId v = b_nodes[bi];
    const std::int64_t delta = swap_delta(u, v);
    if (delta < 0) {
      label[u] = Attr::B;
      label[v] = Attr::R;
      r_nodes[ri] = v;
      b_nodes[bi] = u;
      cross = static_cast<std::size_t>(static_cast<std::int64_t>(cross) +
                                       delta);
      result.final_swap_delta = static_cast<std::size_t>(-delta);
    }
  }

  result.assignment = std::move(label);
  result.achieved_cross_ties = cross;
  result.converged = cross <= result.target_delta;
  return result;
}

struct ParamEstimate {
  double p_hat = 0.0;
  double tau_hat = 0.0;
  /// Set when the raw tau estimate fell outside [0, 1] (heterophily or
  /// sampling noise) and was clamped.
  bool clamped = false;
};

/// Estimates (p, tau) from a labeled graph: p is the minority fraction and
/// tau = 1 - cross_fraction / (2 p (1 - p)).
inline ParamEstimate estimate_params(const LabeledGraph& g) {
  const auto counts = g.attribute_counts();
  const std::size_t n = g.node_count();
  if (counts[0] == 0 || counts[1] == 0) {
    throw DataError("estimate_params: graph carries a single label");
  }
  if (g.edge_count() == 0) {
    throw DataError("estimate_params: graph has no edges");
  }
  ParamEstimate est;
  est.p_hat = static_cast<double>(std::min(counts[0], counts[1])) /
              static_cast<double>(n);
  const double cross_fraction =
      static_cast<double>(cross_tie_count(g, g.attributes())) /
      static_cast<double>(g.edge_count());
  const double raw =
      1.0 - cross_fraction / (2.0 * est.p_hat * (1.0 - est.p_hat));
  est.tau_hat = std::clamp(raw, 0.0, 1.0);
  est.clamped = raw != est.tau_hat;
  return est;
}

struct FeasibilityCell {
  double p = 0.0;
  double tau = 0.0;
  bool converged = false;
  double achieved_fraction = 0.0;
  std::uint64_t iterations = 0;
};

/// Runs assign_labels over a (p, tau) grid with per-cell derived seeds.
/// Cells run concurrently.
inline std::vector<FeasibilityCell> feasibility_grid(
    const LabeledGraph& g, const std::vector<double>& p_values,
    const std::vector<double>& tau_values, std::uint64_t seed,
    std::uint64_t max_iters = 0, unsigned workers = 0) {
  if (p_values.empty() || tau_values.empty()) {
    throw DataError("feasibility grid needs nonempty parameter lists");
  }
  const std::size_t cells = p_values.size() * tau_values.size();
  std::vector<FeasibilityCell> grid(cells);
  parallel_for(cells, workers, [&](std::size_t idx) {
    const std::size_t i = idx / tau_values.size();
    const std::size_t j = idx % tau_values.size();
    LabelingParams params;
    params.p = p_values[i];
    params.tau = tau_values[j];
    params.seed = derive_seed(seed, seed_stream::kCell, i, j);
    params.max_iters = max_iters;
    const LabelingResult r = assign_labels(g, params);
    FeasibilityCell& cell = grid[idx];
    cell.p = params.p;
    cell.tau = params.tau;
    cell.converged = r.converged;
    cell.achieved_fraction =
        g.edge_count() == 0
            ? 0.0
            : static_cast<double>(r.achieved_cross_ties) /
                  static_cast<double>(g.edge_count());
    cell.iterations = r.iterations;
  });
  return grid;
}

/// CSV export: `p,tau,converged,achieved_fraction,iterations`.
inline void write_feasibility_grid(const std::vector<FeasibilityCell>& grid,
                                   const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open " + path.string());
  out << "p,tau,converged,achieved_fraction,iterations\n";
  for (const auto& cell : grid) {
    out << cell.p << ',' << cell.tau << ',' << (cell.converged ? 1 : 0) << ','
        << cell.achieved_fraction << ',' << cell.iterations << '\n';
  }
}

}  // namespace reidbench
