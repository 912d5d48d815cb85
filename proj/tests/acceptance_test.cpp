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

// Acceptance suite: nine end-to-end criteria, one PASS/FAIL line each.
// Headline-scale experiments are replaced by desk-scale constructions;
// every tolerance is pinned here in code.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <gtest/gtest.h>

#include "reidbench/cross_validation.hpp"
#include "reidbench/labeling.hpp"
#include "reidbench/metrics.hpp"
#include "reidbench/pipeline.hpp"
#include "reidbench/signature.hpp"
#include "reidbench/smote.hpp"
#include "reidbench/stats.hpp"
#include "testutil.hpp"

namespace reidbench {
namespace {

namespace fs = std::filesystem;

void conclude(int criterion, const std::string& detail) {
  const bool ok = !::testing::Test::HasFailure();
  std::cout << "[CRITERION " << criterion << "] " << (ok ? "PASS" : "FAIL")
            << ": " << detail << std::endl;
}

// ---------------------------------------------------------------------
// 1. Attraction-model consistency: the target cross-tie share at
// (|E|=16718, p=0.48, tau=0.84) reproduces the 8% share, and parameter
// estimation inverts a labeling with exactly that share.
TEST(Acceptance, C1AttractionModelConsistency) {
  const std::size_t delta = target_cross_ties(16718, {.p = 0.48, .tau = 0.84});
  const double share = static_cast<double>(delta) / 16718.0;
  EXPECT_NEAR(share, 0.0799, 0.001);

  // 100 nodes, 48 of them R; 100 edges of which exactly 8 cross.
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId u = 0; u < 44; ++u) edges.emplace_back(u, u + 1);    // R-R
  for (NodeId u = 48; u < 96; ++u) edges.emplace_back(u, u + 1);   // B-B
  const std::pair<NodeId, NodeId> cross[] = {{45, 97}, {46, 98}, {47, 99},
                                             {45, 98}, {46, 99}, {47, 97},
                                             {44, 96}, {43, 95}};
  for (const auto& e : cross) edges.push_back(e);
  std::vector<Attr> attrs(100, Attr::B);
  for (NodeId u = 0; u < 48; ++u) attrs[u] = Attr::R;
  const auto g =
      LabeledGraph::from_edges(100, edges).with_attributes(attrs);
  ASSERT_EQ(g.edge_count(), 100u);
  ASSERT_EQ(cross_tie_count(g, g.attributes()), 8u);
  const auto est = estimate_params(g);
  EXPECT_NEAR(est.p_hat, 0.48, 1e-12);
  EXPECT_NEAR(est.tau_hat, 0.84, 0.01);
  conclude(1, "target share " + std::to_string(share) + ", tau_hat " +
                  std::to_string(est.tau_hat));
}

// ---------------------------------------------------------------------
// 2. Labeler exactness on 20 seeded random graphs over the (p, tau) grid:
// every converged cell sits at or under its target, within the final
// swap's improvement of it, verified by a full recount; the minority count
// is exact everywhere, converged or not.
TEST(Acceptance, C2LabelerExactness) {
  const std::vector<double> ps = {0.1, 0.3, 0.5};
  const std::vector<double> taus = {0.0, 0.25, 0.5, 0.75};
  std::size_t converged_cells = 0, total_cells = 0, low_tau_cells = 0,
              low_tau_converged = 0;
  for (std::uint64_t i = 0; i < 20; ++i) {
    const std::size_t n = 200 + i * 15;  // up to 485
    const auto g = testutil::community_graph(n, 4, 0.12, n / 4, 900 + i);
    for (double p : ps) {
      for (double tau : taus) {
        ++total_cells;
        const auto r =
            assign_labels(g, {.p = p, .tau = tau, .seed = 31 * i + 7});
        std::size_t minority = 0;
        for (Attr a : r.assignment) minority += a == Attr::R;
        EXPECT_EQ(minority, static_cast<std::size_t>(std::llround(
                                p * static_cast<double>(n))));
        const std::size_t recount = testutil::oracle_cross_ties(
            g, r.assignment);
        EXPECT_EQ(recount, r.achieved_cross_ties);
        if (tau <= 0.25) {
          ++low_tau_cells;
          low_tau_converged += r.converged;
        }
        if (!r.converged) continue;
        ++converged_cells;
        EXPECT_LE(r.achieved_cross_ties, r.target_delta);
        if (r.final_swap_delta > 0) {
          EXPECT_GT(r.achieved_cross_ties + r.final_swap_delta,
                    r.target_delta);
        }
      }
    }
  }
  // The grid must not be vacuously feasible: every low-tau cell converges.
  EXPECT_EQ(low_tau_converged, low_tau_cells);
  EXPECT_GE(converged_cells, total_cells * 3 / 4);
  conclude(2, std::to_string(converged_cells) + "/" +
                  std::to_string(total_cells) +
                  " cells feasible, all verified by recount oracle");
}

// ---------------------------------------------------------------------
// 3. Metric oracle equivalence on 50 random graphs (n <= 200) at 1e-9;
// the polblogs reference values are checked when the dataset is present.
TEST(Acceptance, C3MetricOracleEquivalence) {
  for (std::uint64_t i = 0; i < 50; ++i) {
    const std::size_t n = 20 + (i * 19) % 181;  // 20..200
    const auto g = testutil::random_graph(n, 2 * n + i * 3, 4000 + i);
    if (g.edge_count() == 0) continue;
    const double expected_density =
        2.0 * static_cast<double>(g.edge_count()) /
        (static_cast<double>(n) * (static_cast<double>(n) - 1.0));
    EXPECT_NEAR(density(g), expected_density, 1e-9);
    EXPECT_NEAR(transitivity(g), testutil::oracle_transitivity(g), 1e-9);
    const auto r = degree_assortativity(g);
    const auto r_oracle = testutil::oracle_assortativity(g);
    ASSERT_EQ(r.has_value(), r_oracle.has_value());
    if (r) {
      EXPECT_NEAR(*r, *r_oracle, 1e-9);
    }
    const auto apl = average_path_length_exact(g);
    const auto apl_oracle = testutil::oracle_average_path_length(g);
    EXPECT_NEAR(apl.hops, apl_oracle.hops, 1e-9);
  }

  std::string polblogs_note = "polblogs dataset absent, reference skipped";
  const fs::path edges = fs::path(REIDBENCH_REPO_DIR) / "datasets" /
                         "polblogs.edges";
  const fs::path attrs = fs::path(REIDBENCH_REPO_DIR) / "datasets" /
                         "polblogs.attrs";
  if (fs::exists(edges)) {
    const auto loaded = load_edge_list(edges);
    EXPECT_EQ(loaded.graph.node_count(), 1224u);
    EXPECT_EQ(loaded.graph.edge_count(), 16718u);
    EXPECT_NEAR(density(loaded.graph), 0.02, 0.01);
    EXPECT_NEAR(transitivity(loaded.graph), 0.22, 0.01);
    const auto r = degree_assortativity(loaded.graph);
    ASSERT_TRUE(r.has_value());
    EXPECT_NEAR(*r, -0.22, 0.01);
    EXPECT_NEAR(average_path_length_exact(loaded.graph).hops, 2.49, 0.05);
    polblogs_note = "polblogs reference values matched";
    if (fs::exists(attrs)) {
      const auto labeled = load_attributes(loaded.graph, attrs);
      const auto est = estimate_params(labeled);
      EXPECT_NEAR(est.p_hat, 0.48, 0.01);
      EXPECT_NEAR(est.tau_hat, 0.84, 0.01);
      polblogs_note += " incl. (p, tau)";
    }
  }
  conclude(3, "50 graphs vs brute-force oracles at 1e-9; " + polblogs_note);
}

// ---------------------------------------------------------------------
// 4. Signature conservation on 20 random labeled graphs, and the toy
// graph reproduces its reference counts exactly.
TEST(Acceptance, C4SignatureConservation) {
  const SignatureConfig cfg{.bin_size = 2, .bins_per_hop = 6};
  for (std::uint64_t i = 0; i < 20; ++i) {
    const std::size_t n = 40 + i * 5;
    const auto g = testutil::random_graph(n, 3 * n, 6000 + i)
                       .with_attributes(
                           testutil::random_labels(n, n / 3, 6100 + i));
    const auto sigs = compute_all_signatures(g, cfg);
    for (NodeId u = 0; u < g.node_count(); ++u) {
      const std::size_t h1 = neighbors_at_hop(g, u, 1).size();
      const std::size_t h2 = neighbors_at_hop(g, u, 2).size();
      const auto& s = sigs[u];
      EXPECT_EQ(std::accumulate(s.ndd1.begin(), s.ndd1.end(), 0u), h1);
      EXPECT_EQ(std::accumulate(s.ndd2.begin(), s.ndd2.end(), 0u), h2);
      EXPECT_EQ(s.nad1[0] + s.nad1[1], h1);
      EXPECT_EQ(s.nad2[0] + s.nad2[1], h2);
    }
  }

  // Toy graph: x(0)-a(1), x-b(2), a-c(3), a-d(4), b-e(5), c-d; a, c, d Red.
  const auto toy = LabeledGraph::from_edges(
                       6, {{0, 1}, {0, 2}, {1, 3}, {1, 4}, {2, 5}, {3, 4}})
                       .with_attributes({Attr::B, Attr::R, Attr::B, Attr::R,
                                         Attr::R, Attr::B});
  const SignatureConfig toy_cfg{.bin_size = 2, .bins_per_hop = 4};
  EXPECT_EQ(neighbors_at_hop(toy, 0, 2).size(), 3u);
  EXPECT_EQ(compute_ndd(toy, 0, 1, toy_cfg)[0], 0u);
  EXPECT_EQ(compute_ndd(toy, 0, 2, toy_cfg)[0], 1u);
  EXPECT_EQ(compute_nad(toy, 0, 1)[static_cast<int>(Attr::R)], 1u);
  EXPECT_EQ(compute_nad(toy, 0, 2)[static_cast<int>(Attr::R)], 2u);
  conclude(4, "NDD/NAD sums equal hop sizes on 20 graphs; toy counts exact");
}

// ---------------------------------------------------------------------
// 5. Learner statistical sanity: perfect F1 on separable data, chance
// under permuted labels, exact SMOTE balance, 10 folds, importances sum 1.
TEST(Acceptance, C5LearnerSanity) {
  Dataset separable;
  separable.n_features = 3;
  separable.feature_names = {"x", "n1", "n2"};
  Rng rng(71);
  for (int i = 0; i < 40; ++i) {
    separable.add_row(std::vector<double>{rng.uniform01() * 0.45,
                                          rng.uniform01(), rng.uniform01()},
                      0);
    separable.add_row(std::vector<double>{0.55 + rng.uniform01() * 0.45,
                                          rng.uniform01(), rng.uniform01()},
                      1);
  }
  const auto cv = cross_validate_5x2(separable, {.n_trees = 30}, {}, 5);
  EXPECT_EQ(cv.fold_f1.size(), 10u);
  EXPECT_DOUBLE_EQ(cv.mean_f1, 1.0);
  double total = 0.0;
  for (double v : cv.importances) total += v;
  EXPECT_NEAR(total, 1.0, 1e-12);

  std::vector<double> null_means;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Dataset noise;
    noise.n_features = 4;
    noise.feature_names = {"a", "b", "c", "d"};
    Rng nrng(500 + seed);
    for (int i = 0; i < 120; ++i) {
      noise.add_row(std::vector<double>{nrng.uniform01(), nrng.uniform01(),
                                        nrng.uniform01(), nrng.uniform01()},
                    static_cast<std::uint8_t>(i % 2));
    }
    null_means.push_back(
        cross_validate_5x2(noise, {.n_trees = 20}, {}, seed * 7 + 1).mean_f1);
  }
  std::sort(null_means.begin(), null_means.end());
  const double median = (null_means[4] + null_means[5]) / 2.0;
  EXPECT_NEAR(median, 0.5, 0.1);

  Dataset skew;
  skew.n_features = 2;
  skew.feature_names = {"x", "y"};
  Rng srng(81);
  for (int i = 0; i < 10; ++i) {
    skew.add_row(std::vector<double>{srng.uniform01(), 2.0}, 1);
  }
  for (int i = 0; i < 90; ++i) {
    skew.add_row(std::vector<double>{srng.uniform01(), 0.0}, 0);
  }
  const auto balanced = smote_oversample(skew, {}, 3);
  EXPECT_EQ(balanced.class_count(0), 90u);
  EXPECT_EQ(balanced.class_count(1), 90u);
  conclude(5, "separable F1 1.0; permuted-label median " +
                  std::to_string(median) + "; SMOTE balance exact");
}

// ---------------------------------------------------------------------
// 6. T-statistic formula: hand example, brute-force oracle on 100 random
// vector pairs (1e-9), exact antisymmetry, shift invariance.
TEST(Acceptance, C6TStatisticFormula) {
  const std::vector<double> gs{0.5, 0.65, 0.7};
  const std::vector<double> lbl{0.6, 0.7, 0.8};
  EXPECT_NEAR(t_statistic(gs, lbl).t_statistic, 5.0, 1e-9);

  Rng rng(91);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 4 + rng.index(60);
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = rng.uniform01();
      b[i] = rng.uniform01();
    }
    const auto r = t_statistic(a, b);
    if (r.degenerate) continue;
    // Textbook recomputation.
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += b[i] - a[i];
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = b[i] - a[i] - mean;
      ss += d * d;
    }
    const double expected =
        mean / (std::sqrt(ss / static_cast<double>(n - 1)) /
                std::sqrt(static_cast<double>(n)));
    EXPECT_NEAR(r.t_statistic, expected, 1e-9);
    // Antisymmetry is exact in IEEE arithmetic.
    EXPECT_EQ(t_statistic(b, a).t_statistic, -r.t_statistic);
    // Shift invariance to 1e-9 on arbitrary doubles.
    std::vector<double> a_shift(n), b_shift(n);
    for (std::size_t i = 0; i < n; ++i) {
      a_shift[i] = a[i] + 0.1875;
      b_shift[i] = b[i] + 0.1875;
    }
    EXPECT_NEAR(t_statistic(a_shift, b_shift).t_statistic, r.t_statistic,
                1e-9);
  }
  // On dyadic values a dyadic shift is exact.
  const std::vector<double> da{0.25, 0.5, 0.375, 0.875};
  const std::vector<double> db{0.5, 0.625, 0.375, 1.0};
  std::vector<double> da_s(da), db_s(db);
  for (auto& v : da_s) v += 0.5;
  for (auto& v : db_s) v += 0.5;
  EXPECT_EQ(t_statistic(da, db).t_statistic,
            t_statistic(da_s, db_s).t_statistic);
  conclude(6, "hand example t=5.0; 100 random pairs vs oracle at 1e-9");
}

// ---------------------------------------------------------------------
// 7. Diversity trend at desk scale: on a 500-node uniform random graph
// (mean degree 8) with tau fixed at 0.25, the median t over 3 seeds is
// nondecreasing in p in {0.1, 0.3, 0.5} with ell = 50 subsamples per run.
// An expander-like topology keeps label placement free of the long
// same-label runs that 1D lattices develop, which would starve the
// neighborhood attribute counts of diversity at high p.
TEST(Acceptance, C7DiversityTrend) {
  const auto g = testutil::random_graph(500, 2000, 9);
  const std::vector<double> ps = {0.1, 0.3, 0.5};
  std::vector<std::vector<double>> t_by_p(ps.size());
  for (std::uint64_t seed : {11u, 12u, 13u}) {
    ExperimentConfig cfg;
    cfg.alpha = 0.2;
    cfg.plan.ell = 50;
    cfg.plan.subsample_size = 400;
    cfg.forest.n_trees = 100;
    cfg.master_seed = seed;
    cfg.workers = 0;
    const auto sweep = sweep_grid(g, cfg, ps, {0.25});
    ASSERT_EQ(sweep.cells.size(), ps.size());
    for (std::size_t i = 0; i < ps.size(); ++i) {
      ASSERT_FALSE(sweep.cells[i].skipped)
          << "labeling infeasible at p=" << ps[i];
      ASSERT_FALSE(sweep.cells[i].t_degenerate);
      t_by_p[i].push_back(sweep.cells[i].t_statistic);
    }
  }
  std::vector<double> medians;
  for (auto& ts : t_by_p) {
    std::sort(ts.begin(), ts.end());
    medians.push_back(ts[1]);  // median of 3
  }
  std::string detail = "median t by p:";
  for (std::size_t i = 0; i < ps.size(); ++i) {
    detail += " " + std::to_string(medians[i]);
    if (i > 0) {
      EXPECT_GE(medians[i], medians[i - 1])
          << "median t dropped from p=" << ps[i - 1] << " to p=" << ps[i];
    }
  }
  conclude(7, detail);
}

// ---------------------------------------------------------------------
// 8. Positive-vulnerability construction: two planted communities with
// perfectly homophilous labels give GS(LBL) >= GS and t > 0 on all of a
// 5-seed suite.
TEST(Acceptance, C8PlantedVulnerability) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId u = 0; u < 100; ++u) {
    for (NodeId v = u + 1; v < 100; ++v) {
      edges.emplace_back(u, v);
      edges.emplace_back(u + 100, v + 100);
    }
  }
  edges.emplace_back(99, 100);
  edges.emplace_back(50, 150);
  edges.emplace_back(25, 125);
  std::vector<Attr> attrs(200, Attr::B);
  for (NodeId u = 0; u < 100; ++u) attrs[u] = Attr::R;
  const auto g = LabeledGraph::from_edges(200, edges).with_attributes(attrs);

  std::string detail = "t per seed:";
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    ExperimentConfig cfg;
    cfg.alpha = 0.2;
    cfg.plan.ell = 12;
    cfg.plan.subsample_size = 120;
    cfg.forest.n_trees = 50;
    cfg.master_seed = seed;
    cfg.workers = 0;
    const auto report = run_attack(g, cfg);
    EXPECT_GE(report.gs_lbl_mean_f1, report.gs_mean_f1)
        << "seed " << seed;
    ASSERT_FALSE(report.ttest.degenerate);
    EXPECT_GT(report.ttest.t_statistic, 0.0) << "seed " << seed;
    detail += " " + std::to_string(report.ttest.t_statistic);
  }
  conclude(8, detail);
}

// ---------------------------------------------------------------------
// 9. End-to-end determinism through the CLI: identical config and seeds
// give byte-identical report files, timing fields aside.
TEST(Acceptance, C9EndToEndDeterminism) {
  const fs::path dir = fs::temp_directory_path() / "reidbench_acceptance_c9";
  fs::remove_all(dir);
  fs::create_directories(dir);
  testutil::community_graph(150, 3, 0.12, 40, 21)
      .write_edge_list(dir / "graph.edges");
  {
    std::ofstream cfg(dir / "exp.ini");
    cfg << "[graph]\nedges = " << (dir / "graph.edges").string() << "\n"
        << "[labeling]\np = 0.4\ntau = 0.25\n"
        << "[sampling]\nell = 6\nsubsample_size = 80\n"
        << "[forest]\ntrees = 20\n"
        << "[run]\nseed = 5\n";
  }
  const std::string cli = REIDBENCH_CLI_PATH;
  for (const char* out : {"out_a", "out_b"}) {
    const std::string cmd = cli + " attack --config " +
                            (dir / "exp.ini").string() + " --out " +
                            (dir / out).string() + " > /dev/null";
    ASSERT_EQ(std::system(cmd.c_str()), 0);
  }
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  std::size_t compared = 0;
  for (const auto& entry : fs::directory_iterator(dir / "out_a")) {
    const auto name = entry.path().filename();
    ASSERT_TRUE(fs::exists(dir / "out_b" / name)) << name;
    ++compared;
    if (name == "report.json") {
      auto ja = nlohmann::json::parse(slurp(dir / "out_a" / name));
      auto jb = nlohmann::json::parse(slurp(dir / "out_b" / name));
      ja.erase("timings");
      jb.erase("timings");
      EXPECT_EQ(ja.dump(), jb.dump());
    } else {
      EXPECT_EQ(slurp(dir / "out_a" / name), slurp(dir / "out_b" / name))
          << name;
    }
  }
  EXPECT_GE(compared, 5u);  // report, f1 vectors, 2 importance tables, kde
  fs::remove_all(dir);
  conclude(9, std::to_string(compared) +
                  " report files byte-identical modulo timings");
}

}  // namespace
}  // namespace reidbench
