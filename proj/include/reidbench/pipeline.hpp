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

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "reidbench/config.hpp"
#include "reidbench/cross_validation.hpp"
#include "reidbench/labeling.hpp"
#include "reidbench/metrics.hpp"
#include "reidbench/sampler.hpp"
#include "reidbench/signature.hpp"
#include "reidbench/split.hpp"
#include "reidbench/stats.hpp"

namespace reidbench {

inline constexpr int kReportSchemaVersion = 1;
/// A feature whose mean importance contribution falls below this share is
/// omitted from the filtered table (the full table is always persisted).
inline constexpr double kImportanceFilterThreshold = 0.01;

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

struct LabelingSummary {
  bool synthetic = false;
  double p = 0.0;
  double tau = 0.0;
  bool converged = false;
  std::size_t achieved_cross_ties = 0;
  std::size_t target_delta = 0;
  std::uint64_t iterations = 0;
};

/// Everything one attack run produces: per-subsample mean-F1 vectors for
/// the two feature modes, their paired statistic, and the GS(LBL) feature
/// importance distributions.
struct AttackReport {
  std::map<std::string, std::string> config_echo;
  GraphMetrics metrics;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::uint64_t population_size = 0;
  std::uint64_t identical_pairs = 0;
  bool negative_cap_hit = false;
  LabelingSummary labeling;

  std::vector<double> gs_f1;
  std::vector<double> gs_lbl_f1;
  double gs_mean_f1 = 0.0;
  double gs_lbl_mean_f1 = 0.0;
  TTestResult ttest;

  std::vector<std::string> feature_names;  // GS(LBL) layout
  std::vector<double> importance_mean;
  std::vector<std::vector<double>> importance_per_subsample;  // ell x F
  std::vector<std::string> omitted_features;

  std::vector<StageTiming> timings;
};

namespace detail {

class StageClock {
 public:
  explicit StageClock(std::vector<StageTiming>& out) : out_(out) {}

  template <typename Fn>
  auto time(const std::string& stage, Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    if constexpr (std::is_void_v<decltype(fn())>) {
      fn();
      record(stage, start);
    } else {
      auto result = fn();
      record(stage, start);
      return result;
    }
  }

 private:
  void record(const std::string& stage,
              std::chrono::steady_clock::time_point start) {
    const std::chrono::duration<double> elapsed =
        std::chrono::steady_clock::now() - start;
    out_.push_back({stage, elapsed.count()});
  }

  std::vector<StageTiming>& out_;
};

}  // namespace detail

/// Runs the full attack on an already-labeled graph: split, signatures,
/// pair stream, ell subsamples, then per subsample one 5x2 CV with GS
/// features and one with GS(LBL) features over the SAME pairs and the same
/// fold assignments (shared per-subsample CV seed), so the two mean-F1
/// vectors are index-aligned by construction and the paired statistic is
/// valid.
inline AttackReport run_attack(const LabeledGraph& graph,
                               const ExperimentConfig& cfg) {
  if (!graph.is_labeled()) {
    throw DataError("run_attack: graph must carry attributes");
  }
  AttackReport report;
  report.config_echo = cfg.echo();
  report.nodes = graph.node_count();
  report.edges = graph.edge_count();
  detail::StageClock clock(report.timings);

  report.metrics = clock.time("metrics", [&] {
    return compute_graph_metrics(graph, cfg.master_seed, cfg.workers);
  });

  const OverlapSplit split = clock.time("split", [&] {
    return bfs_hd_overlap_split(
        graph, {.alpha = cfg.alpha, .seed = cfg.effective_split_seed()});
  });

  const auto sig_san = clock.time("signatures_san", [&] {
    return compute_all_signatures(split.san, cfg.signature, cfg.workers);
  });
  const auto sig_aux = clock.time("signatures_aux", [&] {
    return compute_all_signatures(split.aux, cfg.signature, cfg.workers);
  });

  SamplePlan plan = cfg.plan;
  plan.seed = cfg.effective_sampling_seed();
  const auto subsamples = clock.time("sampling", [&] {
    return reservoir_subsamples(split, plan);
  });
  {
    PairPopulation population(split);
    report.population_size = population.total();
    report.identical_pairs = population.identical_count();
    report.negative_cap_hit =
        plan.negative_cap != 0 &&
        population.negative_count() > plan.negative_cap;
  }

  report.feature_names = feature_names(cfg.signature, FeatureMode::GS_LBL);
  const auto gs_names = feature_names(cfg.signature, FeatureMode::GS);
  const std::size_t ell = subsamples.size();
  report.gs_f1.resize(ell);
  report.gs_lbl_f1.resize(ell);
  report.importance_per_subsample.assign(
      ell, std::vector<double>(report.feature_names.size(), 0.0));

  const std::uint64_t cv_base = cfg.effective_cv_seed();
  clock.time("training", [&] {
    parallel_for(ell, cfg.workers, [&](std::size_t i) {
      const auto& pairs = subsamples[i];
      Dataset gs, lbl;
      gs.n_features = gs_names.size();
      gs.feature_names = gs_names;
      lbl.n_features = report.feature_names.size();
      lbl.feature_names = report.feature_names;
      for (const auto& pair : pairs) {
        gs.add_row(pair_features(sig_san[pair.san], sig_aux[pair.aux],
                                 FeatureMode::GS),
                   pair.label);
        lbl.add_row(pair_features(sig_san[pair.san], sig_aux[pair.aux],
                                  FeatureMode::GS_LBL),
                    pair.label);
      }
      // One CV seed per subsample, shared between the two modes: identical
      // labels mean identical fold assignments.
      const std::uint64_t cv_seed = derive_seed(cv_base, i);
      const CvResult gs_cv =
          cross_validate_5x2(gs, cfg.forest, cfg.smote, cv_seed);
      const CvResult lbl_cv =
          cross_validate_5x2(lbl, cfg.forest, cfg.smote, cv_seed);
      report.gs_f1[i] = gs_cv.mean_f1;
      report.gs_lbl_f1[i] = lbl_cv.mean_f1;
      report.importance_per_subsample[i] = lbl_cv.importances;
    });
  });

  clock.time("stats", [&] {
    double gs_sum = 0.0, lbl_sum = 0.0;
    for (std::size_t i = 0; i < ell; ++i) {
      gs_sum += report.gs_f1[i];
      lbl_sum += report.gs_lbl_f1[i];
    }
    report.gs_mean_f1 = gs_sum / static_cast<double>(ell);
    report.gs_lbl_mean_f1 = lbl_sum / static_cast<double>(ell);
    report.ttest = t_statistic(report.gs_f1, report.gs_lbl_f1, cfg.t_test);

    report.importance_mean.assign(report.feature_names.size(), 0.0);
    for (const auto& row : report.importance_per_subsample) {
      for (std::size_t f = 0; f < row.size(); ++f) {
        report.importance_mean[f] += row[f];
      }
    }
    double total = 0.0;
    for (double& v : report.importance_mean) {
      v /= static_cast<double>(ell);
      total += v;
    }
    if (total > 0.0) {
      for (double& v : report.importance_mean) v /= total;
    }
    for (std::size_t f = 0; f < report.feature_names.size(); ++f) {
      if (report.importance_mean[f] < kImportanceFilterThreshold) {
        report.omitted_features.push_back(report.feature_names[f]);
      }
    }
  });
  return report;
}

/// File-driven entry: loads the graph, applies real attributes or the
/// attraction labeler, then runs the attack. Labeling non-convergence
/// aborts with the feasibility record attached.
inline AttackReport run_attack_files(const ExperimentConfig& cfg) {
  std::vector<StageTiming> load_timings;
  detail::StageClock clock(load_timings);
  const LoadedGraph loaded =
      clock.time("load", [&] { return load_edge_list(cfg.graph_path); });
  LabeledGraph graph;
  LabelingSummary labeling;
  if (cfg.attraction) {
    const LabelingResult r = clock.time("labeling", [&] {
      return assign_labels(loaded.graph,
                           {.p = cfg.p, .tau = cfg.tau,
                            .seed = cfg.effective_label_seed(),
                            .max_iters = cfg.label_max_iters});
    });
    labeling = {true,       cfg.p,         cfg.tau,     r.converged,
                r.achieved_cross_ties, r.target_delta, r.iterations};
    if (!r.converged) {
      throw ConvergenceFailure(
          "labeling did not converge: achieved " +
              std::to_string(r.achieved_cross_ties) + " > target " +
              std::to_string(r.target_delta) + " after " +
              std::to_string(r.iterations) + " swap attempts",
          r);
    }
    graph = loaded.graph.with_attributes(r.assignment);
  } else {
    graph = clock.time("load_attributes", [&] {
      return load_attributes(loaded.graph, cfg.attributes_path);
    });
    labeling.synthetic = false;
  }
  AttackReport report = run_attack(graph, cfg);
  report.labeling = labeling;
  if (!cfg.attraction) {
    const auto est = estimate_params(graph);
    report.labeling.p = est.p_hat;
    report.labeling.tau = est.tau_hat;
    report.labeling.converged = true;
  }
  report.timings.insert(report.timings.begin(), load_timings.begin(),
                        load_timings.end());
  return report;
}

struct GridCell {
  double p = 0.0;
  double tau = 0.0;
  bool skipped = false;  // labeling infeasible at this cell
  double t_statistic = 0.0;
  bool t_degenerate = false;
  double gs_mean_f1 = 0.0;
  double gs_lbl_mean_f1 = 0.0;
};

struct SweepResult {
  std::vector<GridCell> cells;
  std::vector<AttackReport> reports;  // converged cells only, cell order
};

/// One run_attack per feasible (p, tau) cell over a fixed topology and a
/// fixed split: the split seed is shared across cells, and since the BFS
/// overlap and the seeded exclusive shuffle ignore labels entirely, every
/// cell sees the same node partition. Only the label swap differs.
inline SweepResult sweep_grid(const LabeledGraph& base,
                              const ExperimentConfig& cfg,
                              const std::vector<double>& p_values,
                              const std::vector<double>& tau_values) {
  if (p_values.empty() || tau_values.empty()) {
    throw DataError("sweep: nonempty p and tau grids required");
  }
  SweepResult result;
  for (std::size_t i = 0; i < p_values.size(); ++i) {
    for (std::size_t j = 0; j < tau_values.size(); ++j) {
      GridCell cell;
      cell.p = p_values[i];
      cell.tau = tau_values[j];
      const LabelingResult r = assign_labels(
          base, {.p = cell.p, .tau = cell.tau,
                 .seed = derive_seed(cfg.effective_label_seed(),
                                     seed_stream::kCell, i, j),
                 .max_iters = cfg.label_max_iters});
      if (!r.converged) {
        cell.skipped = true;
        result.cells.push_back(cell);
        continue;
      }
      ExperimentConfig cell_cfg = cfg;
      cell_cfg.p = cell.p;
      cell_cfg.tau = cell.tau;
      AttackReport report =
          run_attack(base.with_attributes(r.assignment), cell_cfg);
      report.labeling = {true,
                         cell.p,
                         cell.tau,
                         true,
                         r.achieved_cross_ties,
                         r.target_delta,
                         r.iterations};
      cell.t_statistic = report.ttest.t_statistic;
      cell.t_degenerate = report.ttest.degenerate;
      cell.gs_mean_f1 = report.gs_mean_f1;
      cell.gs_lbl_mean_f1 = report.gs_lbl_mean_f1;
      result.cells.push_back(cell);
      result.reports.push_back(std::move(report));
    }
  }
  return result;
}

namespace detail {

inline nlohmann::json report_to_json(const AttackReport& report) {
  nlohmann::json j;
  j["schema_version"] = kReportSchemaVersion;
  j["config"] = report.config_echo;
  j["graph"]["nodes"] = report.nodes;
  j["graph"]["edges"] = report.edges;
  j["graph"]["density"] = report.metrics.density;
  j["graph"]["transitivity"] = report.metrics.transitivity;
  if (report.metrics.assortativity) {
    j["graph"]["assortativity"] = *report.metrics.assortativity;
  } else {
    j["graph"]["assortativity"] = nullptr;
  }
  j["graph"]["avg_path_length"] = report.metrics.apl.hops;
  j["graph"]["apl_exact"] = report.metrics.apl.exact;
  j["graph"]["apl_disconnected_fraction"] =
      report.metrics.apl.disconnected_fraction;
  j["population"]["size"] = report.population_size;
  j["population"]["identical_pairs"] = report.identical_pairs;
  j["population"]["negative_cap_hit"] = report.negative_cap_hit;
  j["labeling"]["synthetic"] = report.labeling.synthetic;
  j["labeling"]["p"] = report.labeling.p;
  j["labeling"]["tau"] = report.labeling.tau;
  j["labeling"]["converged"] = report.labeling.converged;
  j["labeling"]["achieved_cross_ties"] = report.labeling.achieved_cross_ties;
  j["labeling"]["target_delta"] = report.labeling.target_delta;
  j["labeling"]["iterations"] = report.labeling.iterations;
  j["f1"]["gs"] = report.gs_f1;
  j["f1"]["gs_lbl"] = report.gs_lbl_f1;
  j["f1"]["gs_mean"] = report.gs_mean_f1;
  j["f1"]["gs_lbl_mean"] = report.gs_lbl_mean_f1;
  j["t_test"]["kind"] =
      report.ttest.kind == TTestKind::kPaired ? "paired" : "welch";
  j["t_test"]["degenerate"] = report.ttest.degenerate;
  j["t_test"]["t_statistic"] = report.ttest.t_statistic;
  j["t_test"]["df"] = report.ttest.df;
  j["t_test"]["mean_difference"] = report.ttest.mean_difference;
  nlohmann::json importances = nlohmann::json::object();
  for (std::size_t f = 0; f < report.feature_names.size(); ++f) {
    if (report.importance_mean[f] >= kImportanceFilterThreshold) {
      importances[report.feature_names[f]] = report.importance_mean[f];
    }
  }
  j["importances"] = importances;
  j["omitted_features"] = report.omitted_features;
  nlohmann::json timings = nlohmann::json::object();
  for (const auto& t : report.timings) timings[t.stage] = t.seconds;
  j["timings"] = timings;
  return j;
}

inline void write_text(const std::filesystem::path& path,
                       const std::string& content) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open " + path.string());
  out << content;
}

}  // namespace detail

/// Writes report.json, f1_vectors.csv, importance_full.csv,
/// importance_filtered.csv and one kde_<feature>.csv per filtered feature.
/// Everything except the `timings` object in report.json is reproducible
/// byte for byte under a fixed config.
inline void emit_reports(const AttackReport& report,
                         const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);

  detail::write_text(out_dir / "report.json",
                     detail::report_to_json(report).dump(2) + "\n");

  {
    std::ofstream out(out_dir / "f1_vectors.csv");
    if (!out) throw DataError("cannot open f1_vectors.csv");
    out.precision(17);
    out << "subsample,gs_f1,gs_lbl_f1\n";
    for (std::size_t i = 0; i < report.gs_f1.size(); ++i) {
      out << i << ',' << report.gs_f1[i] << ',' << report.gs_lbl_f1[i]
          << '\n';
    }
  }

  auto write_importances = [&](const fs::path& path, bool filtered) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open " + path.string());
    out.precision(17);
    out << "feature,mean_importance\n";
    for (std::size_t f = 0; f < report.feature_names.size(); ++f) {
      if (filtered &&
          report.importance_mean[f] < kImportanceFilterThreshold) {
        continue;
      }
      out << report.feature_names[f] << ',' << report.importance_mean[f]
          << '\n';
    }
  };
  write_importances(out_dir / "importance_full.csv", false);
  write_importances(out_dir / "importance_filtered.csv", true);

  for (std::size_t f = 0; f < report.feature_names.size(); ++f) {
    if (report.importance_mean[f] < kImportanceFilterThreshold) continue;
    std::vector<double> samples;
    samples.reserve(report.importance_per_subsample.size());
    for (const auto& row : report.importance_per_subsample) {
      samples.push_back(row[f]);
    }
    if (samples.size() < 2) continue;
    const KdeCurve curve = gaussian_kde(samples, 256);
    write_kde_csv(curve,
                  out_dir / ("kde_" + report.feature_names[f] + ".csv"));
  }
}

/// Sweep outputs: grid.csv plus one report directory per feasible cell.
inline void emit_sweep(const SweepResult& sweep,
                       const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  std::ofstream out(out_dir / "grid.csv");
  if (!out) throw DataError("cannot open grid.csv");
  out.precision(17);
  out << "p,tau,status,t_statistic,gs_mean,gs_lbl_mean\n";
  std::size_t report_index = 0;
  for (const auto& cell : sweep.cells) {
    out << cell.p << ',' << cell.tau << ',';
    if (cell.skipped) {
      out << "skipped,,,\n";
      continue;
    }
    out << (cell.t_degenerate ? "degenerate" : "ok") << ','
        << cell.t_statistic << ',' << cell.gs_mean_f1 << ','
        << cell.gs_lbl_mean_f1 << '\n';
    char cell_name[64];
    std::snprintf(cell_name, sizeof(cell_name), "cell_p%.3f_tau%.3f",
                  cell.p, cell.tau);
    emit_reports(sweep.reports[report_index++], out_dir / cell_name);
  }
}

}  // namespace reidbench
