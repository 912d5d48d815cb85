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

// Command-line front end. Exit codes: 0 success, 1 usage error, 2 data
// error, 3 labeling non-convergence.

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "reidbench/config.hpp"
#include "reidbench/labeling.hpp"
#include "reidbench/metrics.hpp"
#include "reidbench/pipeline.hpp"
#include "reidbench/split.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNonConvergence = 3;

std::vector<double> parse_double_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream in(csv);
  std::string token;
  while (std::getline(in, token, ',')) {
    out.push_back(reidbench::detail::parse_double(
        reidbench::detail::trim(token)));
  }
  if (out.empty()) {
    throw reidbench::DataError("empty value list: `" + csv + "`");
  }
  return out;
}

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
};

reidbench::ExperimentConfig load_experiment_config(const CommonArgs& args) {
  reidbench::IniMap ini = reidbench::parse_ini(args.config_path);
  reidbench::apply_overrides(ini, args.overrides);
  auto cfg = reidbench::ExperimentConfig::from_ini(ini);
  if (args.seed) cfg.master_seed = *args.seed;
  if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
  const bool seed_in_file = ini.count("run") && ini.at("run").count("seed");
  if (!args.seed && !seed_in_file) {
    throw CLI::ValidationError(
        "--seed is required unless the config file sets [run] seed");
  }
  return cfg;
}

int run_metrics(const std::string& graph_path, const std::string& attrs_path,
                std::size_t apl_sources, std::optional<std::uint64_t> seed,
                bool exact_apl, unsigned workers) {
  const auto loaded = reidbench::load_edge_list(graph_path);
  const auto& g = loaded.graph;
  if (loaded.stats.self_loops || loaded.stats.duplicate_edges) {
    std::cerr << "warning: dropped " << loaded.stats.self_loops
              << " self-loops and " << loaded.stats.duplicate_edges
              << " duplicate edges\n";
  }
  std::cout << "nodes: " << g.node_count() << "\n";
  std::cout << "edges: " << g.edge_count() << "\n";
  std::cout << "density: " << reidbench::density(g) << "\n";
  std::cout << "transitivity: " << reidbench::transitivity(g) << "\n";
  const auto r = reidbench::degree_assortativity(g);
  if (r) {
    std::cout << "assortativity: " << *r << "\n";
  } else {
    std::cout << "assortativity: undefined (zero degree variance)\n";
  }
  reidbench::AplResult apl;
  const bool want_sampled =
      !exact_apl && (apl_sources != 0 || g.node_count() > 5000);
  if (want_sampled) {
    if (!seed) {
      throw CLI::ValidationError(
          "sampled path length needs --seed (graph too large for exact "
          "mode by default; pass --exact-apl to force it)");
    }
    const std::size_t sources =
        apl_sources != 0 ? apl_sources
                         : std::min<std::size_t>(1000, g.node_count());
    apl = reidbench::average_path_length_sampled(g, sources, *seed, workers);
  } else {
    apl = reidbench::average_path_length_exact(g, workers);
  }
  std::cout << "avg_path_length: " << apl.hops
            << (apl.exact ? " (exact" : " (sampled") << ", "
            << apl.sources_used << " sources";
  if (apl.disconnected_fraction > 0.0) {
    std::cout << "; " << apl.disconnected_fraction * 100.0
              << "% of examined pairs disconnected and excluded";
  }
  std::cout << ")\n";
  if (!attrs_path.empty()) {
    const auto labeled = reidbench::load_attributes(g, attrs_path);
    const auto est = reidbench::estimate_params(labeled);
    const auto cross =
        reidbench::cross_tie_count(labeled, labeled.attributes());
    std::cout << "p_hat: " << est.p_hat << "\n";
    std::cout << "tau_hat: " << est.tau_hat
              << (est.clamped ? " (clamped)" : "") << "\n";
    std::cout << "cross_tie_fraction: "
              << static_cast<double>(cross) /
                     static_cast<double>(labeled.edge_count())
              << "\n";
  }
  return kExitOk;
}

int run_split(const std::string& graph_path, const std::string& attrs_path,
              double alpha, std::uint64_t seed, int depth,
              const std::string& out_dir) {
  const auto loaded = reidbench::load_edge_list(graph_path);
  reidbench::LabeledGraph g = loaded.graph;
  if (!attrs_path.empty()) {
    g = reidbench::load_attributes(g, attrs_path);
  }
  const reidbench::SplitConfig cfg{.alpha = alpha, .seed = seed,
                                   .depth = depth};
  if (depth == 1) {
    const auto split = reidbench::bfs_hd_overlap_split(g, cfg);
    reidbench::write_split(split, out_dir);
    std::cout << "overlap: " << split.identity_map.size() << " nodes, "
              << "jaccard " << reidbench::jaccard_overlap(split) << "\n";
  } else {
    const auto splits = reidbench::recursive_split(g, cfg);
    for (std::size_t i = 0; i < splits.size(); ++i) {
      const auto dir = std::filesystem::path(out_dir) /
                       ("split_" + splits[i].lineage);
      reidbench::write_split(splits[i], dir);
      std::cout << "split " << splits[i].lineage << ": jaccard "
                << reidbench::jaccard_overlap(splits[i]) << "\n";
    }
  }
  std::cout << "written to " << out_dir << "\n";
  return kExitOk;
}

int run_label(const std::string& graph_path, double p, double tau,
              std::uint64_t seed, std::uint64_t max_iters,
              const std::string& out_path) {
  const auto loaded = reidbench::load_edge_list(graph_path);
  const auto result = reidbench::assign_labels(
      loaded.graph, {.p = p, .tau = tau, .seed = seed,
                     .max_iters = max_iters});
  std::cout << "target_delta: " << result.target_delta << "\n";
  std::cout << "achieved_cross_ties: " << result.achieved_cross_ties << "\n";
  std::cout << "iterations: " << result.iterations << "\n";
  std::cout << "converged: " << (result.converged ? "yes" : "no") << "\n";
  if (!result.converged) {
    std::cerr << "labeling infeasible at p=" << p << " tau=" << tau
              << " on this topology\n";
    return kExitNonConvergence;
  }
  loaded.graph.with_attributes(result.assignment)
      .write_attributes(out_path, /*use_source_ids=*/true);
  std::cout << "attributes written to " << out_path << "\n";
  return kExitOk;
}

int run_estimate(const std::string& graph_path,
                 const std::string& attrs_path) {
  const auto loaded = reidbench::load_edge_list(graph_path);
  const auto g = reidbench::load_attributes(loaded.graph, attrs_path);
  const auto est = reidbench::estimate_params(g);
  std::cout << "p_hat: " << est.p_hat << "\n";
  std::cout << "tau_hat: " << est.tau_hat << (est.clamped ? " (clamped)" : "")
            << "\n";
  return kExitOk;
}

int run_attack_cmd(const CommonArgs& args) {
  const auto cfg = load_experiment_config(args);
  const auto report = reidbench::run_attack_files(cfg);
  reidbench::emit_reports(report, cfg.out_dir);
  std::cout << "gs_mean_f1: " << report.gs_mean_f1 << "\n";
  std::cout << "gs_lbl_mean_f1: " << report.gs_lbl_mean_f1 << "\n";
  if (report.ttest.degenerate) {
    std::cout << "t_statistic: degenerate (zero variance)\n";
  } else {
    std::cout << "t_statistic: " << report.ttest.t_statistic << "\n";
  }
  std::cout << "report written to " << cfg.out_dir << "\n";
  return kExitOk;
}

int run_sweep_cmd(const CommonArgs& args, const std::string& p_csv,
                  const std::string& tau_csv) {
  auto cfg = load_experiment_config(args);
  if (!cfg.attraction) {
    throw reidbench::DataError(
        "sweep requires attraction labeling mode ([labeling] p in config)");
  }
  const auto p_values = parse_double_list(p_csv);
  const auto tau_values = parse_double_list(tau_csv);
  const auto loaded = reidbench::load_edge_list(cfg.graph_path);
  const auto sweep =
      reidbench::sweep_grid(loaded.graph, cfg, p_values, tau_values);
  reidbench::emit_sweep(sweep, cfg.out_dir);
  for (const auto& cell : sweep.cells) {
    std::cout << "p=" << cell.p << " tau=" << cell.tau << ": ";
    if (cell.skipped) {
      std::cout << "skipped (labeling infeasible)\n";
    } else if (cell.t_degenerate) {
      std::cout << "t degenerate\n";
    } else {
      std::cout << "t=" << cell.t_statistic << "\n";
    }
  }
  std::cout << "grid written to " << cfg.out_dir << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "reidbench: measures how much a binary node attribute increases a "
      "graph's vulnerability to machine-learning node re-identification"};
  app.require_subcommand(1);

  // metrics
  auto* metrics = app.add_subcommand(
      "metrics", "Graph metrics (density, transitivity, assortativity, "
                 "average path length)");
  std::string m_graph, m_attrs;
  std::size_t m_apl_sources = 0;
  std::optional<std::uint64_t> m_seed;
  bool m_exact = false;
  unsigned m_workers = 0;
  metrics->add_option("--graph", m_graph, "edge list file")->required();
  metrics->add_option("--attrs", m_attrs, "attribute file");
  metrics->add_option("--apl-sources", m_apl_sources,
                      "sample path lengths from this many sources");
  metrics->add_option("--seed", m_seed, "seed for sampled path length");
  metrics->add_flag("--exact-apl", m_exact, "force exact all-pairs BFS");
  metrics->add_option("--workers", m_workers, "worker threads (0 = auto)");

  // split
  auto* split = app.add_subcommand(
      "split", "BFS-HD overlap split into sanitized/auxiliary graphs");
  std::string s_graph, s_attrs, s_out;
  double s_alpha = 0.2;
  std::uint64_t s_seed = 0;
  int s_depth = 1;
  split->add_option("--graph", s_graph, "edge list file")->required();
  split->add_option("--attrs", s_attrs, "attribute file");
  split->add_option("--alpha", s_alpha, "Jaccard overlap in (0,1)")
      ->required();
  split->add_option("--seed", s_seed, "seed for the exclusive partition")
      ->required();
  split->add_option("--depth", s_depth, "recursive split depth");
  split->add_option("--out", s_out, "output directory")->required();

  // label
  auto* label = app.add_subcommand(
      "label", "Attraction-model synthetic labeling (p, tau)");
  std::string l_graph, l_out;
  double l_p = 0.5, l_tau = 0.0;
  std::uint64_t l_seed = 0, l_max_iters = 0;
  label->add_option("--graph", l_graph, "edge list file")->required();
  label->add_option("--p", l_p, "minority proportion in (0,1)")->required();
  label->add_option("--tau", l_tau, "inbreeding coefficient in [0,1]")
      ->required();
  label->add_option("--seed", l_seed, "labeling seed")->required();
  label->add_option("--max-iters", l_max_iters,
                    "swap attempt budget (0 = 200N)");
  label->add_option("--out", l_out, "attribute file to write")->required();

  // estimate
  auto* estimate = app.add_subcommand(
      "estimate", "Estimate attraction parameters (p, tau) from labels");
  std::string e_graph, e_attrs;
  estimate->add_option("--graph", e_graph, "edge list file")->required();
  estimate->add_option("--attrs", e_attrs, "attribute file")->required();

  // attack
  auto* attack = app.add_subcommand(
      "attack", "End-to-end re-identification attack (GS vs GS(LBL))");
  CommonArgs a_args;
  attack->add_option("--config", a_args.config_path, "experiment config file")
      ->required();
  attack->add_option("--seed", a_args.seed, "master seed override");
  attack->add_option("--out", a_args.out_dir, "output directory override");
  attack->add_option("--set", a_args.overrides,
                     "config override section.key=value (repeatable)");

  // sweep
  auto* sweep = app.add_subcommand(
      "sweep", "Attack over a (p, tau) grid on a fixed topology and split");
  CommonArgs w_args;
  std::string w_p_values, w_tau_values;
  sweep->add_option("--config", w_args.config_path, "experiment config file")
      ->required();
  sweep->add_option("--p-values", w_p_values, "comma-separated p grid")
      ->required();
  sweep->add_option("--tau-values", w_tau_values, "comma-separated tau grid")
      ->required();
  sweep->add_option("--seed", w_args.seed, "master seed override");
  sweep->add_option("--out", w_args.out_dir, "output directory override");
  sweep->add_option("--set", w_args.overrides,
                    "config override section.key=value (repeatable)");

  try {
    app.parse(argc, argv);
    if (metrics->parsed()) {
      return run_metrics(m_graph, m_attrs, m_apl_sources, m_seed, m_exact,
                         m_workers);
    }
    if (split->parsed()) {
      return run_split(s_graph, s_attrs, s_alpha, s_seed, s_depth, s_out);
    }
    if (label->parsed()) {
      return run_label(l_graph, l_p, l_tau, l_seed, l_max_iters, l_out);
    }
    if (estimate->parsed()) {
      return run_estimate(e_graph, e_attrs);
    }
    if (attack->parsed()) {
      return run_attack_cmd(a_args);
    }
    if (sweep->parsed()) {
      return run_sweep_cmd(w_args, w_p_values, w_tau_values);
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const reidbench::ConvergenceFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNonConvergence;
  } catch (const reidbench::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
