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
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "reidbench/errors.hpp"
#include "reidbench/forest.hpp"
#include "reidbench/sampler.hpp"
#include "reidbench/signature.hpp"
#include "reidbench/smote.hpp"
#include "reidbench/stats.hpp"

namespace reidbench {

/// Flat section/key/value document: `[section]` headers, `key = value`
/// lines, `#` or `;` comments.
using IniMap = std::map<std::string, std::map<std::string, std::string>>;

namespace detail {

inline std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace detail

inline IniMap parse_ini(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  IniMap out;
  std::string line, section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') {
        throw DataError(path.string() + ":" + std::to_string(lineno) +
                        ": unterminated section header");
      }
      section = detail::trim(t.substr(1, t.size() - 2));
      out[section];
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw DataError(path.string() + ":" + std::to_string(lineno) +
                      ": expected `key = value`");
    }
    out[section][detail::trim(t.substr(0, eq))] =
        detail::trim(t.substr(eq + 1));
  }
  return out;
}

/// Applies `section.key=value` override strings on top of a parsed file.
inline void apply_overrides(IniMap& ini,
                            const std::vector<std::string>& overrides) {
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    const auto dot = o.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
      throw DataError("override must look like section.key=value: " + o);
    }
    ini[detail::trim(o.substr(0, dot))]
       [detail::trim(o.substr(dot + 1, eq - dot - 1))] =
           detail::trim(o.substr(eq + 1));
  }
}

/// Everything one end-to-end attack run needs. Every randomized stage owns
/// an explicit seed; by default they all derive from [run] seed.
struct ExperimentConfig {
  std::string graph_path;
  std::string attributes_path;  // real-attribute mode

  bool attraction = false;  // synthetic-labeling mode
  double p = 0.5;
  double tau = 0.0;
  std::uint64_t label_max_iters = 0;

  double alpha = 0.2;
  SignatureConfig signature;
  SamplePlan plan{.ell = 50, .subsample_size = 2000, .seed = 0};
  ForestConfig forest;
  SmoteConfig smote;
  TTestKind t_test = TTestKind::kPaired;

  std::uint64_t master_seed = 0;
  std::optional<std::uint64_t> label_seed;
  std::optional<std::uint64_t> split_seed;
  std::optional<std::uint64_t> sampling_seed;
  std::optional<std::uint64_t> cv_seed;

  unsigned workers = 0;
  std::string out_dir = "out";

  std::uint64_t effective_label_seed() const {
    return label_seed ? *label_seed
                      : derive_seed(master_seed, seed_stream::kLabeling);
  }
  std::uint64_t effective_split_seed() const {
    return split_seed ? *split_seed
                      : derive_seed(master_seed, seed_stream::kSplit);
  }
  std::uint64_t effective_sampling_seed() const {
    return sampling_seed ? *sampling_seed
                         : derive_seed(master_seed, seed_stream::kSampling);
  }
  std::uint64_t effective_cv_seed() const {
    return cv_seed ? *cv_seed : derive_seed(master_seed, seed_stream::kCv);
  }

  static ExperimentConfig from_ini(const IniMap& ini);
  std::map<std::string, std::string> echo() const;
};

namespace detail {

class IniReader {
 public:
  explicit IniReader(const IniMap& ini) : ini_(ini) {}

  std::optional<std::string> get(const std::string& section,
                                 const std::string& key) {
    used_[section].insert(key);
    auto s = ini_.find(section);
    if (s == ini_.end()) return std::nullopt;
    auto k = s->second.find(key);
    if (k == s->second.end()) return std::nullopt;
    return k->second;
  }

  template <typename T, typename Parse>
  void read(const std::string& section, const std::string& key, T& slot,
            Parse parse) {
    if (auto v = get(section, key)) slot = parse(*v);
  }

  /// Unknown keys are configuration typos; reject them.
  void check_unused() const {
    for (const auto& [section, keys] : ini_) {
      auto u = used_.find(section);
      for (const auto& [key, value] : keys) {
        if (u == used_.end() || !u->second.count(key)) {
          throw DataError("unknown config key: [" + section + "] " + key);
        }
      }
    }
  }

 private:
  const IniMap& ini_;
  std::map<std::string, std::set<std::string>> used_;
};

inline double parse_double(const std::string& s) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw DataError("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw DataError("not a number: `" + s + "`");
  }
}

inline std::uint64_t parse_u64(const std::string& s) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(s, &pos);
    if (pos != s.size()) throw DataError("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw DataError("not a nonnegative integer: `" + s + "`");
  }
}

inline long parse_long(const std::string& s) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(s, &pos);
    if (pos != s.size()) throw DataError("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw DataError("not an integer: `" + s + "`");
  }
}

}  // namespace detail

inline ExperimentConfig ExperimentConfig::from_ini(const IniMap& ini) {
  using detail::parse_double;
  using detail::parse_long;
  using detail::parse_u64;
  detail::IniReader r(ini);
  ExperimentConfig cfg;

  r.read("graph", "edges", cfg.graph_path, [](auto& s) { return s; });
  r.read("graph", "attributes", cfg.attributes_path,
         [](auto& s) { return s; });

  if (auto v = r.get("labeling", "p")) {
    cfg.attraction = true;
    cfg.p = parse_double(*v);
  }
  r.read("labeling", "tau", cfg.tau, parse_double);
  r.read("labeling", "max_iters", cfg.label_max_iters, parse_u64);

  r.read("split", "alpha", cfg.alpha, parse_double);

  r.read("signature", "bin_size", cfg.signature.bin_size, [](auto& s) {
    return static_cast<unsigned>(detail::parse_u64(s));
  });
  r.read("signature", "bins_per_hop", cfg.signature.bins_per_hop,
         [](auto& s) { return static_cast<unsigned>(detail::parse_u64(s)); });

  r.read("sampling", "ell", cfg.plan.ell, [](auto& s) {
    return static_cast<std::size_t>(detail::parse_u64(s));
  });
  r.read("sampling", "subsample_size", cfg.plan.subsample_size, [](auto& s) {
    return static_cast<std::size_t>(detail::parse_u64(s));
  });
  r.read("sampling", "negative_cap", cfg.plan.negative_cap, [](auto& s) {
    return static_cast<std::size_t>(detail::parse_u64(s));
  });

  r.read("forest", "trees", cfg.forest.n_trees, [](auto& s) {
    return static_cast<unsigned>(detail::parse_u64(s));
  });
  r.read("forest", "max_features", cfg.forest.max_features, [](auto& s) {
    return static_cast<unsigned>(detail::parse_u64(s));
  });
  r.read("forest", "min_leaf", cfg.forest.min_leaf, [](auto& s) {
    return static_cast<unsigned>(detail::parse_u64(s));
  });
  r.read("forest", "max_depth", cfg.forest.max_depth,
         [](auto& s) { return static_cast<int>(detail::parse_long(s)); });

  r.read("smote", "k_neighbors", cfg.smote.k_neighbors, [](auto& s) {
    return static_cast<unsigned>(detail::parse_u64(s));
  });

  if (auto v = r.get("run", "t_test")) {
    if (*v == "paired") {
      cfg.t_test = TTestKind::kPaired;
    } else if (*v == "welch") {
      cfg.t_test = TTestKind::kWelch;
    } else {
      throw DataError("run.t_test must be `paired` or `welch`");
    }
  }
  r.read("run", "seed", cfg.master_seed, parse_u64);
  r.read("run", "workers", cfg.workers, [](auto& s) {
    return static_cast<unsigned>(detail::parse_u64(s));
  });
  r.read("run", "out_dir", cfg.out_dir, [](auto& s) { return s; });

  auto read_opt_seed = [&](const char* key,
                           std::optional<std::uint64_t>& slot) {
    if (auto v = r.get("seeds", key)) slot = parse_u64(*v);
  };
  read_opt_seed("labeling", cfg.label_seed);
  read_opt_seed("split", cfg.split_seed);
  read_opt_seed("sampling", cfg.sampling_seed);
  read_opt_seed("cv", cfg.cv_seed);

  r.check_unused();

  if (cfg.graph_path.empty()) {
    throw DataError("config: [graph] edges is required");
  }
  if (cfg.attraction && !cfg.attributes_path.empty()) {
    throw DataError(
        "config: [graph] attributes and [labeling] p are exclusive");
  }
  if (!cfg.attraction && cfg.attributes_path.empty()) {
    throw DataError(
        "config: need [graph] attributes or [labeling] p for labels");
  }
  return cfg;
}

inline std::map<std::string, std::string> ExperimentConfig::echo() const {
  std::map<std::string, std::string> m;
  auto num = [](double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  m["graph.edges"] = graph_path;
  if (!attributes_path.empty()) m["graph.attributes"] = attributes_path;
  if (attraction) {
    m["labeling.p"] = num(p);
    m["labeling.tau"] = num(tau);
    m["labeling.max_iters"] = std::to_string(label_max_iters);
    m["seeds.labeling"] = std::to_string(effective_label_seed());
  }
  m["split.alpha"] = num(alpha);
  m["signature.bin_size"] = std::to_string(signature.bin_size);
  m["signature.bins_per_hop"] = std::to_string(signature.bins_per_hop);
  m["sampling.ell"] = std::to_string(plan.ell);
  m["sampling.subsample_size"] = std::to_string(plan.subsample_size);
  m["sampling.negative_cap"] = std::to_string(plan.negative_cap);
  m["forest.trees"] = std::to_string(forest.n_trees);
  m["forest.max_features"] = std::to_string(forest.max_features);
  m["forest.min_leaf"] = std::to_string(forest.min_leaf);
  m["forest.max_depth"] = std::to_string(forest.max_depth);
  m["smote.k_neighbors"] = std::to_string(smote.k_neighbors);
  m["run.t_test"] = t_test == TTestKind::kPaired ? "paired" : "welch";
  m["run.seed"] = std::to_string(master_seed);
  m["seeds.split"] = std::to_string(effective_split_seed());
  m["seeds.sampling"] = std::to_string(effective_sampling_seed());
  m["seeds.cv"] = std::to_string(effective_cv_seed());
  return m;
}

}  // namespace reidbench
