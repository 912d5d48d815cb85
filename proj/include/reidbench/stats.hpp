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
#include <filesystem>
#include <fstream>
#include <optional>
#include <vector>

#include "reidbench/errors.hpp"

namespace reidbench {

enum class TTestKind { kPaired, kWelch };

struct TTestResult {
  double t_statistic = 0.0;
  double df = 0.0;
  double mean_difference = 0.0;
  /// Zero-variance input: no t value is defined.
  bool degenerate = false;
  TTestKind kind = TTestKind::kPaired;
};

namespace detail {

inline double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

/// Sample variance with n-1 denominator.
inline double variance_of(const std::vector<double>& v, double mean) {
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return s / static_cast<double>(v.size() - 1);
}

}  // namespace detail

/// T-statistic between two index-aligned score vectors, second minus
/// first. The paired form t = mean(d) / (sd(d)/sqrt(n)) is the default:
/// the vectors are built so that index i refers to the same subsample in
/// both. Welch's unpaired form is available behind the same interface.
inline TTestResult t_statistic(const std::vector<double>& first,
                               const std::vector<double>& second,
                               TTestKind kind = TTestKind::kPaired) {
  if (first.size() != second.size()) {
    throw DataError("t_statistic: vectors differ in length");
  }
  const std::size_t n = first.size();
  if (n < 2) throw DataError("t_statistic: need at least 2 entries");
  TTestResult r;
  r.kind = kind;
  if (kind == TTestKind::kPaired) {
    std::vector<double> diff(n);
    for (std::size_t i = 0; i < n; ++i) diff[i] = second[i] - first[i];
    const double mean = detail::mean_of(diff);
    const double var = detail::variance_of(diff, mean);
    r.mean_difference = mean;
    r.df = static_cast<double>(n - 1);
    if (var <= 0.0) {
      r.degenerate = true;
      return r;
    }
    r.t_statistic = mean / std::sqrt(var / static_cast<double>(n));
  } else {
    const double m1 = detail::mean_of(first);
    const double m2 = detail::mean_of(second);
    const double v1 = detail::variance_of(first, m1);
    const double v2 = detail::variance_of(second, m2);
    r.mean_difference = m2 - m1;
    const double nd = static_cast<double>(n);
    const double se2 = v1 / nd + v2 / nd;
    if (se2 <= 0.0) {
      r.degenerate = true;
      return r;
    }
    r.t_statistic = (m2 - m1) / std::sqrt(se2);
    // Welch-Satterthwaite degrees of freedom.
    r.df = se2 * se2 /
           ((v1 / nd) * (v1 / nd) / (nd - 1.0) +
            (v2 / nd) * (v2 / nd) / (nd - 1.0));
  }
  return r;
}

struct KdeCurve {
  std::vector<double> grid;
  std::vector<double> density;
  double bandwidth = 0.0;
  /// All samples coincide and no bandwidth was supplied; grid holds the
  /// single location and density is empty.
  bool point_mass = false;
};

/// Gaussian kernel density estimate over a uniform grid spanning
/// [min - 3h, max + 3h]. Bandwidth defaults to Scott's rule
/// h = sd * n^(-1/5); pass one explicitly to override.
inline KdeCurve gaussian_kde(const std::vector<double>& samples,
                             std::size_t grid_points,
                             std::optional<double> bandwidth = std::nullopt) {
  if (samples.size() < 2) throw DataError("KDE: need at least 2 samples");
  if (grid_points < 2) throw DataError("KDE: need at least 2 grid points");
  const double mean = detail::mean_of(samples);
  const double sd = std::sqrt(detail::variance_of(samples, mean));
  KdeCurve curve;
  if (!bandwidth.has_value()) {
    if (sd <= 0.0) {
      curve.point_mass = true;
      curve.grid.push_back(samples.front());
      return curve;
    }
    curve.bandwidth =
        sd * std::pow(static_cast<double>(samples.size()), -0.2);
  } else {
    if (*bandwidth <= 0.0) throw DataError("KDE: bandwidth must be > 0");
    curve.bandwidth = *bandwidth;
  }
  const auto [lo_it, hi_it] = std::minmax_element(samples.begin(),
                                                  samples.end());
  const double lo = *lo_it - 3.0 * curve.bandwidth;
  const double hi = *hi_it + 3.0 * curve.bandwidth;
  const double step = (hi - lo) / static_cast<double>(grid_points - 1);
  const double norm = 1.0 / (static_cast<double>(samples.size()) *
                             curve.bandwidth * std::sqrt(2.0 * M_PI));
  curve.grid.resize(grid_points);
  curve.density.resize(grid_points);
  for (std::size_t i = 0; i < grid_points; ++i) {
    const double x = lo + step * static_cast<double>(i);
    double acc = 0.0;
    for (double s : samples) {
      const double z = (x - s) / curve.bandwidth;
      acc += std::exp(-0.5 * z * z);
    }
    curve.grid[i] = x;
    curve.density[i] = norm * acc;
  }
  return curve;
}

/// Trapezoidal integral of the curve; close to 1 for a sound estimate.
inline double kde_integral(const KdeCurve& curve) {
  double acc = 0.0;
  for (std::size_t i = 1; i < curve.grid.size(); ++i) {
    acc += 0.5 * (curve.density[i] + curve.density[i - 1]) *
           (curve.grid[i] - curve.grid[i - 1]);
  }
  return acc;
}

/// Two-column CSV: `x,density`.
inline void write_kde_csv(const KdeCurve& curve,
                          const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open " + path.string());
  out << "x,density\n";
  out.precision(17);
  if (curve.point_mass) {
    out << curve.grid.front() << ",point_mass\n";
    return;
  }
  for (std::size_t i = 0; i < curve.grid.size(); ++i) {
    out << curve.grid[i] << ',' << curve.density[i] << '\n';
  }
}

}  // namespace reidbench
