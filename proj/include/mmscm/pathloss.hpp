// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mmscm {

struct PgPoint {
  double distance_m = 0.0;
  double path_gain_db = 0.0;
};

// Single-slope log-distance model: pg(d) = b + 10*n*log10(d).
struct PathGainFit {
  double slope_n = 0.0;
  double intercept_b_db = 0.0;  // value at d = 1 m
  double rms_sigma_db = 0.0;
  double d_min_m = 0.0;
  double d_max_m = 0.0;
  int count = 0;
  std::string label;
};

PathGainFit fit_single_slope(std::span<const PgPoint> points,
                             std::string label = "");
double eval_fit(const PathGainFit& fit, double d_m);

// Pooled OLS over the union of the given point pools.
PathGainFit pooled_fit(const std::vector<std::vector<PgPoint>>& pools,
                       std::string label = "");

// Free-space path gain (negative of FSPL), exact c.
double fspl_db(double d_m, double f_hz);

// 3GPP TR 38.901 street-canyon models as negative path gain. d3d is the 3D
// separation; the 2D distance for breakpoint logic is recovered from the
// height difference.
double umi_los_db(double d3d_m, double h_bs_m, double h_ut_m, double f_hz);
double umi_nlos_db(double d3d_m, double h_bs_m, double h_ut_m, double f_hz);

// TR 38.901 UMi LOS probability vs 2D distance.
double los_probability(double d2d_m);

struct FitComparison {
  double delta_n = 0.0;
  double delta_b_db = 0.0;
  std::vector<std::pair<double, double>> delta_db_at;  // (d, eval a - eval b)
};

FitComparison compare_fits(const PathGainFit& a, const PathGainFit& b,
                           std::span<const double> distances_m);

}  // namespace mmscm
