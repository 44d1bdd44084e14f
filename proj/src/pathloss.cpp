// SPDX-License-Identifier: Apache-2.0
#include "mmscm/pathloss.hpp"

#include <cmath>
#include <stdexcept>

#include "mmscm/units.hpp"

namespace mmscm {

PathGainFit fit_single_slope(std::span<const PgPoint> points,
                             std::string label) {
  if (points.size() < 2) {
    throw std::invalid_argument("fit needs at least 2 points");
  }
  double sx = 0.0, sy = 0.0;
  double dmin = points.front().distance_m, dmax = dmin;
  for (const auto& p : points) {
    if (!(p.distance_m > 0.0) || !std::isfinite(p.path_gain_db)) {
      throw std::invalid_argument("fit points need d > 0 and finite gain");
    }
    sx += 10.0 * std::log10(p.distance_m);
    sy += p.path_gain_db;
    dmin = std::min(dmin, p.distance_m);
    dmax = std::max(dmax, p.distance_m);
  }
  double n = static_cast<double>(points.size());
  double xbar = sx / n, ybar = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& p : points) {
    double dx = 10.0 * std::log10(p.distance_m) - xbar;
    sxx += dx * dx;
    sxy += dx * (p.path_gain_db - ybar);
  }
  if (sxx <= 0.0) {
    throw std::invalid_argument("all distances equal: singular design");
  }
  PathGainFit fit;
  fit.slope_n = sxy / sxx;
  fit.intercept_b_db = ybar - fit.slope_n * xbar;
  double ss = 0.0;
  for (const auto& p : points) {
    double r = p.path_gain_db - (fit.intercept_b_db +
                                 fit.slope_n * 10.0 * std::log10(p.distance_m));
    ss += r * r;
  }
  fit.rms_sigma_db = std::sqrt(ss / n);
  fit.d_min_m = dmin;
  fit.d_max_m = dmax;
  fit.count = static_cast<int>(points.size());
  fit.label = std::move(label);
  return fit;
}

double eval_fit(const PathGainFit& fit, double d_m) {
  if (!(d_m > 0.0)) {
    throw std::invalid_argument("fit evaluation needs d > 0");
  }
  return fit.intercept_b_db + fit.slope_n * 10.0 * std::log10(d_m);
}

PathGainFit pooled_fit(const std::vector<std::vector<PgPoint>>& pools,
                       std::string label) {
  std::vector<PgPoint> all;
  for (const auto& pool : pools) {
    all.insert(all.end(), pool.begin(), pool.end());
  }
  return fit_single_slope(all, std::move(label));
}

double fspl_db(double d_m, double f_hz) {
  if (!(d_m > 0.0) || !(f_hz > 0.0)) {
    throw std::invalid_argument("fspl needs d > 0 and f > 0");
  }
  return -(20.0 * std::log10(d_m) + 20.0 * std::log10(f_hz) +
           20.0 * std::log10(4.0 * kPi / kSpeedOfLightMps));
}

namespace {

// TR 38.901 Table 7.4.1-1, UMi street canyon. Frequencies in GHz inside the
// formulas; validity ranges per the table notes.
struct UmiGeometry {
  double d3d, d2d, fc_ghz, dbp;
};

UmiGeometry umi_geometry(double d3d_m, double h_bs_m, double h_ut_m,
                         double f_hz) {
  if (!(h_ut_m >= 1.5 && h_ut_m <= 22.5)) {
    throw std::invalid_argument("UMi: h_ut outside [1.5, 22.5] m");
  }
  if (!(h_bs_m > 1.0 && h_bs_m <= 150.0)) {
    throw std::invalid_argument("UMi: h_bs outside (1, 150] m");
  }
  double dh = h_bs_m - h_ut_m;
  if (!(d3d_m > 0.0) || d3d_m < std::fabs(dh)) {
    throw std::invalid_argument("UMi: d3d below the height offset");
  }
  if (!(f_hz >= 0.5e9 && f_hz <= 100e9)) {
    throw std::invalid_argument("UMi: frequency outside [0.5, 100] GHz");
  }
  UmiGeometry g;
  g.d3d = d3d_m;
  g.d2d = std::sqrt(std::max(d3d_m * d3d_m - dh * dh, 0.0));
  g.fc_ghz = f_hz / 1e9;
  // Breakpoint with effective antenna heights (environment height 1 m).
  g.dbp = 4.0 * (h_bs_m - 1.0) * (h_ut_m - 1.0) * f_hz / kSpeedOfLightMps;
  return g;
}

double umi_los_loss(const UmiGeometry& g, double h_bs_m, double h_ut_m) {
  if (g.d2d <= g.dbp) {
    return 32.4 + 21.0 * std::log10(g.d3d) + 20.0 * std::log10(g.fc_ghz);
  }
  double dh = h_bs_m - h_ut_m;
  return 32.4 + 40.0 * std::log10(g.d3d) + 20.0 * std::log10(g.fc_ghz) -
         9.5 * std::log10(g.dbp * g.dbp + dh * dh);
}

}  // namespace

double umi_los_db(double d3d_m, double h_bs_m, double h_ut_m, double f_hz) {
  UmiGeometry g = umi_geometry(d3d_m, h_bs_m, h_ut_m, f_hz);
  return -umi_los_loss(g, h_bs_m, h_ut_m);
}

double umi_nlos_db(double d3d_m, double h_bs_m, double h_ut_m, double f_hz) {
  UmiGeometry g = umi_geometry(d3d_m, h_bs_m, h_ut_m, f_hz);
  double los = umi_los_loss(g, h_bs_m, h_ut_m);
  double nlos = 35.3 * std::log10(g.d3d) + 22.4 +
                21.3 * std::log10(g.fc_ghz) - 0.3 * (h_ut_m - 1.5);
  return -std::max(los, nlos);
}

double los_probability(double d2d_m) {
  if (!(d2d_m >= 0.0)) {
    throw std::invalid_argument("LOS probability needs d2d >= 0");
  }
  if (d2d_m <= 18.0) return 1.0;
  return 18.0 / d2d_m +
         std::exp(-d2d_m / 36.0) * (1.0 - 18.0 / d2d_m);
}

FitComparison compare_fits(const PathGainFit& a, const PathGainFit& b,
                           std::span<const double> distances_m) {
  FitComparison cmp;
  cmp.delta_n = a.slope_n - b.slope_n;
  cmp.delta_b_db = a.intercept_b_db - b.intercept_b_db;
  cmp.delta_db_at.reserve(distances_m.size());
  for (double d : distances_m) {
    cmp.delta_db_at.emplace_back(d, eval_fit(a, d) - eval_fit(b, d));
  }
  return cmp;
}

}  // namespace mmscm
