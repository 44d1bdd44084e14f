// SPDX-License-Identifier: Apache-2.0
#include "mmscm/pipeline.hpp"

#include <stdexcept>

namespace mmscm {

std::vector<PgPoint> extract_pg_points(const SidewalkDataset& ds,
                                       const MetricsOptions& opts) {
  MetricsOptions o = opts;
  o.compute_k = false;
  std::vector<PgPoint> points;
  points.reserve(ds.records.size());
  for (const auto& rec : ds.records) {
    LinkMetrics m = compute_link_metrics(rec, ds.tx_power_dbm, o);
    points.push_back({m.distance_m, m.path_gain_db});
  }
  return points;
}

PathGainFit group_fit(std::span<const SidewalkDataset> datasets,
                      const std::function<bool(const SidewalkDataset&)>& selector,
                      const MetricsOptions& opts, std::string label) {
  std::vector<std::vector<PgPoint>> pools;
  for (const auto& ds : datasets) {
    if (!selector || selector(ds)) {
      pools.push_back(extract_pg_points(ds, opts));
    }
  }
  if (pools.empty()) {
    throw std::invalid_argument("selector accepted no dataset");
  }
  return pooled_fit(pools, std::move(label));
}

FitRow fit_row(const SidewalkDataset& ds, const MetricsOptions& opts) {
  MetricsOptions o = opts;
  o.compute_k = false;
  std::vector<PgPoint> points;
  std::vector<double> gains;
  double length = 0.0;
  for (const auto& rec : ds.records) {
    LinkMetrics m = compute_link_metrics(rec, ds.tx_power_dbm, o);
    points.push_back({m.distance_m, m.path_gain_db});
    gains.push_back(m.azimuth_gain_dbi);
    length = std::max(length, m.distance_m);
  }
  PathGainFit fit = fit_single_slope(points, ds.sidewalk_id);
  EmpiricalCdf cdf = abg_cdf(std::move(gains));

  FitRow row;
  row.name = ds.sidewalk_id;
  row.length_m = length;
  row.links = static_cast<int>(ds.records.size());
  row.slope_n = fit.slope_n;
  row.intercept_b_db = fit.intercept_b_db;
  row.rms_sigma_db = fit.rms_sigma_db;
  row.median_abg_dbi = cdf.median();
  row.p10_abg_dbi = cdf.quantile(0.1);
  return row;
}

}  // namespace mmscm
