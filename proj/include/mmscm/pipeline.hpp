// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mmscm/channel_metrics.hpp"
#include "mmscm/pathloss.hpp"

namespace mmscm {

// Per-link (distance, path gain) points for fitting.
std::vector<PgPoint> extract_pg_points(const SidewalkDataset& ds,
                                       const MetricsOptions& opts = {});

// Pooled fit over every dataset accepted by the selector.
PathGainFit group_fit(std::span<const SidewalkDataset> datasets,
                      const std::function<bool(const SidewalkDataset&)>& selector,
                      const MetricsOptions& opts = {},
                      std::string label = "");

// One summary row per sidewalk: fit parameters plus beamforming-gain stats.
struct FitRow {
  std::string name;
  double length_m = 0.0;
  int links = 0;
  double slope_n = 0.0;
  double intercept_b_db = 0.0;
  double rms_sigma_db = 0.0;
  double median_abg_dbi = 0.0;
  double p10_abg_dbi = 0.0;
};

FitRow fit_row(const SidewalkDataset& ds, const MetricsOptions& opts = {});

}  // namespace mmscm
