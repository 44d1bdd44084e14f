// SPDX-License-Identifier: Apache-2.0
#include "mmscm/coverage.hpp"

#include <cmath>
#include <stdexcept>

#include "mmscm/units.hpp"

namespace mmscm {

double noise_floor_dbm(const LinkBudget& budget) {
  if (!(budget.bandwidth_hz > 0.0)) {
    throw std::invalid_argument("bandwidth must be positive");
  }
  return -174.0 + 10.0 * std::log10(budget.bandwidth_hz) +
         budget.noise_figure_db;
}

double effective_tx_gain_dbi(const LinkBudget& budget) {
  double degradation =
      std::max(0.0, budget.nominal_azimuth_gain_dbi - budget.median_abg_dbi);
  return budget.tx_max_gain_dbi - degradation;
}

std::vector<SnrPoint> snr_profile(const PathGainFit& fit,
                                  const LinkBudget& budget, double step_m,
                                  bool apply_degradation) {
  if (!(step_m > 0.0)) {
    throw std::invalid_argument("step must be positive");
  }
  if (!(fit.d_min_m > 0.0) || !(fit.d_max_m >= fit.d_min_m)) {
    throw std::invalid_argument("fit has no usable distance range");
  }
  double g_tx =
      apply_degradation ? effective_tx_gain_dbi(budget) : budget.tx_max_gain_dbi;
  double fixed = budget.tx_power_dbm + g_tx + budget.rx_gain_dbi -
                 noise_floor_dbm(budget);
  std::vector<SnrPoint> profile;
  for (double d = fit.d_min_m; d <= fit.d_max_m + 1e-9; d += step_m) {
    profile.push_back({d, fixed + eval_fit(fit, d)});
  }
  return profile;
}

CutoffResult cutoff_distance(const std::vector<SnrPoint>& profile,
                             double threshold_db) {
  if (profile.empty()) {
    throw std::invalid_argument("empty SNR profile");
  }
  CutoffResult result;
  bool any_below = false, any_at_or_above = false;
  double last_ok = 0.0;
  for (const auto& p : profile) {
    if (p.snr_db >= threshold_db) {
      any_at_or_above = true;
      last_ok = std::max(last_ok, p.distance_m);
    } else {
      any_below = true;
    }
  }
  if (!any_at_or_above) {
    result.kind = CutoffResult::Kind::never_covered;
    return result;
  }
  if (!any_below) {
    result.kind = CutoffResult::Kind::covered_full_range;
    result.distance_m = profile.back().distance_m;
    return result;
  }
  result.kind = CutoffResult::Kind::cutoff_at;
  result.distance_m = last_ok;
  return result;
}

std::string to_string(CutoffResult::Kind kind) {
  switch (kind) {
    case CutoffResult::Kind::cutoff_at: return "cutoff_at";
    case CutoffResult::Kind::covered_full_range: return "no cutoff within range";
    case CutoffResult::Kind::never_covered: return "never covered";
  }
  return "never covered";
}

double shannon_rate_bps(double snr_db, double bandwidth_hz) {
  if (!(bandwidth_hz > 0.0)) {
    throw std::invalid_argument("bandwidth must be positive");
  }
  return bandwidth_hz * std::log2(1.0 + db_to_linear(snr_db));
}

}  // namespace mmscm
