// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "mmscm/pathloss.hpp"

namespace mmscm {

struct LinkBudget {
  double tx_power_dbm = 28.0;
  double tx_max_gain_dbi = 23.0;
  double rx_gain_dbi = 11.0;
  double noise_figure_db = 10.0;
  double bandwidth_hz = 800e6;
  double snr_cutoff_db = 15.0;
  double median_abg_dbi = 14.5;
  double nominal_azimuth_gain_dbi = 14.5;
};

// Thermal noise floor: -174 dBm/Hz + 10*log10(B) + NF.
double noise_floor_dbm(const LinkBudget& budget);

// Maximum Tx gain less the beamforming-gain degradation seen in the data.
// Degradation below zero (measured ABG above nominal) is clamped so the
// effective gain never exceeds the hardware maximum.
double effective_tx_gain_dbi(const LinkBudget& budget);

struct SnrPoint {
  double distance_m = 0.0;
  double snr_db = 0.0;
};

// SNR over [fit.d_min, fit.d_max] on a fixed grid (default 1 m steps),
// optionally ignoring the ABG degradation (apply_degradation = false uses
// the full tx_max_gain).
std::vector<SnrPoint> snr_profile(const PathGainFit& fit,
                                  const LinkBudget& budget,
                                  double step_m = 1.0,
                                  bool apply_degradation = true);

struct CutoffResult {
  enum class Kind { cutoff_at, covered_full_range, never_covered };
  Kind kind = Kind::never_covered;
  double distance_m = 0.0;  // valid for cutoff_at
};

// Largest grid distance with SNR >= threshold; sentinel kinds when the
// profile never crosses.
CutoffResult cutoff_distance(const std::vector<SnrPoint>& profile,
                             double threshold_db);

std::string to_string(CutoffResult::Kind kind);

// Shannon rate in bit/s.
double shannon_rate_bps(double snr_db, double bandwidth_hz);

}  // namespace mmscm
