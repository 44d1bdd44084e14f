// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>
#include <vector>

#include "mmscm/scm.hpp"

namespace mmscm {

struct InterfererContribution {
  std::string tx_id;
  double received_psd_peak_dbm_mhz = 0.0;  // peak over the frequency grid
};

struct CompatReport {
  double margin_db = 0.0;  // +inf with no interferers
  std::vector<InterfererContribution> per_interferer;
  double worst_freq_hz = 0.0;
  bool compatible = false;  // margin >= 0
};

// Bilinear lookup on the power-map grid; azimuth is boresight-relative.
double directional_gain_db(const PowerMap& map, double bearing_deg,
                           double elevation_deg = 0.0);

// Anchored log-distance loss: FSPL at 1 m plus 10*n(bearing)*log10(d).
double path_loss_between_db(const PropagationMap& prop, double bearing_deg,
                            double d_m, double f_hz);

// Interference PSD at the receiver from one transmitter at one frequency.
double received_psd_dbm_mhz(const SpectrumConsumptionModel& tx,
                            const SpectrumConsumptionModel& rx, double f_hz);

// Union of tx/rx mask breakpoints plus segment midpoints; min-margin over
// this grid is exact for piecewise-linear masks.
std::vector<double> compat_frequency_grid(
    std::span<const SpectrumConsumptionModel* const> txs,
    const SpectrumConsumptionModel& rx);

CompatReport aggregate_margin(
    std::span<const SpectrumConsumptionModel* const> txs,
    const SpectrumConsumptionModel& rx, std::span<const double> freqs_hz);

// Convenience: owns nothing, builds the canonical grid itself.
CompatReport aggregate_margin(std::span<const SpectrumConsumptionModel> txs,
                              const SpectrumConsumptionModel& rx);

}  // namespace mmscm
