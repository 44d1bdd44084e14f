// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "mmscm/compat.hpp"
#include "mmscm/scm.hpp"

namespace mmscm {

// Bundled simulator defaults: 24 dBi horn and flat-top trapezoid masks.
AntennaPattern default_horn_pattern();
SpectrumMask default_tx_mask(double center_hz, double channel_bw_hz = 1e6);
UnderlayMask default_underlay_mask(double center_hz,
                                   double channel_bw_hz = 1e6);

struct ScenarioConfig {
  double area_sq_miles = 0.5;
  double min_tx_separation_m = 10.0;
  double link_min_m = 10.0;
  double link_max_m = 100.0;
  double prop_exponent = 2.8;
  double base_freq_hz = 28e9;  // channel 1 center
  double channel_bw_hz = 1e6;
  double underlay_reference_dbm_mhz = -80.0;
  double device_height_m = 1.5;
  double map_resolution_deg = 1.0;
  long max_attempts = 1000000;
  std::optional<AntennaPattern> pattern;  // defaults to the bundled horn
};

struct ScenarioLink {
  Position3D tx_pos;
  Position3D rx_pos;
  SpectrumConsumptionModel tx_scm;
  SpectrumConsumptionModel rx_scm;
};

struct Scenario {
  double area_side_m = 0.0;
  std::vector<ScenarioLink> links;
  std::uint64_t seed = 0;
  ScenarioConfig config;
};

// Rejection-sampled placement; deterministic for a given seed. Tx powers are
// anchored so the boresight received PSD at link_max equals the underlay
// reference.
Scenario generate_scenario(int n_links, std::uint64_t seed,
                           const ScenarioConfig& config = {});

struct Assignment {
  std::vector<int> channels;  // 1-based, per link
  int channels_used = 0;
};

struct AssignStats {
  std::vector<double> per_link_seconds;
};

// Greedy lowest-feasible-channel assignment in link order; a channel is
// feasible when the new link's receiver and every co-channel receiver keep a
// nonnegative aggregate margin.
Assignment assign_channels_greedy(const Scenario& sc,
                                  AssignStats* stats = nullptr);

// Copy with the model's masks translated onto the given channel.
SpectrumConsumptionModel scm_on_channel(const SpectrumConsumptionModel& scm,
                                        int channel, double channel_bw_hz);

// Independent re-check of a finished assignment through the compat engine.
bool verify_assignment(const Scenario& sc, const Assignment& assignment);

// Exact chromatic number of the pairwise-conflict graph (feasible for the
// simulator's small-scenario bound checks, n <= ~12).
int pairwise_chromatic_lower_bound(const Scenario& sc);

struct TrialSummary {
  std::map<int, int> histogram;  // channels_used -> trial count
  std::vector<int> per_trial;
  int mode = 0;
  double fraction_2_3 = 0.0;
  int max_channels = 0;
  double max_link_seconds = 0.0;
};

TrialSummary run_trials(int n_links, int n_trials, std::uint64_t seed,
                        const ScenarioConfig& config = {});

}  // namespace mmscm
