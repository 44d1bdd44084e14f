// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mmscm/ingest.hpp"
#include "mmscm/pathloss.hpp"
#include "mmscm/rng.hpp"

namespace mmscm {

// One sidewalk scenario: fitted model parameters plus site geometry, used to
// regenerate datasets with the same statistics as the campaign summaries.
struct SidewalkPreset {
  std::string name;
  Condition condition = Condition::standard;
  double length_m = 0.0;
  int link_count = 0;
  double slope_n = 0.0;      // path gain slope (10*n*log10 d)
  double intercept_db = 0.0;
  double sigma_db = 0.0;     // RMS shadowing about the fit
  double median_abg_dbi = 0.0;
  double p10_abg_dbi = 0.0;
  double cw_angle_deg = 0.0;  // sidewalk bearing, clockwise from north
  double rx_height_m = 0.0;
  double tx_height_m = 1.5;
};

const std::vector<SidewalkPreset>& sidewalk_presets();
// nullptr when the name is unknown.
const SidewalkPreset* find_preset(const std::string& name);
// Throws std::invalid_argument listing known names.
const SidewalkPreset& preset_or_throw(const std::string& name);

// Floor level (dB < 0) such that a Gaussian main lobe with the given HPBW,
// clamped at that floor, has the requested beamforming gain over a full
// rotation. Bisection on the closed-form mean; throws when the target is
// outside the achievable (0, max] range.
double beam_floor_for_abg(double hpbw_deg, double target_abg_dbi);

// Mean linear level of the clamped Gaussian beam shape over 360 degrees.
double beam_shape_mean_linear(double hpbw_deg, double floor_db);
// Shape value (dB <= 0) at an azimuth offset from the beam center.
double beam_shape_db(double offset_deg, double hpbw_deg, double floor_db);

// Log-spaced distances with lognormal shadowing about the preset fit line.
std::vector<PgPoint> synth_pg_points(const SidewalkPreset& preset, int count,
                                     double d_min_m, double d_max_m,
                                     std::uint64_t seed);

// Full control over one synthetic rotation record.
struct RecordSpec {
  std::string link_id;
  Position3D tx_pos;
  Position3D rx_pos;
  double path_gain_db = -100.0;  // embedded Eq.-style path gain, shadow included
  double beam_center_deg = 0.0;  // apparent AoA at the receiver
  int scans = 40;
  int samples_per_scan = 400;
  double k_linear = 10.0;        // per-scan Rician fading factor
  double beam_hpbw_deg = 10.0;
  double beam_floor_db = -25.0;
  double tx_power_dbm = 22.0;
};

PowerAngularRecord synth_record(const RecordSpec& spec, RandomStream& rng);

struct SynthConfig {
  std::string preset = "Int-N-E";
  int links = 0;  // 0: use the preset's link count
  int scans = 40;
  int samples_per_scan = 400;
  double k_factor_db = 10.0;
  double beam_hpbw_deg = 10.0;
  std::optional<double> d_min_m;  // default: clear of the height offset
  std::optional<double> d_max_m;  // default: sidewalk length
  std::uint64_t seed = 1;
};

// Dataset with links along the preset sidewalk bearing, beam centered on the
// direct Tx bearing, shadowing and beamforming gain matching the preset.
SidewalkDataset synth_dataset(const SynthConfig& cfg);

}  // namespace mmscm
