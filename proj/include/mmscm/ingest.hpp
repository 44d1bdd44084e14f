// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mmscm/geometry.hpp"

namespace mmscm {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AngularSample {
  double time_s = 0.0;
  double azimuth_deg = 0.0;  // clockwise from true north, in [0, 360)
  double power_dbm = 0.0;
};

struct PowerAngularRecord {
  std::string link_id;
  Position3D tx_pos;
  Position3D rx_pos;
  std::vector<AngularSample> samples;  // time nondecreasing
  int scan_count = 0;
  double link_distance_m = 0.0;  // recomputed from positions, never trusted

  // 16000+ samples and 40+ scans per the measurement protocol.
  bool full_fidelity() const {
    return samples.size() >= 16000 && scan_count >= 40;
  }
};

enum class Condition {
  standard,
  no_leaves,
  tx_raised,
  swap,
  street,
  wall,
  adjacent,
};

enum class VisualLos { VLOS, VNLOS };

Condition condition_from_string(std::string_view s);
std::string to_string(Condition c);
VisualLos visual_los_from_string(std::string_view s);
std::string to_string(VisualLos v);

struct SidewalkDataset {
  std::string sidewalk_id;  // LOC-D-S[-C] notation
  Condition condition = Condition::standard;
  VisualLos visual_los = VisualLos::VNLOS;
  std::vector<PowerAngularRecord> records;  // sorted by link distance
  double tx_power_dbm = 22.0;
  double rx_nominal_azimuth_gain_dbi = 14.5;
  double rx_total_gain_dbi = 24.0;
};

// Rotating-receiver measurement file, versioned header `mms/1`.
SidewalkDataset parse_measurement_file(const std::string& path);
SidewalkDataset parse_measurement_text(std::string_view text,
                                       const std::string& origin = "<text>");
std::string serialize_measurement(const SidewalkDataset& ds);
void write_measurement_file(const SidewalkDataset& ds,
                            const std::string& path);

struct PatternKnot {
  double angle_deg;    // strictly increasing within a cut, covering [-180, 180]
  double rel_gain_db;  // <= 0 after normalization
};

struct AntennaPattern {
  std::vector<PatternKnot> azimuth_cut;
  std::vector<PatternKnot> elevation_cut;
  double peak_gain_dbi = 0.0;

  // Relative gain (dB <= 0) at an angle in degrees; the query wraps into
  // [-180, 180]. Linear-in-dB interpolation between knots.
  double azimuth_gain_db(double angle_deg) const;
  double elevation_gain_db(double angle_deg) const;
};

// Two-cut normalized pattern file, versioned header `pat/1`.
AntennaPattern parse_antenna_pattern(const std::string& path);
AntennaPattern parse_antenna_pattern_text(std::string_view text,
                                          const std::string& origin = "<text>");
std::string serialize_antenna_pattern(const AntennaPattern& p);

AntennaPattern isotropic_pattern(double peak_gain_dbi = 0.0);
// Gaussian main lobe with the given half-power beamwidths, clamped at
// floor_db; 1-degree knot spacing.
AntennaPattern gaussian_horn_pattern(double peak_gain_dbi, double az_hpbw_deg,
                                     double el_hpbw_deg, double floor_db);

struct ValidationWarning {
  std::string link_id;  // empty for dataset-level findings
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationWarning> warnings;
  bool clean() const { return warnings.empty(); }
};

std::ostream& operator<<(std::ostream& os, const ValidationReport& report);

// Warnings only: implied path gain outside the sounder's [-161, -62] dB
// capability, short records, low scan counts, duplicate link distances.
ValidationReport validate_dataset(const SidewalkDataset& ds);

}  // namespace mmscm
