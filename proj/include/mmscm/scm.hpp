// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mmscm/geometry.hpp"
#include "mmscm/ingest.hpp"
#include "mmscm/pathloss.hpp"

namespace mmscm {

struct MaskBreakpoint {
  double freq_hz = 0.0;
  double rel_psd_db = 0.0;
};

// Piecewise-linear relative PSD vs frequency. Evaluates to -inf outside the
// breakpoint span: emissions/allowances are absent where undeclared.
class FrequencyMask {
 public:
  FrequencyMask() = default;
  explicit FrequencyMask(std::vector<MaskBreakpoint> breakpoints);

  double eval_db(double f_hz) const;
  const std::vector<MaskBreakpoint>& breakpoints() const { return points_; }
  double min_freq_hz() const { return points_.front().freq_hz; }
  double max_freq_hz() const { return points_.back().freq_hz; }
  FrequencyMask shifted(double df_hz) const;
  bool empty() const { return points_.empty(); }

 private:
  std::vector<MaskBreakpoint> points_;
};

using SpectrumMask = FrequencyMask;   // transmitter emissions
using UnderlayMask = FrequencyMask;   // receiver interference allowance

// Relative gain over the full sphere; azimuth is boresight-relative and
// wraps, elevation spans [-90, 90]. Grid payload is shared between copies.
class PowerMap {
 public:
  PowerMap() = default;
  static PowerMap from_grid(double resolution_deg,
                            std::vector<double> gain_db);
  // Cut-combination synthesis: az + el in dB, clamped at the deepest
  // measured level of either cut, then renormalized to a 0 dB maximum.
  static PowerMap from_cuts(const AntennaPattern& pattern,
                            double resolution_deg = 1.0);

  double gain_db(double azimuth_deg, double elevation_deg) const;  // bilinear
  double resolution_deg() const { return resolution_deg_; }
  int azimuth_count() const { return n_az_; }
  int elevation_count() const { return n_el_; }
  const std::vector<double>& grid() const { return *grid_; }
  bool empty() const { return !grid_; }

 private:
  double resolution_deg_ = 0.0;
  int n_az_ = 0;  // azimuth knots at 0, r, ..., 360 - r
  int n_el_ = 0;  // elevation knots at -90, ..., +90
  std::shared_ptr<const std::vector<double>> grid_;  // azimuth-major
};

// Per-azimuth-sector path-loss exponents; sectors cover [0, 360).
class PropagationMap {
 public:
  struct Sector {
    double start_deg = 0.0;
    double end_deg = 0.0;  // exclusive; sectors stored non-wrapping
    double exponent = 2.0;
    bool from_default = false;
  };

  PropagationMap() = default;
  static PropagationMap uniform(double exponent);
  // Input sectors must not overlap; [start, end) with start > end wrapping
  // through north. Gaps are filled with the default exponent and flagged.
  static PropagationMap from_sectors(std::span<const Sector> sectors,
                                     double default_exponent = 2.0);

  double exponent_at(double bearing_deg) const;
  bool is_default_at(double bearing_deg) const;
  const std::vector<Sector>& sectors() const { return sectors_; }
  double default_exponent() const { return default_exponent_; }
  bool empty() const { return sectors_.empty(); }

 private:
  std::vector<Sector> sectors_;  // sorted, contiguous over [0, 360)
  double default_exponent_ = 2.0;
};

struct SectorFit {
  double start_deg = 0.0;
  double end_deg = 0.0;
  PathGainFit fit;
};

// Measured fits populate sectors with |slope_n|.
PropagationMap propagation_map_from_fits(std::span<const SectorFit> fits,
                                         double default_exponent = 2.0);

struct Schedule {
  std::int64_t start_s = 0;
  std::int64_t end_s = 0;
};

struct ScmLocation {
  enum class Kind { point, volume, trajectory };
  Kind kind = Kind::point;
  std::vector<Position3D> geometry;  // point: 1; volume: 2 box corners;
                                     // trajectory: >= 2 waypoints
  Position3D representative() const;
};

std::string to_string(ScmLocation::Kind kind);
ScmLocation::Kind location_kind_from_string(std::string_view s);

struct SpectrumConsumptionModel {
  enum class Kind { transmitter, receiver };

  Kind kind = Kind::transmitter;
  std::string id;
  double reference_power_dbm = 0.0;     // tx: emission reference (dBm/MHz at
                                        // mask 0 dB); rx: allowed PSD
  double boresight_azimuth_deg = 0.0;   // compass heading of power-map zero
  std::optional<SpectrumMask> spectrum_mask;   // transmitter models only
  std::optional<UnderlayMask> underlay_mask;   // receiver models only
  PowerMap power_map;
  PropagationMap propagation_map;
  Schedule schedule;
  ScmLocation location;
  std::string extras_json = "{}";  // opaque optional constructs, canonical

  bool is_tx() const { return kind == Kind::transmitter; }
};

// Throws std::invalid_argument naming the violated invariant.
void validate_scm(const SpectrumConsumptionModel& scm);

SpectrumConsumptionModel build_tx_scm(
    std::string id, double reference_power_dbm, SpectrumMask mask,
    const AntennaPattern& pattern, PropagationMap prop, Schedule schedule,
    ScmLocation location, double boresight_azimuth_deg = 0.0,
    double map_resolution_deg = 1.0);

SpectrumConsumptionModel build_rx_scm(
    std::string id, double reference_power_dbm, UnderlayMask underlay,
    const AntennaPattern& pattern, PropagationMap prop, Schedule schedule,
    ScmLocation location, double boresight_azimuth_deg = 0.0,
    double map_resolution_deg = 1.0);

// Canonical JSON (schema `scm/1`): sorted keys, shortest round-trip floats,
// so serialize(parse(serialize(m))) is byte-identical.
std::string serialize_scm(const SpectrumConsumptionModel& scm);
SpectrumConsumptionModel parse_scm_text(std::string_view text,
                                        const std::string& origin = "<text>");
SpectrumConsumptionModel parse_scm_file(const std::string& path);
void write_scm_file(const SpectrumConsumptionModel& scm,
                    const std::string& path);

}  // namespace mmscm
