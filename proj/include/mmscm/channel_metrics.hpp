// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mmscm/ingest.hpp"

namespace mmscm {

// Time-averaged power vs azimuth for one link. Bin powers are linear mW and
// strictly positive; bins with no samples are filled by circular
// interpolation and flagged.
struct PowerAngularSpectrum {
  double bin_width_deg = 1.0;
  std::vector<double> bins_mw;
  std::vector<std::uint8_t> interpolated;
  double distance_m = 0.0;
  std::string link_id;

  std::size_t size() const { return bins_mw.size(); }
  double bin_center_deg(std::size_t i) const {
    return (static_cast<double>(i) + 0.5) * bin_width_deg;
  }
};

PowerAngularSpectrum average_pas(const PowerAngularRecord& rec,
                                 double bin_width_deg = 1.0);

// Eq.-style path gain: circular mean of the PAS referred to the transmit
// power, with an optional elevation-mismatch correction (dB, <= 0).
double path_gain_db(const PowerAngularSpectrum& pas, double tx_power_dbm,
                    double elev_correction_db = 0.0);

// Relative elevation-cut gain at the zenith mismatch angle.
double elevation_correction_db(const AntennaPattern& pattern,
                               double zenith_deg);

// Azimuth beamforming gain: max over bins relative to the azimuthal mean.
double azimuth_gain_dbi(const PowerAngularSpectrum& pas);

// Center angle of the strongest bin; ties break toward the smallest angle.
double aoa_deg(const PowerAngularSpectrum& pas);

// Moment-method K estimate over a linear power series, dB in [-60, 60].
double k_factor_from_series(std::span<const double> linear_powers_mw);

// Per-scan mean power within +-window/2 of the AoA, then the moment method.
double k_factor_moments(const PowerAngularRecord& rec, double aoa_deg,
                        double window_deg = 10.0);

class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::vector<double> values);

  // Lower-interpolation quantile: the ceil(q*n)-th smallest value.
  double quantile(double q) const;
  double median() const { return quantile(0.5); }
  double cdf(double x) const;  // fraction of values <= x
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> values_;  // sorted ascending
};

EmpiricalCdf abg_cdf(std::vector<double> gains_dbi);

struct StackGrid {
  std::vector<double> bin_centers_deg;
  std::vector<double> distances_m;          // ascending
  std::vector<std::vector<double>> power_dbm;  // row per distance
};

StackGrid spectrum_stack_grid(const SidewalkDataset& ds,
                              double bin_width_deg = 1.0);
std::string serialize_stack_grid(const StackGrid& grid);

struct LinkMetrics {
  std::string link_id;
  double distance_m = 0.0;
  double path_gain_db = 0.0;
  double azimuth_gain_dbi = 0.0;
  double aoa_deg = 0.0;
  std::optional<double> k_factor_db;
};

struct MetricsOptions {
  double bin_width_deg = 1.0;
  // When set, applies the elevation correction from the link's zenith
  // mismatch angle using this pattern's elevation cut.
  const AntennaPattern* elevation_pattern = nullptr;
  double k_window_deg = 10.0;
  bool compute_k = true;
};

LinkMetrics compute_link_metrics(const PowerAngularRecord& rec,
                                 double tx_power_dbm,
                                 const MetricsOptions& opts = {});
std::vector<LinkMetrics> compute_dataset_metrics(const SidewalkDataset& ds,
                                                 const MetricsOptions& opts = {});

}  // namespace mmscm
