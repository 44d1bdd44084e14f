// SPDX-License-Identifier: Apache-2.0
#include "mmscm/channel_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "mmscm/units.hpp"

namespace mmscm {

namespace {

std::size_t bin_count_for(double bin_width_deg) {
  if (!(bin_width_deg > 0.0)) {
    throw std::invalid_argument("bin width must be positive");
  }
  double n = 360.0 / bin_width_deg;
  double rounded = std::round(n);
  if (std::fabs(n - rounded) > 1e-9 || rounded < 2) {
    throw std::invalid_argument("bin width must divide 360 degrees");
  }
  return static_cast<std::size_t>(rounded);
}

void check_pas(const PowerAngularSpectrum& pas) {
  std::size_t n = bin_count_for(pas.bin_width_deg);
  if (pas.bins_mw.size() != n) {
    throw std::invalid_argument("PAS bin count inconsistent with bin width");
  }
  for (double v : pas.bins_mw) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("PAS bins must be positive and finite");
    }
  }
}

double mean_bin_power_mw(const PowerAngularSpectrum& pas) {
  double sum = 0.0;
  for (double v : pas.bins_mw) sum += v;
  return sum / static_cast<double>(pas.bins_mw.size());
}

}  // namespace

PowerAngularSpectrum average_pas(const PowerAngularRecord& rec,
                                 double bin_width_deg) {
  std::size_t n = bin_count_for(bin_width_deg);
  if (rec.samples.empty()) {
    throw std::invalid_argument("record has no samples");
  }

  std::vector<double> sum(n, 0.0);
  std::vector<std::size_t> count(n, 0);
  for (const auto& s : rec.samples) {
    auto bin = static_cast<std::size_t>(s.azimuth_deg / bin_width_deg);
    if (bin >= n) bin = n - 1;  // guard the 360-epsilon edge
    sum[bin] += db_to_linear(s.power_dbm);
    ++count[bin];
  }

  std::size_t occupied = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (count[i] > 0) ++occupied;
  }
  if (occupied <= 1) {
    throw std::runtime_error("no rotation detected (all samples in one bin)");
  }

  PowerAngularSpectrum pas;
  pas.bin_width_deg = bin_width_deg;
  pas.bins_mw.assign(n, 0.0);
  pas.interpolated.assign(n, 0);
  pas.link_id = rec.link_id;
  pas.distance_m = rec.link_distance_m > 0.0
                       ? rec.link_distance_m
                       : geometry::link_distance_3d(rec.tx_pos, rec.rx_pos);

  for (std::size_t i = 0; i < n; ++i) {
    if (count[i] > 0) pas.bins_mw[i] = sum[i] / static_cast<double>(count[i]);
  }

  // Fill empty bins by circular linear interpolation (in mW) between the
  // nearest occupied neighbours.
  for (std::size_t i = 0; i < n; ++i) {
    if (count[i] > 0) continue;
    std::size_t left = i, right = i, dl = 0, dr = 0;
    do {
      left = (left + n - 1) % n;
      ++dl;
    } while (count[left] == 0);
    do {
      right = (right + 1) % n;
      ++dr;
    } while (count[right] == 0);
    double t = static_cast<double>(dl) / static_cast<double>(dl + dr);
    pas.bins_mw[i] =
        pas.bins_mw[left] + t * (pas.bins_mw[right] - pas.bins_mw[left]);
    pas.interpolated[i] = 1;
  }
  return pas;
}

double path_gain_db(const PowerAngularSpectrum& pas, double tx_power_dbm,
                    double elev_correction_db) {
  check_pas(pas);
  return linear_to_db(mean_bin_power_mw(pas)) - tx_power_dbm -
         elev_correction_db;
}

double elevation_correction_db(const AntennaPattern& pattern,
                               double zenith_deg) {
  return pattern.elevation_gain_db(zenith_deg);
}

double azimuth_gain_dbi(const PowerAngularSpectrum& pas) {
  check_pas(pas);
  double maxv = *std::max_element(pas.bins_mw.begin(), pas.bins_mw.end());
  return linear_to_db(maxv / mean_bin_power_mw(pas));
}

double aoa_deg(const PowerAngularSpectrum& pas) {
  check_pas(pas);
  std::size_t best = 0;
  for (std::size_t i = 1; i < pas.bins_mw.size(); ++i) {
    if (pas.bins_mw[i] > pas.bins_mw[best]) best = i;
  }
  return pas.bin_center_deg(best);
}

double k_factor_from_series(std::span<const double> linear_powers_mw) {
  if (linear_powers_mw.size() < 2) {
    throw std::invalid_argument("K estimate needs at least 2 power values");
  }
  double n = static_cast<double>(linear_powers_mw.size());
  double mean = 0.0;
  for (double v : linear_powers_mw) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("power series must be nonnegative finite");
    }
    mean += v;
  }
  mean /= n;
  double var = 0.0;
  for (double v : linear_powers_mw) var += (v - mean) * (v - mean);
  var /= (n - 1.0);

  if (var == 0.0) return 60.0;  // constant power: pure specular sentinel
  double v_spec = std::sqrt(std::max(mean * mean - var, 0.0));
  double denom = mean - v_spec;
  if (denom <= 0.0) return 60.0;
  double k = v_spec / denom;
  if (k <= 0.0) return -60.0;
  return std::clamp(linear_to_db(k), -60.0, 60.0);
}

double k_factor_moments(const PowerAngularRecord& rec, double aoa_deg,
                        double window_deg) {
  if (rec.samples.size() < 2) {
    throw std::invalid_argument("K estimate needs at least 2 scans");
  }
  if (!(window_deg > 0.0)) {
    throw std::invalid_argument("window must be positive");
  }

  // Segment the rotation into scans by accumulating the unwrapped azimuth.
  double cum = 0.0;
  double prev = rec.samples.front().azimuth_deg;
  std::vector<double> scan_sum;
  std::vector<std::size_t> scan_n;
  auto scan_of = [&](double c) {
    return static_cast<long>(std::floor(std::fabs(c) / 360.0));
  };
  for (const auto& s : rec.samples) {
    double delta = s.azimuth_deg - prev;
    if (delta > 180.0) delta -= 360.0;
    if (delta < -180.0) delta += 360.0;
    cum += delta;
    prev = s.azimuth_deg;
    auto idx = static_cast<std::size_t>(scan_of(cum));
    if (idx >= scan_sum.size()) {
      scan_sum.resize(idx + 1, 0.0);
      scan_n.resize(idx + 1, 0);
    }
    if (geometry::angular_deviation_deg(s.azimuth_deg, aoa_deg) <=
        window_deg / 2.0) {
      scan_sum[idx] += db_to_linear(s.power_dbm);
      ++scan_n[idx];
    }
  }

  std::vector<double> series;
  for (std::size_t i = 0; i < scan_sum.size(); ++i) {
    if (scan_n[i] > 0) {
      series.push_back(scan_sum[i] / static_cast<double>(scan_n[i]));
    }
  }
  if (series.size() < 2) {
    throw std::runtime_error("fewer than 2 scans cover the AoA window");
  }
  return k_factor_from_series(series);
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> values)
    : values_(std::move(values)) {
  if (values_.empty()) {
    throw std::invalid_argument("empirical CDF needs at least one value");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("empirical CDF values must be finite");
    }
  }
  std::sort(values_.begin(), values_.end());
}

double EmpiricalCdf::quantile(double q) const {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw std::invalid_argument("quantile probability outside [0,1]");
  }
  double n = static_cast<double>(values_.size());
  long idx = static_cast<long>(std::ceil(q * n)) - 1;
  idx = std::clamp<long>(idx, 0, static_cast<long>(values_.size()) - 1);
  return values_[static_cast<std::size_t>(idx)];
}

double EmpiricalCdf::cdf(double x) const {
  auto it = std::upper_bound(values_.begin(), values_.end(), x);
  return static_cast<double>(it - values_.begin()) /
         static_cast<double>(values_.size());
}

EmpiricalCdf abg_cdf(std::vector<double> gains_dbi) {
  return EmpiricalCdf(std::move(gains_dbi));
}

StackGrid spectrum_stack_grid(const SidewalkDataset& ds,
                              double bin_width_deg) {
  if (ds.records.empty()) {
    throw std::invalid_argument("empty dataset");
  }
  StackGrid grid;
  for (const auto& rec : ds.records) {
    PowerAngularSpectrum pas = average_pas(rec, bin_width_deg);
    if (grid.bin_centers_deg.empty()) {
      for (std::size_t i = 0; i < pas.size(); ++i) {
        grid.bin_centers_deg.push_back(pas.bin_center_deg(i));
      }
    }
    grid.distances_m.push_back(pas.distance_m);
    std::vector<double> row;
    row.reserve(pas.size());
    for (double v : pas.bins_mw) row.push_back(linear_to_db(v));
    grid.power_dbm.push_back(std::move(row));
  }
  // Records are distance-sorted on parse; enforce for hand-built datasets.
  std::vector<std::size_t> order(grid.distances_m.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return grid.distances_m[a] < grid.distances_m[b];
  });
  StackGrid sorted;
  sorted.bin_centers_deg = grid.bin_centers_deg;
  for (std::size_t i : order) {
    sorted.distances_m.push_back(grid.distances_m[i]);
    sorted.power_dbm.push_back(std::move(grid.power_dbm[i]));
  }
  return sorted;
}

std::string serialize_stack_grid(const StackGrid& grid) {
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return std::string(buf);
  };
  std::ostringstream out;
  out << "distance_m";
  for (double c : grid.bin_centers_deg) out << " " << fmt(c);
  out << "\n";
  for (std::size_t r = 0; r < grid.distances_m.size(); ++r) {
    out << fmt(grid.distances_m[r]);
    for (double v : grid.power_dbm[r]) out << " " << fmt(v);
    out << "\n";
  }
  return out.str();
}

LinkMetrics compute_link_metrics(const PowerAngularRecord& rec,
                                 double tx_power_dbm,
                                 const MetricsOptions& opts) {
  PowerAngularSpectrum pas = average_pas(rec, opts.bin_width_deg);
  double corr = 0.0;
  if (opts.elevation_pattern != nullptr) {
    corr = elevation_correction_db(
        *opts.elevation_pattern,
        geometry::zenith_angle_deg(rec.tx_pos, rec.rx_pos));
  }
  LinkMetrics m;
  m.link_id = rec.link_id;
  m.distance_m = pas.distance_m;
  m.path_gain_db = path_gain_db(pas, tx_power_dbm, corr);
  m.azimuth_gain_dbi = azimuth_gain_dbi(pas);
  m.aoa_deg = aoa_deg(pas);
  if (opts.compute_k) {
    try {
      m.k_factor_db = k_factor_moments(rec, m.aoa_deg, opts.k_window_deg);
    } catch (const std::exception&) {
      m.k_factor_db.reset();  // sparse or single-scan record
    }
  }
  return m;
}

std::vector<LinkMetrics> compute_dataset_metrics(const SidewalkDataset& ds,
                                                 const MetricsOptions& opts) {
  std::vector<LinkMetrics> out;
  out.reserve(ds.records.size());
  for (const auto& rec : ds.records) {
    out.push_back(compute_link_metrics(rec, ds.tx_power_dbm, opts));
  }
  return out;
}

}  // namespace mmscm
