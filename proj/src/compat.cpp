// SPDX-License-Identifier: Apache-2.0
#include "mmscm/compat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mmscm/units.hpp"

namespace mmscm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

double directional_gain_db(const PowerMap& map, double bearing_deg,
                           double elevation_deg) {
  return map.gain_db(bearing_deg, elevation_deg);
}

double path_loss_between_db(const PropagationMap& prop, double bearing_deg,
                            double d_m, double f_hz) {
  if (!(d_m >= 1.0)) {
    throw std::invalid_argument("path loss model anchored at 1 m: d >= 1");
  }
  double n = prop.exponent_at(bearing_deg);
  return -fspl_db(1.0, f_hz) + 10.0 * n * std::log10(d_m);
}

double received_psd_dbm_mhz(const SpectrumConsumptionModel& tx,
                            const SpectrumConsumptionModel& rx, double f_hz) {
  if (!tx.is_tx() || rx.is_tx()) {
    throw std::invalid_argument("received_psd wants a tx model and an rx model");
  }
  Position3D tp = tx.location.representative();
  Position3D rp = rx.location.representative();
  double d = geometry::link_distance_3d(tp, rp);
  if (d < 1e-9) {
    throw std::invalid_argument("coincident tx/rx locations");
  }

  double mask_db = tx.spectrum_mask->eval_db(f_hz);
  if (mask_db == -kInf) return -kInf;  // no emission at this frequency

  double b_tx_rx = geometry::bearing_deg(tp, rp);
  double b_rx_tx = geometry::bearing_deg(rp, tp);
  double el_tx = geometry::elevation_angle_deg(tp, rp);
  double el_rx = geometry::elevation_angle_deg(rp, tp);

  double g_tx = directional_gain_db(
      tx.power_map, b_tx_rx - tx.boresight_azimuth_deg, el_tx);
  double g_rx = directional_gain_db(
      rx.power_map, b_rx_tx - rx.boresight_azimuth_deg, el_rx);
  double loss = path_loss_between_db(tx.propagation_map, b_tx_rx,
                                     std::max(d, 1.0), f_hz);
  return tx.reference_power_dbm + mask_db + g_tx - loss + g_rx;
}

std::vector<double> compat_frequency_grid(
    std::span<const SpectrumConsumptionModel* const> txs,
    const SpectrumConsumptionModel& rx) {
  std::vector<double> freqs;
  auto add_mask = [&freqs](const FrequencyMask& m) {
    for (const auto& b : m.breakpoints()) freqs.push_back(b.freq_hz);
  };
  if (rx.underlay_mask) add_mask(*rx.underlay_mask);
  for (const auto* tx : txs) {
    if (tx != nullptr && tx->spectrum_mask) add_mask(*tx->spectrum_mask);
  }
  std::sort(freqs.begin(), freqs.end());
  freqs.erase(std::unique(freqs.begin(), freqs.end()), freqs.end());
  if (freqs.empty()) {
    throw std::invalid_argument("no mask breakpoints to build a grid from");
  }
  std::vector<double> grid;
  grid.reserve(freqs.size() * 2 - 1);
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    grid.push_back(freqs[i]);
    if (i + 1 < freqs.size()) {
      grid.push_back(0.5 * (freqs[i] + freqs[i + 1]));
    }
  }
  return grid;
}

CompatReport aggregate_margin(
    std::span<const SpectrumConsumptionModel* const> txs,
    const SpectrumConsumptionModel& rx, std::span<const double> freqs_hz) {
  if (rx.is_tx()) {
    throw std::invalid_argument("aggregate_margin wants a receiver model");
  }
  if (freqs_hz.empty()) {
    throw std::invalid_argument("empty frequency grid");
  }

  CompatReport report;
  report.per_interferer.reserve(txs.size());
  for (const auto* tx : txs) {
    if (tx == nullptr) throw std::invalid_argument("null tx model");
    report.per_interferer.push_back({tx->id, -kInf});
  }

  report.margin_db = kInf;
  report.worst_freq_hz = freqs_hz.front();
  for (double f : freqs_hz) {
    double agg_mw = 0.0;
    for (std::size_t i = 0; i < txs.size(); ++i) {
      double psd = received_psd_dbm_mhz(*txs[i], rx, f);
      if (psd > report.per_interferer[i].received_psd_peak_dbm_mhz) {
        report.per_interferer[i].received_psd_peak_dbm_mhz = psd;
      }
      if (psd > -kInf) agg_mw += db_to_linear(psd);
    }
    if (agg_mw <= 0.0) continue;  // nothing received at this frequency
    double allowed = rx.reference_power_dbm + rx.underlay_mask->eval_db(f);
    double margin = allowed - linear_to_db(agg_mw);
    if (margin < report.margin_db) {
      report.margin_db = margin;
      report.worst_freq_hz = f;
    }
  }
  report.compatible = report.margin_db >= 0.0;
  return report;
}

CompatReport aggregate_margin(std::span<const SpectrumConsumptionModel> txs,
                              const SpectrumConsumptionModel& rx) {
  std::vector<const SpectrumConsumptionModel*> ptrs;
  ptrs.reserve(txs.size());
  for (const auto& t : txs) ptrs.push_back(&t);
  return aggregate_margin(
      std::span<const SpectrumConsumptionModel* const>(ptrs), rx,
      compat_frequency_grid(ptrs, rx));
}

}  // namespace mmscm
