// SPDX-License-Identifier: Apache-2.0
#include "mmscm/compat.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "mmscm/ingest.hpp"
#include "mmscm/rng.hpp"
#include "mmscm/units.hpp"

using namespace mmscm;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

FrequencyMask flat_band(double lo_hz, double hi_hz) {
  return FrequencyMask(std::vector<MaskBreakpoint>{{lo_hz, 0.0}, {hi_hz, 0.0}});
}

FrequencyMask trapezoid(double center_hz, double bw_hz) {
  double h = bw_hz / 2.0;
  return FrequencyMask(std::vector<MaskBreakpoint>{{center_hz - bw_hz, -40.0},
                                                   {center_hz - h, 0.0},
                                                   {center_hz + h, 0.0},
                                                   {center_hz + bw_hz, -40.0}});
}

SpectrumConsumptionModel make_tx(std::string id, double ref_dbm,
                                 Position3D pos, FrequencyMask mask,
                                 const PowerMap& map, double exponent,
                                 double boresight_deg = 0.0) {
  SpectrumConsumptionModel m;
  m.kind = SpectrumConsumptionModel::Kind::transmitter;
  m.id = std::move(id);
  m.reference_power_dbm = ref_dbm;
  m.boresight_azimuth_deg = boresight_deg;
  m.spectrum_mask = std::move(mask);
  m.power_map = map;
  m.propagation_map = PropagationMap::uniform(exponent);
  m.schedule = {0, 86400};
  m.location = {ScmLocation::Kind::point, {pos}};
  return m;
}

SpectrumConsumptionModel make_rx(std::string id, double ref_dbm,
                                 Position3D pos, FrequencyMask mask,
                                 const PowerMap& map, double exponent,
                                 double boresight_deg = 0.0) {
  SpectrumConsumptionModel m = make_tx(std::move(id), ref_dbm, pos,
                                       std::move(mask), map, exponent,
                                       boresight_deg);
  m.kind = SpectrumConsumptionModel::Kind::receiver;
  m.underlay_mask = std::move(*m.spectrum_mask);
  m.spectrum_mask.reset();
  return m;
}

const PowerMap& iso_map() {
  static PowerMap m = PowerMap::from_cuts(isotropic_pattern(0.0), 30.0);
  return m;
}

}  // namespace

TEST_CASE("anchored log-distance loss matches hand constants") {
  // 20*log10(4*pi*28e9/c) = 61.3909 dB at one metre.
  PropagationMap n2 = PropagationMap::uniform(2.0);
  CHECK(path_loss_between_db(n2, 0.0, 1.0, 28e9) ==
        doctest::Approx(61.3909).epsilon(1e-5));
  CHECK(path_loss_between_db(n2, 0.0, 100.0, 28e9) ==
        doctest::Approx(101.3909).epsilon(1e-5));
  PropagationMap n28 = PropagationMap::uniform(2.8);
  CHECK(path_loss_between_db(n28, 90.0, 100.0, 28e9) ==
        doctest::Approx(117.3909).epsilon(1e-5));
  CHECK_THROWS_AS(path_loss_between_db(n2, 0.0, 0.5, 28e9),
                  std::invalid_argument);
}

TEST_CASE("single co-channel pair reproduces the hand Friis budget") {
  FrequencyMask band = flat_band(27.9995e9, 28.0005e9);
  SpectrumConsumptionModel tx =
      make_tx("tx-1", -47.0, {0.0, 0.0, 1.5}, band, iso_map(), 2.0);
  SpectrumConsumptionModel rx =
      make_rx("rx-1", -80.0, {100.0, 0.0, 1.5}, band, iso_map(), 2.0);

  // EIRP PSD -47, free-space n=2 over 100 m: -47 - 101.3909 = -148.3909.
  double psd = received_psd_dbm_mhz(tx, rx, 28e9);
  CHECK(psd == doctest::Approx(-148.3909).epsilon(1e-5));
  CHECK(received_psd_dbm_mhz(tx, rx, 27e9) == -kInf);

  std::vector<SpectrumConsumptionModel> txs{tx};
  CompatReport r = aggregate_margin(std::span<const SpectrumConsumptionModel>(txs), rx);
  CHECK(r.margin_db == doctest::Approx(68.3909).epsilon(1e-5));
  CHECK(r.compatible);
  REQUIRE(r.per_interferer.size() == 1);
  CHECK(r.per_interferer[0].tx_id == "tx-1");
  CHECK(r.per_interferer[0].received_psd_peak_dbm_mhz ==
        doctest::Approx(-148.3909).epsilon(1e-5));
}

TEST_CASE("boundary and pairing rules for the aggregate") {
  FrequencyMask band = flat_band(27.9995e9, 28.0005e9);
  SpectrumConsumptionModel tx =
      make_tx("tx-1", -47.0, {0.0, 0.0, 1.5}, band, iso_map(), 2.0);
  SpectrumConsumptionModel rx =
      make_rx("rx-1", -80.0, {100.0, 0.0, 1.5}, band, iso_map(), 2.0);

  std::vector<SpectrumConsumptionModel> one{tx};
  double m1 = aggregate_margin(std::span<const SpectrumConsumptionModel>(one), rx)
                  .margin_db;

  // One interferer raised exactly to the allowance: margin 0, still passes.
  SpectrumConsumptionModel at_limit = tx;
  at_limit.reference_power_dbm += m1;
  std::vector<SpectrumConsumptionModel> limit{at_limit};
  CompatReport r0 =
      aggregate_margin(std::span<const SpectrumConsumptionModel>(limit), rx);
  CHECK(r0.margin_db == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
  CHECK(r0.compatible);

  // Two equal interferers each 3.01 dB under the allowance sum to margin 0.
  SpectrumConsumptionModel under = tx;
  under.reference_power_dbm += m1 - 10.0 * std::log10(2.0);
  std::vector<SpectrumConsumptionModel> two{under, under};
  two[1].id = "tx-2";
  CompatReport r2 =
      aggregate_margin(std::span<const SpectrumConsumptionModel>(two), rx);
  CHECK(r2.margin_db == doctest::Approx(0.0).scale(1.0).epsilon(1e-3));
  REQUIRE(r2.per_interferer.size() == 2);
  CHECK(r2.per_interferer[0].received_psd_peak_dbm_mhz ==
        doctest::Approx(r2.per_interferer[1].received_psd_peak_dbm_mhz));

  // Doubling identical power is exactly +3.0103 dB off the margin.
  std::vector<SpectrumConsumptionModel> pair{tx, tx};
  pair[1].id = "tx-2";
  double m2 = aggregate_margin(std::span<const SpectrumConsumptionModel>(pair), rx)
                  .margin_db;
  CHECK(m1 - m2 == doctest::Approx(10.0 * std::log10(2.0)).epsilon(1e-9));
}

TEST_CASE("no interferers means unbounded margin") {
  FrequencyMask band = flat_band(27.9995e9, 28.0005e9);
  SpectrumConsumptionModel rx =
      make_rx("rx-1", -80.0, {0.0, 0.0, 1.5}, band, iso_map(), 2.0);
  std::vector<SpectrumConsumptionModel> none;
  CompatReport r =
      aggregate_margin(std::span<const SpectrumConsumptionModel>(none), rx);
  CHECK(r.margin_db == kInf);
  CHECK(r.compatible);
  CHECK(r.per_interferer.empty());
}

TEST_CASE("worst frequency lands on the tightest mask breakpoint") {
  FrequencyMask tx_band = flat_band(27.999e9, 28.001e9);
  FrequencyMask dip(std::vector<MaskBreakpoint>{
      {27.999e9, 0.0}, {28e9, -10.0}, {28.001e9, 0.0}});
  SpectrumConsumptionModel tx =
      make_tx("tx-1", -47.0, {0.0, 0.0, 1.5}, tx_band, iso_map(), 2.0);
  SpectrumConsumptionModel rx =
      make_rx("rx-1", -80.0, {100.0, 0.0, 1.5}, dip, iso_map(), 2.0);
  std::vector<SpectrumConsumptionModel> txs{tx};
  CompatReport r =
      aggregate_margin(std::span<const SpectrumConsumptionModel>(txs), rx);
  CHECK(r.worst_freq_hz == doctest::Approx(28e9));
  CHECK(r.margin_db == doctest::Approx(58.3909).epsilon(1e-5));
}

TEST_CASE("emission outside the underlay span has zero tolerance") {
  SpectrumConsumptionModel tx = make_tx("tx-1", -47.0, {0.0, 0.0, 1.5},
                                        trapezoid(29e9, 1e6), iso_map(), 2.0);
  SpectrumConsumptionModel rx = make_rx("rx-1", -80.0, {100.0, 0.0, 1.5},
                                        trapezoid(28e9, 1e6), iso_map(), 2.0);
  std::vector<SpectrumConsumptionModel> txs{tx};
  CompatReport r =
      aggregate_margin(std::span<const SpectrumConsumptionModel>(txs), rx);
  CHECK(r.margin_db == -kInf);
  CHECK(!r.compatible);
}

TEST_CASE("frequency grid is the breakpoint union plus midpoints") {
  SpectrumConsumptionModel tx = make_tx(
      "tx-1", 0.0, {0.0, 0.0, 1.5},
      FrequencyMask(std::vector<MaskBreakpoint>{{150.0, 0.0}, {250.0, 0.0}}),
      iso_map(), 2.0);
  SpectrumConsumptionModel rx = make_rx(
      "rx-1", 0.0, {10.0, 0.0, 1.5},
      FrequencyMask(std::vector<MaskBreakpoint>{{100.0, 0.0}, {200.0, 0.0}}),
      iso_map(), 2.0);
  const SpectrumConsumptionModel* ptr = &tx;
  std::vector<double> grid = compat_frequency_grid(
      std::span<const SpectrumConsumptionModel* const>(&ptr, 1), rx);
  std::vector<double> want{100.0, 125.0, 150.0, 175.0, 200.0, 225.0, 250.0};
  CHECK(grid == want);
}

TEST_CASE("grid refinement cannot move the margin once breakpoints are in") {
  PowerMap horn = PowerMap::from_cuts(
      gaussian_horn_pattern(24.0, 10.0, 30.0, -15.0), 5.0);
  RandomStream rng(41);
  for (int rep = 0; rep < 20; ++rep) {
    // Narrow transmit band jittered inside the underlay span so every
    // margin stays finite.
    FrequencyMask band = trapezoid(28e9 + rng.uniform(-2e5, 2e5), 5e5);
    SpectrumConsumptionModel rx =
        make_rx("rx", -80.0, {0.0, 0.0, 1.5}, trapezoid(28e9, 1e6), horn, 2.8,
                rng.uniform(0.0, 360.0));
    std::vector<SpectrumConsumptionModel> txs;
    for (int k = 0; k < 3; ++k) {
      double d = rng.uniform(20.0, 400.0);
      double b = deg_to_rad(rng.uniform(0.0, 360.0));
      txs.push_back(make_tx("tx-" + std::to_string(k), rng.uniform(-60.0, -40.0),
                            {d * std::sin(b), d * std::cos(b), 1.5}, band, horn,
                            rng.uniform(2.0, 4.0), rng.uniform(0.0, 360.0)));
    }
    std::vector<const SpectrumConsumptionModel*> ptrs;
    for (const auto& t : txs) ptrs.push_back(&t);
    std::span<const SpectrumConsumptionModel* const> span(ptrs);

    std::vector<double> grid = compat_frequency_grid(span, rx);
    double base = aggregate_margin(span, rx, grid).margin_db;

    // Refining between existing points leaves the result alone.
    std::vector<double> fine;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
      fine.push_back(grid[i]);
      fine.push_back(0.5 * (grid[i] + grid[i + 1]));
    }
    fine.push_back(grid.back());
    double refined = aggregate_margin(span, rx, fine).margin_db;
    CHECK(refined == doctest::Approx(base).scale(1.0).epsilon(1e-9));

    // A grid missing breakpoints can only be optimistic.
    std::vector<double> coarse{grid.front(), 0.5 * (grid.front() + grid.back()),
                               grid.back()};
    double loose = aggregate_margin(span, rx, coarse).margin_db;
    CHECK(loose >= base - 1e-9);
  }
}

TEST_CASE("adding an interferer never raises the margin") {
  PowerMap horn = PowerMap::from_cuts(
      gaussian_horn_pattern(24.0, 10.0, 30.0, -15.0), 5.0);
  FrequencyMask band = trapezoid(28e9, 1e6);
  RandomStream rng(1234);
  int checks = 0;
  for (int rep = 0; rep < 100; ++rep) {
    SpectrumConsumptionModel rx =
        make_rx("rx", -80.0, {0.0, 0.0, 1.5}, band, horn, 2.8,
                rng.uniform(0.0, 360.0));
    std::vector<SpectrumConsumptionModel> txs;
    double prev = kInf;
    for (int k = 0; k < 4; ++k) {
      double d = rng.uniform(20.0, 500.0);
      double b = deg_to_rad(rng.uniform(0.0, 360.0));
      txs.push_back(make_tx("tx-" + std::to_string(k), rng.uniform(-60.0, -40.0),
                            {d * std::sin(b), d * std::cos(b), 1.5}, band, horn,
                            rng.uniform(2.0, 4.0), rng.uniform(0.0, 360.0)));
      double m =
          aggregate_margin(std::span<const SpectrumConsumptionModel>(txs), rx)
              .margin_db;
      CHECK(m <= prev + 1e-9);
      prev = m;
      ++checks;
    }
  }
  CHECK(checks == 400);
}

TEST_CASE("argument validation") {
  FrequencyMask band = flat_band(27.9995e9, 28.0005e9);
  SpectrumConsumptionModel tx =
      make_tx("tx-1", -47.0, {0.0, 0.0, 1.5}, band, iso_map(), 2.0);
  SpectrumConsumptionModel rx =
      make_rx("rx-1", -80.0, {100.0, 0.0, 1.5}, band, iso_map(), 2.0);

  CHECK_THROWS_AS(received_psd_dbm_mhz(rx, tx, 28e9), std::invalid_argument);
  SpectrumConsumptionModel on_top = rx;
  on_top.location = tx.location;
  CHECK_THROWS_AS(received_psd_dbm_mhz(tx, on_top, 28e9),
                  std::invalid_argument);

  std::vector<SpectrumConsumptionModel> txs{tx};
  CHECK_THROWS_AS(
      aggregate_margin(std::span<const SpectrumConsumptionModel>(txs), tx),
      std::invalid_argument);
  const SpectrumConsumptionModel* ptr = &tx;
  CHECK_THROWS_AS(
      aggregate_margin(std::span<const SpectrumConsumptionModel* const>(&ptr, 1),
                       rx, std::span<const double>()),
      std::invalid_argument);
}
