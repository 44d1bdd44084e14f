// SPDX-License-Identifier: Apache-2.0
#include "mmscm/synth.hpp"

#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "mmscm/ingest.hpp"
#include "mmscm/units.hpp"

using namespace mmscm;

TEST_CASE("preset table carries the published per-sidewalk statistics") {
  const auto& presets = sidewalk_presets();
  CHECK(presets.size() == 32);

  const SidewalkPreset* ne = find_preset("Int-N-E");
  REQUIRE(ne != nullptr);
  CHECK(ne->length_m == doctest::Approx(507.0));
  CHECK(ne->link_count == 101);
  CHECK(ne->slope_n == doctest::Approx(-3.5));
  CHECK(ne->intercept_db == doctest::Approx(-36.8));
  CHECK(ne->sigma_db == doctest::Approx(4.3));
  CHECK(ne->median_abg_dbi == doctest::Approx(14.1));
  CHECK(ne->p10_abg_dbi == doctest::Approx(12.3));
  CHECK(ne->cw_angle_deg == doctest::Approx(120.0));
  CHECK(ne->rx_height_m == doctest::Approx(15.0));
  CHECK(ne->tx_height_m == doctest::Approx(1.5));
  CHECK(ne->condition == Condition::standard);

  const SidewalkPreset* sw = find_preset("Int-S-W");
  REQUIRE(sw != nullptr);
  CHECK(sw->length_m == doctest::Approx(317.0));
  CHECK(sw->link_count == 100);
  CHECK(sw->slope_n == doctest::Approx(-3.6));
  CHECK(sw->intercept_db == doctest::Approx(-39.2));
  CHECK(sw->sigma_db == doctest::Approx(3.4));
  CHECK(sw->median_abg_dbi == doctest::Approx(12.9));

  CHECK(find_preset("Bri-N-E")->rx_height_m == doctest::Approx(6.0));
  CHECK(find_preset("Roof-S-W")->rx_height_m == doctest::Approx(60.0));

  // Condition variants: raised transmitter and swapped endpoints.
  const SidewalkPreset* raised = find_preset("Int-N-E-10ft");
  REQUIRE(raised != nullptr);
  CHECK(raised->condition == Condition::tx_raised);
  CHECK(raised->tx_height_m == doctest::Approx(3.048));
  const SidewalkPreset* swap = find_preset("Int-W-N-Swap");
  REQUIRE(swap != nullptr);
  CHECK(swap->condition == Condition::swap);
  CHECK(swap->rx_height_m == doctest::Approx(1.5));
  CHECK(swap->tx_height_m == doctest::Approx(15.0));

  CHECK(find_preset("nope") == nullptr);
  CHECK_THROWS_WITH_AS(preset_or_throw("nope"),
                       doctest::Contains("unknown preset 'nope'"),
                       std::invalid_argument);
}

TEST_CASE("parabolic beam shape with a sidelobe floor") {
  CHECK(beam_shape_db(0.0, 10.0, -25.0) == doctest::Approx(0.0));
  CHECK(beam_shape_db(5.0, 10.0, -25.0) == doctest::Approx(-3.0));
  CHECK(beam_shape_db(-5.0, 10.0, -25.0) == doctest::Approx(-3.0));
  CHECK(beam_shape_db(10.0, 10.0, -25.0) == doctest::Approx(-12.0));
  CHECK(beam_shape_db(90.0, 10.0, -25.0) == doctest::Approx(-25.0));
  CHECK(beam_shape_db(355.0, 10.0, -25.0) == doctest::Approx(-3.0));
  CHECK(beam_shape_db(365.0, 10.0, -25.0) == doctest::Approx(-3.0));
  CHECK(beam_shape_db(350.0, 10.0, -25.0) == doctest::Approx(-12.0));
}

TEST_CASE("floor calibration reproduces a requested beamforming gain") {
  for (double target : {14.1, 12.9, 10.4}) {
    double floor = beam_floor_for_abg(10.0, target);
    CHECK(floor < 0.0);
    CHECK(-linear_to_db(beam_shape_mean_linear(10.0, floor)) ==
          doctest::Approx(target).epsilon(1e-9));
  }
  // Raising the floor dilutes the beam: mean power up, gain down.
  CHECK(beam_shape_mean_linear(10.0, -10.0) > beam_shape_mean_linear(10.0, -30.0));
  // A 10-degree beam cannot reach 16 dBi no matter how deep the floor.
  CHECK_THROWS_WITH_AS(beam_floor_for_abg(10.0, 16.0),
                       doctest::Contains("not achievable"),
                       std::invalid_argument);
  CHECK_THROWS_AS(beam_floor_for_abg(10.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(beam_floor_for_abg(0.0, 10.0), std::invalid_argument);
}

TEST_CASE("scatter points follow the preset line") {
  const SidewalkPreset& p = *find_preset("Int-S-W");
  auto pts = synth_pg_points(p, 100, 10.0, 300.0, 5);
  REQUIRE(pts.size() == 100);
  CHECK(pts.front().distance_m == doctest::Approx(10.0));
  CHECK(pts.back().distance_m == doctest::Approx(300.0));
  for (const auto& pt : pts) {
    CHECK(pt.distance_m >= 10.0);
    CHECK(pt.distance_m <= 300.0 + 1e-9);
    double line = 10.0 * p.slope_n * std::log10(pt.distance_m) + p.intercept_db;
    CHECK(std::fabs(pt.path_gain_db - line) < 6.0 * p.sigma_db);
  }
  auto again = synth_pg_points(p, 100, 10.0, 300.0, 5);
  CHECK(pts[37].path_gain_db == again[37].path_gain_db);
  auto other = synth_pg_points(p, 100, 10.0, 300.0, 6);
  CHECK(pts[37].path_gain_db != other[37].path_gain_db);

  CHECK_THROWS_AS(synth_pg_points(p, 1, 10.0, 300.0, 5), std::invalid_argument);
  CHECK_THROWS_AS(synth_pg_points(p, 10, 300.0, 10.0, 5), std::invalid_argument);
}

TEST_CASE("synthetic rotation sweeps are deterministic and well formed") {
  RecordSpec spec;
  spec.link_id = "L1";
  spec.tx_pos = {0.0, 80.0, 1.5};
  spec.rx_pos = {0.0, 0.0, 15.0};
  spec.path_gain_db = -95.0;
  spec.beam_center_deg = 0.0;
  spec.scans = 3;
  spec.samples_per_scan = 90;

  RandomStream r1(11), r2(11), r3(12);
  PowerAngularRecord a = synth_record(spec, r1);
  PowerAngularRecord b = synth_record(spec, r2);
  PowerAngularRecord c = synth_record(spec, r3);

  REQUIRE(a.samples.size() == 270);
  CHECK(a.scan_count == 3);
  CHECK(a.link_distance_m == doctest::Approx(std::sqrt(80.0 * 80.0 + 13.5 * 13.5)));
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    CHECK(a.samples[i].azimuth_deg >= 0.0);
    CHECK(a.samples[i].azimuth_deg < 360.0);
    CHECK(a.samples[i].time_s == doctest::Approx(i / 90.0));
    CHECK(a.samples[i].power_dbm == b.samples[i].power_dbm);
    CHECK(a.samples[i].azimuth_deg == b.samples[i].azimuth_deg);
  }
  CHECK(a.samples[0].azimuth_deg != c.samples[0].azimuth_deg);

  RecordSpec bad = spec;
  bad.scans = 0;
  CHECK_THROWS_AS(synth_record(bad, r1), std::invalid_argument);
  bad = spec;
  bad.samples_per_scan = 1;
  CHECK_THROWS_AS(synth_record(bad, r1), std::invalid_argument);
}

TEST_CASE("synthetic datasets regenerate byte-identically per seed") {
  SynthConfig cfg;
  cfg.preset = "Int-N-E";
  cfg.links = 6;
  cfg.scans = 4;
  cfg.samples_per_scan = 60;
  cfg.seed = 9;

  SidewalkDataset ds = synth_dataset(cfg);
  CHECK(ds.sidewalk_id == "Int-N-E");
  CHECK(ds.condition == Condition::standard);
  CHECK(ds.visual_los == VisualLos::VLOS);
  CHECK(ds.tx_power_dbm == doctest::Approx(22.0));
  REQUIRE(ds.records.size() == 6);

  // Log-spaced from the default floor (height offset + 2 m) to the length.
  CHECK(ds.records.front().link_distance_m == doctest::Approx(15.5));
  CHECK(ds.records.back().link_distance_m == doctest::Approx(507.0));
  for (std::size_t i = 0; i + 1 < ds.records.size(); ++i) {
    CHECK(ds.records[i].link_distance_m <= ds.records[i + 1].link_distance_m);
  }
  CHECK(ds.records[0].link_id.substr(0, 9) == "Int-N-E-L");
  CHECK(ds.records[0].samples.size() == 240);

  CHECK(serialize_measurement(ds) == serialize_measurement(synth_dataset(cfg)));
  SynthConfig reseeded = cfg;
  reseeded.seed = 10;
  CHECK(serialize_measurement(ds) != serialize_measurement(synth_dataset(reseeded)));

  // Round trip through the interchange format.
  SidewalkDataset back = parse_measurement_text(serialize_measurement(ds));
  CHECK(back.records.size() == 6);
  CHECK(back.records[2].link_id == ds.records[2].link_id);

  SynthConfig bad = cfg;
  bad.preset = "Roof-B-N";  // 58.5 m height offset
  bad.d_min_m = 50.0;
  CHECK_THROWS_WITH_AS(synth_dataset(bad),
                       "d_min must exceed the Tx/Rx height offset",
                       std::invalid_argument);
  bad = cfg;
  bad.d_min_m = 100.0;
  bad.d_max_m = 50.0;
  CHECK_THROWS_AS(synth_dataset(bad), std::invalid_argument);
  bad = cfg;
  bad.links = 1;
  CHECK_THROWS_AS(synth_dataset(bad), std::invalid_argument);
  bad = cfg;
  bad.preset = "unknown";
  CHECK_THROWS_AS(synth_dataset(bad), std::invalid_argument);
}
