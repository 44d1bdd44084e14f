// SPDX-License-Identifier: Apache-2.0
#include "mmscm/channel_metrics.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "mmscm/rng.hpp"
#include "mmscm/synth.hpp"
#include "mmscm/units.hpp"

using namespace mmscm;

namespace {

// One sample per listed (azimuth, dBm) pair, monotone times.
PowerAngularRecord record_from(
    const std::vector<std::pair<double, double>>& az_dbm, int scans = 1) {
  PowerAngularRecord rec;
  rec.link_id = "L";
  rec.tx_pos = {0.0, 100.0, 1.5};
  rec.rx_pos = {0.0, 0.0, 15.0};
  rec.scan_count = scans;
  double t = 0.0;
  for (auto [az, dbm] : az_dbm) {
    rec.samples.push_back({t, az, dbm});
    t += 0.01;
  }
  rec.link_distance_m = geometry::link_distance_3d(rec.tx_pos, rec.rx_pos);
  return rec;
}

PowerAngularSpectrum uniform_pas(double level_dbm, std::size_t bins = 360) {
  PowerAngularSpectrum pas;
  pas.bin_width_deg = 360.0 / static_cast<double>(bins);
  pas.bins_mw.assign(bins, db_to_linear(level_dbm));
  pas.interpolated.assign(bins, 0);
  pas.distance_m = 100.0;
  return pas;
}

}  // namespace

TEST_CASE("PAS bins average their samples and fill gaps circularly") {
  // Bin 0 has two samples, bin 1 has one, bin 359 has one; the rest empty.
  PowerAngularRecord rec = record_from({{0.25, -70.0},
                                        {0.75, -80.0},
                                        {1.5, -90.0},
                                        {359.5, -90.0}});
  PowerAngularSpectrum pas = average_pas(rec, 1.0);
  REQUIRE(pas.size() == 360);
  double want0 = 0.5 * (db_to_linear(-70.0) + db_to_linear(-80.0));
  CHECK(pas.bins_mw[0] == doctest::Approx(want0));
  CHECK(pas.bins_mw[1] == doctest::Approx(db_to_linear(-90.0)));
  CHECK(pas.interpolated[0] == 0);
  CHECK(pas.interpolated[180] == 1);
  // Bin 180 sits exactly between the occupied bins 1 and 359: linear midpoint.
  CHECK(pas.bins_mw[180] ==
        doctest::Approx(db_to_linear(-90.0)).epsilon(1e-12));
  CHECK(pas.bins_mw[180] > 0.0);
}

TEST_CASE("PAS rejects a record that never rotates") {
  PowerAngularRecord rec = record_from({{10.2, -70.0}, {10.4, -71.0}});
  CHECK_THROWS_AS(average_pas(rec, 1.0), std::runtime_error);
}

TEST_CASE("PAS bin width must divide the circle") {
  PowerAngularRecord rec = record_from({{0.0, -70.0}, {90.0, -70.0}});
  CHECK_THROWS_AS(average_pas(rec, 7.0), std::invalid_argument);
  CHECK_NOTHROW(average_pas(rec, 0.5));
}

TEST_CASE("Gaussian-beam bin means match analytic bin integrals") {
  // Dense, equal sampling: each 1-degree bin mean must approach the
  // continuous average of the beam shape over that bin.
  const double hpbw = 10.0, floor_db = -30.0, center = 180.0;
  std::vector<std::pair<double, double>> samples;
  for (int i = 0; i < 7200; ++i) {
    double az = (i + 0.5) * 0.05;
    samples.push_back({az, beam_shape_db(az - center, hpbw, floor_db) - 70.0});
  }
  PowerAngularSpectrum pas = average_pas(record_from(samples), 1.0);
  for (int b = 0; b < 360; ++b) {
    // Independent fine quadrature of the same analytic shape.
    double acc = 0.0;
    const int fine = 200;
    for (int j = 0; j < fine; ++j) {
      double az = b + (j + 0.5) / fine;
      acc += db_to_linear(beam_shape_db(az - center, hpbw, floor_db) - 70.0);
    }
    double want_db = linear_to_db(acc / fine);
    // Within 0.1 dB of the continuous bin average.
    CHECK(linear_to_db(pas.bins_mw[b]) ==
          doctest::Approx(want_db).epsilon(1e-3));
  }
}

TEST_CASE("path gain is invariant under receiver rotation") {
  PowerAngularRecord rec = record_from({{0.5, -70.0},
                                        {90.5, -75.0},
                                        {180.5, -88.0},
                                        {270.5, -95.0}});
  PowerAngularSpectrum base = average_pas(rec, 1.0);
  double pg0 = path_gain_db(base, 22.0);
  for (double shift : {1.0, 37.0, 180.0, 359.0}) {
    PowerAngularRecord rot = rec;
    for (auto& s : rot.samples) {
      s.azimuth_deg = std::fmod(s.azimuth_deg + shift, 360.0);
    }
    // Re-sort times so the rotated record stays monotone (order irrelevant
    // to the PAS, but keep the record well formed).
    double t = 0.0;
    for (auto& s : rot.samples) s.time_s = (t += 0.01);
    double pg = path_gain_db(average_pas(rot, 1.0), 22.0);
    CHECK(std::fabs(pg - pg0) < 1e-9);
  }
}

TEST_CASE("path gain equals mean power referred to tx power") {
  PowerAngularSpectrum pas = uniform_pas(-80.0);
  CHECK(path_gain_db(pas, 22.0) == doctest::Approx(-102.0));
  // Elevation correction shifts the estimate up by the (negative) cut gain.
  CHECK(path_gain_db(pas, 22.0, -3.0) == doctest::Approx(-99.0));
}

TEST_CASE("azimuth gain: uniform, rectangular and single-bin beams") {
  CHECK(azimuth_gain_dbi(uniform_pas(-75.0)) == doctest::Approx(0.0));

  // 10-degree rectangular beam over 360 one-degree bins: 10*log10(36).
  PowerAngularSpectrum rect = uniform_pas(-200.0);
  for (int i = 100; i < 110; ++i) rect.bins_mw[i] = db_to_linear(-70.0);
  double expect = 10.0 * std::log10(36.0);
  // The -200 dBm floor adds a vanishing mean contribution.
  CHECK(azimuth_gain_dbi(rect) == doctest::Approx(expect).epsilon(1e-6));
  CHECK(azimuth_gain_dbi(rect) == doctest::Approx(15.5630).epsilon(1e-4));

  PowerAngularSpectrum spike = uniform_pas(-200.0);
  spike.bins_mw[7] = db_to_linear(-70.0);
  CHECK(azimuth_gain_dbi(spike) ==
        doctest::Approx(10.0 * std::log10(360.0)).epsilon(1e-6));
}

TEST_CASE("AoA picks the strongest bin, ties to the smallest angle") {
  PowerAngularSpectrum pas = uniform_pas(-90.0);
  pas.bins_mw[315] = db_to_linear(-60.0);
  CHECK(aoa_deg(pas) == doctest::Approx(315.5));

  PowerAngularSpectrum tie = uniform_pas(-90.0);
  tie.bins_mw[40] = db_to_linear(-60.0);
  tie.bins_mw[250] = db_to_linear(-60.0);
  CHECK(aoa_deg(tie) == doctest::Approx(40.5));

  // Gaussian beam centered at 315 degrees lands within one bin.
  std::vector<std::pair<double, double>> samples;
  for (int i = 0; i < 720; ++i) {
    double az = i * 0.5;
    double off = std::fabs(az - 315.0);
    if (off > 180.0) off = 360.0 - off;
    double rel = std::max(-12.0 * (off / 10.0) * (off / 10.0), -50.0);
    samples.push_back({az, -70.0 + rel});
  }
  double got = aoa_deg(average_pas(record_from(samples), 1.0));
  CHECK(std::fabs(got - 315.0) <= 1.0);
}

TEST_CASE("moment-method K on a hand series") {
  // P = 1.25, s^2 = 1.25/3, V = sqrt(P^2 - s^2), K = V/(P - V).
  std::vector<double> series{2.0, 0.5, 1.5, 1.0};
  CHECK(k_factor_from_series(series) == doctest::Approx(7.75351).epsilon(1e-4));

  std::vector<double> constant{1.0, 1.0, 1.0};
  CHECK(k_factor_from_series(constant) == doctest::Approx(60.0));

  // Variance above the squared mean: no specular component resolvable.
  std::vector<double> wild{10.0, 1e-4, 1e-4, 1e-4};
  CHECK(k_factor_from_series(wild) == doctest::Approx(-60.0));

  CHECK_THROWS_AS(k_factor_from_series(std::vector<double>{1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(k_factor_from_series(std::vector<double>{1.0, -0.5}),
                  std::invalid_argument);
}

TEST_CASE("K estimate converges on synthetic Rician rotations") {
  // 16000-sample records, K in {0, 5, 10, 15, 20} dB: the gated per-scan
  // estimator stays within 1 dB for most seeds (acceptance re-checks the
  // series-level oracle over 50 seeds).
  for (double k_db : {0.0, 10.0, 20.0}) {
    int hits = 0;
    const int seeds = 10;
    for (int seed = 0; seed < seeds; ++seed) {
      RandomStream rng = RandomStream::substream(900 + seed, 0);
      double k_lin = db_to_linear(k_db);
      std::vector<double> series;
      series.reserve(16000);
      for (int i = 0; i < 16000; ++i) {
        series.push_back(rician_power(rng, k_lin));
      }
      double est = k_factor_from_series(series);
      if (std::fabs(est - k_db) <= 1.0) ++hits;
    }
    CHECK(hits >= 9);
  }
}

TEST_CASE("per-scan K gate needs at least two scans over the AoA") {
  std::vector<std::pair<double, double>> one_scan;
  for (int i = 0; i < 360; ++i) one_scan.push_back({i + 0.5, -70.0});
  PowerAngularRecord rec = record_from(one_scan, 1);
  CHECK_THROWS_AS(k_factor_moments(rec, 180.0, 10.0), std::runtime_error);

  std::vector<std::pair<double, double>> two_scans;
  for (int s = 0; s < 2; ++s) {
    for (int i = 0; i < 360; ++i) two_scans.push_back({i + 0.5, -70.0});
  }
  PowerAngularRecord rec2 = record_from(two_scans, 2);
  // Constant power across scans: pure-specular sentinel.
  CHECK(k_factor_moments(rec2, 180.0, 10.0) == doctest::Approx(60.0));
}

TEST_CASE("empirical CDF uses the lower quantile rule") {
  std::vector<double> v{10, 9, 8, 7, 6, 5, 4, 3, 2, 1};
  EmpiricalCdf cdf(v);
  CHECK(cdf.quantile(0.1) == doctest::Approx(1.0));
  CHECK(cdf.quantile(0.5) == doctest::Approx(5.0));
  CHECK(cdf.median() == doctest::Approx(5.0));
  CHECK(cdf.quantile(1.0) == doctest::Approx(10.0));
  CHECK(cdf.quantile(0.0) == doctest::Approx(1.0));
  CHECK(cdf.cdf(5.0) == doctest::Approx(0.5));
  CHECK(cdf.cdf(0.5) == doctest::Approx(0.0));
  CHECK(cdf.cdf(10.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(EmpiricalCdf(std::vector<double>{}), std::invalid_argument);
  CHECK_THROWS_AS(cdf.quantile(1.5), std::invalid_argument);
}

TEST_CASE("stack grid rows ascend in distance") {
  SynthConfig cfg;
  cfg.preset = "Int-N-E";
  cfg.links = 3;
  cfg.scans = 2;
  cfg.samples_per_scan = 360;
  cfg.seed = 11;
  SidewalkDataset ds = synth_dataset(cfg);
  StackGrid grid = spectrum_stack_grid(ds);
  REQUIRE(grid.distances_m.size() == 3);
  CHECK(grid.distances_m[0] < grid.distances_m[1]);
  CHECK(grid.distances_m[1] < grid.distances_m[2]);
  REQUIRE(grid.power_dbm.size() == 3);
  CHECK(grid.power_dbm[0].size() == grid.bin_centers_deg.size());
  std::string csv = serialize_stack_grid(grid);
  CHECK(csv.rfind("distance_m", 0) == 0);
}

TEST_CASE("link metrics recover the embedded synthetic truth") {
  RandomStream rng = RandomStream::substream(42, 0);
  RecordSpec spec;
  spec.link_id = "L1";
  spec.rx_pos = {0.0, 0.0, 15.0};
  spec.tx_pos = {80.0, 60.0, 1.5};  // bearing 53.13 deg, ground 100 m
  spec.path_gain_db = -98.0;
  spec.beam_center_deg = 53.13;
  spec.scans = 40;
  spec.samples_per_scan = 400;
  spec.k_linear = db_to_linear(10.0);
  spec.beam_floor_db = beam_floor_for_abg(10.0, 14.1);
  PowerAngularRecord rec = synth_record(spec, rng);
  CHECK(rec.full_fidelity());

  LinkMetrics m = compute_link_metrics(rec, 22.0);
  CHECK(m.path_gain_db == doctest::Approx(-98.0).epsilon(0.01));
  CHECK(m.azimuth_gain_dbi == doctest::Approx(14.1).epsilon(0.1));
  CHECK(geometry::angular_deviation_deg(m.aoa_deg, 53.13) < 2.0);
  REQUIRE(m.k_factor_db.has_value());
  CHECK(std::fabs(*m.k_factor_db - 10.0) < 4.0);  // 40-scan series is coarse
}
