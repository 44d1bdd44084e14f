// SPDX-License-Identifier: Apache-2.0
#include "mmscm/deconflict.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "mmscm/pathloss.hpp"
#include "mmscm/units.hpp"

using namespace mmscm;

namespace {

const PowerMap& horn_map() {
  static PowerMap m = PowerMap::from_cuts(default_horn_pattern(), 1.0);
  return m;
}

double anchored_tx_ref(const ScenarioConfig& cfg) {
  return cfg.underlay_reference_dbm_mhz - fspl_db(1.0, cfg.base_freq_hz) +
         10.0 * cfg.prop_exponent * std::log10(cfg.link_max_m);
}

ScenarioLink make_link(int idx, Position3D tx, Position3D rx,
                       const ScenarioConfig& cfg) {
  ScenarioLink link;
  link.tx_pos = tx;
  link.rx_pos = rx;
  std::string tag = std::to_string(idx);

  SpectrumConsumptionModel& t = link.tx_scm;
  t.kind = SpectrumConsumptionModel::Kind::transmitter;
  t.id = "tx-" + tag;
  t.reference_power_dbm = anchored_tx_ref(cfg);
  t.boresight_azimuth_deg = geometry::bearing_deg(tx, rx);
  t.spectrum_mask = default_tx_mask(cfg.base_freq_hz, cfg.channel_bw_hz);
  t.power_map = horn_map();
  t.propagation_map = PropagationMap::uniform(cfg.prop_exponent);
  t.schedule = {0, 86400};
  t.location = {ScmLocation::Kind::point, {tx}};
  validate_scm(t);

  SpectrumConsumptionModel& r = link.rx_scm;
  r.kind = SpectrumConsumptionModel::Kind::receiver;
  r.id = "rx-" + tag;
  r.reference_power_dbm = cfg.underlay_reference_dbm_mhz;
  r.boresight_azimuth_deg = geometry::bearing_deg(rx, tx);
  r.underlay_mask = default_underlay_mask(cfg.base_freq_hz, cfg.channel_bw_hz);
  r.power_map = horn_map();
  r.propagation_map = PropagationMap::uniform(cfg.prop_exponent);
  r.schedule = {0, 86400};
  r.location = {ScmLocation::Kind::point, {rx}};
  validate_scm(r);
  return link;
}

Scenario parallel_links(const std::vector<double>& northings, double length_m) {
  Scenario sc;
  sc.config = ScenarioConfig{};
  sc.area_side_m = 1000.0;
  int idx = 1;
  for (double n : northings) {
    sc.links.push_back(make_link(idx++, {0.0, n, 1.5}, {length_m, n, 1.5},
                                 sc.config));
  }
  return sc;
}

}  // namespace

TEST_CASE("default masks are flat-top trapezoids") {
  SpectrumMask m = default_tx_mask(28e9, 1e6);
  const auto& b = m.breakpoints();
  REQUIRE(b.size() == 4);
  CHECK(b[0].freq_hz == doctest::Approx(27.999e9));
  CHECK(b[0].rel_psd_db == doctest::Approx(-40.0));
  CHECK(b[1].freq_hz == doctest::Approx(27.9995e9));
  CHECK(b[1].rel_psd_db == doctest::Approx(0.0));
  CHECK(b[2].freq_hz == doctest::Approx(28.0005e9));
  CHECK(b[3].freq_hz == doctest::Approx(28.001e9));
  CHECK(m.eval_db(28e9) == doctest::Approx(0.0));
  CHECK(m.eval_db(27.99925e9) == doctest::Approx(-20.0));

  UnderlayMask u = default_underlay_mask(28e9, 1e6);
  CHECK(u.breakpoints().size() == 4);
  CHECK(u.eval_db(28.0005e9) == doctest::Approx(0.0));
}

TEST_CASE("generated scenarios are deterministic and respect placement rules") {
  ScenarioConfig cfg;
  Scenario a = generate_scenario(25, 7, cfg);
  Scenario b = generate_scenario(25, 7, cfg);
  Scenario c = generate_scenario(25, 8, cfg);

  // Half a square mile.
  CHECK(a.area_side_m == doctest::Approx(1137.978).epsilon(1e-5));
  REQUIRE(a.links.size() == 25);

  CHECK(serialize_scm(a.links[0].tx_scm) == serialize_scm(b.links[0].tx_scm));
  CHECK(serialize_scm(a.links[24].rx_scm) == serialize_scm(b.links[24].rx_scm));
  CHECK(serialize_scm(a.links[0].tx_scm) != serialize_scm(c.links[0].tx_scm));

  for (std::size_t i = 0; i < a.links.size(); ++i) {
    const auto& l = a.links[i];
    CHECK(l.tx_pos.east >= 0.0);
    CHECK(l.tx_pos.east <= a.area_side_m);
    CHECK(l.rx_pos.north >= 0.0);
    CHECK(l.rx_pos.north <= a.area_side_m);
    double d = geometry::link_distance_3d(l.tx_pos, l.rx_pos);
    CHECK(d >= cfg.link_min_m);
    CHECK(d <= cfg.link_max_m);
    CHECK(l.tx_scm.boresight_azimuth_deg ==
          doctest::Approx(geometry::bearing_deg(l.tx_pos, l.rx_pos)));
    for (std::size_t j = i + 1; j < a.links.size(); ++j) {
      CHECK(geometry::horizontal_distance(l.tx_pos, a.links[j].tx_pos) >=
            cfg.min_tx_separation_m);
    }
  }
  CHECK_NOTHROW(validate_scm(a.links[0].tx_scm));
  CHECK_NOTHROW(validate_scm(a.links[0].rx_scm));
  CHECK_THROWS_AS(generate_scenario(0, 1, cfg), std::invalid_argument);
}

TEST_CASE("transmit power anchors boresight psd at link_max to the allowance") {
  ScenarioConfig cfg;
  Scenario sc = generate_scenario(1, 42, cfg);
  const SpectrumConsumptionModel& tx = sc.links[0].tx_scm;
  CHECK(tx.reference_power_dbm == doctest::Approx(37.3909).epsilon(1e-5));

  // A probe receiver exactly link_max down the boresight sees exactly the
  // underlay reference.
  double b = deg_to_rad(tx.boresight_azimuth_deg);
  Position3D probe_pos{tx.location.geometry[0].east + cfg.link_max_m * std::sin(b),
                       tx.location.geometry[0].north + cfg.link_max_m * std::cos(b),
                       cfg.device_height_m};
  SpectrumConsumptionModel probe = sc.links[0].rx_scm;
  probe.location = {ScmLocation::Kind::point, {probe_pos}};
  probe.boresight_azimuth_deg =
      geometry::bearing_deg(probe_pos, tx.location.geometry[0]);
  CHECK(received_psd_dbm_mhz(tx, probe, cfg.base_freq_hz) ==
        doctest::Approx(cfg.underlay_reference_dbm_mhz).epsilon(1e-6));
}

TEST_CASE("channel translation shifts masks by whole channel widths") {
  SpectrumConsumptionModel tx;
  tx.kind = SpectrumConsumptionModel::Kind::transmitter;
  tx.spectrum_mask = default_tx_mask(28e9, 1e6);

  SpectrumConsumptionModel same = scm_on_channel(tx, 1, 1e6);
  CHECK(same.spectrum_mask->breakpoints()[0].freq_hz ==
        doctest::Approx(27.999e9));

  SpectrumConsumptionModel ch3 = scm_on_channel(tx, 3, 1e6);
  CHECK(ch3.spectrum_mask->breakpoints()[0].freq_hz ==
        doctest::Approx(28.001e9));
  CHECK(ch3.spectrum_mask->breakpoints()[3].freq_hz ==
        doctest::Approx(28.003e9));

  SpectrumConsumptionModel rx;
  rx.kind = SpectrumConsumptionModel::Kind::receiver;
  rx.underlay_mask = default_underlay_mask(28e9, 1e6);
  SpectrumConsumptionModel rx2 = scm_on_channel(rx, 2, 1e6);
  CHECK(rx2.underlay_mask->breakpoints()[1].freq_hz ==
        doctest::Approx(28.0005e9));

  CHECK_THROWS_AS(scm_on_channel(tx, 0, 1e6), std::invalid_argument);
}

TEST_CASE("crossed close links force a second channel") {
  Scenario sc = parallel_links({0.0, 1.0}, 50.0);
  AssignStats stats;
  Assignment a = assign_channels_greedy(sc, &stats);
  CHECK(a.channels == std::vector<int>{1, 2});
  CHECK(a.channels_used == 2);
  CHECK(verify_assignment(sc, a));
  CHECK(pairwise_chromatic_lower_bound(sc) == 2);
  REQUIRE(stats.per_link_seconds.size() == 2);
  CHECK(stats.per_link_seconds[0] >= 0.0);
  CHECK(stats.per_link_seconds[1] < 0.5);

  // Forcing both onto channel one fails the independent re-check.
  Assignment forced;
  forced.channels = {1, 1};
  forced.channels_used = 1;
  CHECK(!verify_assignment(sc, forced));

  Assignment short_vec;
  short_vec.channels = {1};
  short_vec.channels_used = 1;
  CHECK(!verify_assignment(sc, short_vec));
}

TEST_CASE("distant parallel links share a channel") {
  Scenario sc = parallel_links({0.0, 800.0}, 50.0);
  Assignment a = assign_channels_greedy(sc);
  CHECK(a.channels == std::vector<int>{1, 1});
  CHECK(a.channels_used == 1);
  CHECK(verify_assignment(sc, a));
  CHECK(pairwise_chromatic_lower_bound(sc) == 1);
}

TEST_CASE("three mutually conflicting links need three channels") {
  Scenario sc = parallel_links({0.0, 1.0, 2.0}, 50.0);
  Assignment a = assign_channels_greedy(sc);
  CHECK(a.channels == std::vector<int>{1, 2, 3});
  CHECK(verify_assignment(sc, a));
  int chi = pairwise_chromatic_lower_bound(sc);
  CHECK(chi == 3);
  CHECK(a.channels_used >= chi);
  CHECK(a.channels_used <= chi + 2);
}

TEST_CASE("coloring bound guards its input size") {
  Scenario sc = generate_scenario(17, 5);
  CHECK_THROWS_AS(pairwise_chromatic_lower_bound(sc), std::invalid_argument);
  Scenario empty;
  CHECK_THROWS_AS(assign_channels_greedy(empty), std::invalid_argument);
}

TEST_CASE("trial batches are deterministic and self-consistent") {
  TrialSummary s1 = run_trials(10, 5, 3);
  TrialSummary s2 = run_trials(10, 5, 3);
  CHECK(s1.per_trial == s2.per_trial);
  CHECK(s1.histogram == s2.histogram);

  REQUIRE(s1.per_trial.size() == 5);
  int total = 0;
  int observed_max = 0;
  int n23 = 0;
  for (int c : s1.per_trial) {
    CHECK(c >= 1);
    observed_max = std::max(observed_max, c);
    if (c == 2 || c == 3) ++n23;
  }
  for (const auto& [channels, count] : s1.histogram) total += count;
  CHECK(total == 5);
  CHECK(s1.max_channels == observed_max);
  CHECK(s1.fraction_2_3 == doctest::Approx(n23 / 5.0));
  CHECK(s1.histogram.at(s1.mode) >= s1.histogram.begin()->second);

  TrialSummary lone = run_trials(1, 5, 7);
  CHECK(lone.histogram.size() == 1);
  CHECK(lone.histogram.at(1) == 5);
  CHECK(lone.mode == 1);
  CHECK(lone.fraction_2_3 == doctest::Approx(0.0));
  CHECK(lone.max_channels == 1);

  CHECK_THROWS_AS(run_trials(1, 0, 1), std::invalid_argument);
}
