// SPDX-License-Identifier: Apache-2.0
#include "mmscm/synth.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mmscm/units.hpp"

namespace mmscm {

namespace {

constexpr double kIntH = 15.0;
constexpr double kBriH = 6.0;
constexpr double kBalH = 15.0;
constexpr double kRooH = 60.0;
constexpr double kTxH = 1.5;
constexpr double kTxRaisedH = 3.048;  // 10 ft

SidewalkPreset row(const char* name, Condition cond, double len, int links,
                   double n, double b, double sigma, double med, double p10,
                   double cw, double rxh, double txh = kTxH) {
  SidewalkPreset p;
  p.name = name;
  p.condition = cond;
  p.length_m = len;
  p.link_count = links;
  p.slope_n = n;
  p.intercept_db = b;
  p.sigma_db = sigma;
  p.median_abg_dbi = med;
  p.p10_abg_dbi = p10;
  p.cw_angle_deg = cw;
  p.rx_height_m = rxh;
  p.tx_height_m = txh;
  return p;
}

std::vector<SidewalkPreset> build_presets() {
  const Condition st = Condition::standard;
  std::vector<SidewalkPreset> v;
  // 24 measured sidewalks.
  v.push_back(row("Int-N-E", st, 507, 101, -3.5, -36.8, 4.3, 14.1, 12.3, 120, kIntH));
  v.push_back(row("Int-W-N", st, 256, 79, -2.6, -52.2, 4.4, 14.2, 13.2, 120, kIntH));
  v.push_back(row("Int-S-E", st, 317, 93, -3.4, -35.5, 4.6, 14.2, 13.4, 120, kIntH));
  v.push_back(row("Int-E-N", st, 146, 85, -2.3, -60.3, 4.5, 14.2, 13.1, 120, kIntH));
  v.push_back(row("Int-E-S", st, 146, 88, -2.8, -49.5, 3.2, 14.1, 12.4, 120, kIntH));
  v.push_back(row("Int-N-W", st, 509, 139, -3.6, -36.0, 3.6, 13.1, 11.8, 120, kIntH));
  v.push_back(row("Int-W-S", st, 256, 69, -3.1, -47.5, 3.1, 11.6, 10.4, 120, kIntH));
  v.push_back(row("Int-S-W", st, 317, 100, -3.6, -39.2, 3.4, 12.9, 11.2, 120, kIntH));
  v.push_back(row("Bri-N-E", st, 219, 65, -2.3, -60.0, 3.9, 12.6, 11.3, 30, kBriH));
  v.push_back(row("Bri-N-W", st, 219, 70, -2.6, -52.5, 4.3, 13.4, 11.7, 30, kBriH));
  v.push_back(row("Bri-S-E", st, 280, 84, -2.5, -55.7, 5.5, 12.8, 11.6, 210, kBriH));
  v.push_back(row("Bri-S-W", st, 280, 87, -2.2, -59.8, 4.0, 13.2, 11.4, 210, kBriH));
  v.push_back(row("Bal-N-E", st, 488, 156, -3.4, -47.2, 5.8, 13.9, 12.8, 208, kBalH));
  v.push_back(row("Bal-N-W", st, 464, 136, -2.9, -66.9, 4.2, 12.6, 10.0, 208, kBalH));
  v.push_back(row("Bal-E-N", st, 842, 129, -1.5, -94.1, 6.5, 14.1, 12.1, 120, kBalH));
  v.push_back(row("Roof-B-N", st, 98, 33, 0.34, -110.2, 3.4, 10.5, 7.9, 300, kRooH));
  v.push_back(row("Roof-B-S", st, 98, 33, 4.94, -190.0, 3.6, 10.9, 8.8, 300, kRooH));
  v.push_back(row("Roof-S-W", st, 1058, 150, -1.06, -101.8, 5.7, 13.7, 12.1, 300, kRooH));
  v.push_back(row("Roof-S-E", st, 1040, 137, -0.22, -119.7, 5.8, 13.8, 12.8, 300, kRooH));
  v.push_back(row("Roof-S2-E", st, 1102, 171, -1.21, -104.4, 7.8, 13.6, 11.6, 30, kRooH));
  v.push_back(row("Roof-S2-W", st, 1209, 118, -3.11, -45.8, 4.4, 14.2, 13.2, 30, kRooH));
  v.push_back(row("Roof-SE-N", st, 573, 114, -2.41, -61.1, 5.5, 14.0, 12.7, 120, kRooH));
  v.push_back(row("Roof-E-N", st, 647, 97, -2.39, -72.2, 3.5, 13.5, 12.3, 120, kRooH));
  v.push_back(row("Roof-E-S", st, 644, 97, 0.50, -136.5, 5.8, 14.2, 12.6, 120, kRooH));
  // Comparative re-measurements under altered conditions.
  v.push_back(row("Int-N-E-NLe", Condition::no_leaves, 507, 125, -2.95, -42.9, 3.8, 14.1, 12.4, 120, kIntH));
  v.push_back(row("Int-N-E-10ft", Condition::tx_raised, 507, 79, -3.86, -27.0, 3.7, 13.9, 11.0, 120, kIntH, kTxRaisedH));
  v.push_back(row("Int-W-N-NLe", Condition::no_leaves, 256, 77, -1.92, -63.9, 3.7, 14.1, 12.5, 120, kIntH));
  v.push_back(row("Int-W-N-Swap", Condition::swap, 256, 79, -2.72, -48.7, 3.2, 12.9, 10.6, 210, kTxH, kIntH));
  v.push_back(row("Int-W-N-St", Condition::street, 256, 68, -2.33, -56.4, 3.6, 13.7, 9.9, 120, kIntH));
  v.push_back(row("Int-W-N2", Condition::adjacent, 259, 81, -5.58, -22.1, 6.3, 12.9, 9.8, 120, kIntH));
  v.push_back(row("Int-W-S-Swap", Condition::swap, 256, 79, -2.93, -52.8, 2.9, 10.4, 8.2, 210, kTxH, kIntH));
  v.push_back(row("Int-W-S-Wall", Condition::wall, 198, 53, -3.32, -40.7, 3.5, 11.9, 9.4, 120, kIntH));
  return v;
}

}  // namespace

const std::vector<SidewalkPreset>& sidewalk_presets() {
  static const std::vector<SidewalkPreset> presets = build_presets();
  return presets;
}

const SidewalkPreset* find_preset(const std::string& name) {
  for (const auto& p : sidewalk_presets()) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

const SidewalkPreset& preset_or_throw(const std::string& name) {
  if (const SidewalkPreset* p = find_preset(name)) return *p;
  std::ostringstream os;
  os << "unknown preset '" << name << "'; known presets:";
  for (const auto& p : sidewalk_presets()) os << ' ' << p.name;
  throw std::invalid_argument(os.str());
}

double beam_shape_db(double offset_deg, double hpbw_deg, double floor_db) {
  double d = std::fabs(std::fmod(offset_deg, 360.0));
  if (d > 180.0) d = 360.0 - d;
  double g = -12.0 * (d / hpbw_deg) * (d / hpbw_deg);
  return std::max(g, floor_db);
}

double beam_shape_mean_linear(double hpbw_deg, double floor_db) {
  // 0.05-degree trapezoid over [0, 180]; the shape is even.
  const int steps = 3600;
  const double h = 180.0 / steps;
  double sum = 0.0;
  for (int i = 0; i <= steps; ++i) {
    double w = (i == 0 || i == steps) ? 0.5 : 1.0;
    sum += w * db_to_linear(beam_shape_db(i * h, hpbw_deg, floor_db));
  }
  return sum * h / 180.0;
}

double beam_floor_for_abg(double hpbw_deg, double target_abg_dbi) {
  if (!(hpbw_deg > 0.0)) throw std::invalid_argument("HPBW must be positive");
  double lo = -80.0, hi = -1e-6;  // ABG decreasing in the floor level
  double abg_lo = -linear_to_db(beam_shape_mean_linear(hpbw_deg, lo));
  double abg_hi = -linear_to_db(beam_shape_mean_linear(hpbw_deg, hi));
  if (!(target_abg_dbi > abg_hi) || !(target_abg_dbi < abg_lo)) {
    std::ostringstream os;
    os << "beamforming gain " << target_abg_dbi << " dBi not achievable for "
       << hpbw_deg << " deg HPBW (range " << abg_hi << " to " << abg_lo << ")";
    throw std::invalid_argument(os.str());
  }
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    double abg = -linear_to_db(beam_shape_mean_linear(hpbw_deg, mid));
    if (abg > target_abg_dbi) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-12) break;
  }
  return 0.5 * (lo + hi);
}

std::vector<PgPoint> synth_pg_points(const SidewalkPreset& preset, int count,
                                     double d_min_m, double d_max_m,
                                     std::uint64_t seed) {
  if (count < 2) throw std::invalid_argument("need at least 2 points");
  if (!(d_min_m > 0.0) || !(d_max_m > d_min_m)) {
    throw std::invalid_argument("require 0 < d_min < d_max");
  }
  RandomStream rng = RandomStream::substream(seed, 0);
  std::vector<PgPoint> pts(count);
  double lmin = std::log10(d_min_m), lmax = std::log10(d_max_m);
  for (int i = 0; i < count; ++i) {
    double t = static_cast<double>(i) / (count - 1);
    double d = std::pow(10.0, lmin + t * (lmax - lmin));
    pts[i].distance_m = d;
    pts[i].path_gain_db = 10.0 * preset.slope_n * std::log10(d) +
                          preset.intercept_db +
                          preset.sigma_db * rng.normal();
  }
  return pts;
}

PowerAngularRecord synth_record(const RecordSpec& spec, RandomStream& rng) {
  if (spec.scans < 1 || spec.samples_per_scan < 2) {
    throw std::invalid_argument("need >= 1 scan and >= 2 samples per scan");
  }
  PowerAngularRecord rec;
  rec.link_id = spec.link_id;
  rec.tx_pos = spec.tx_pos;
  rec.rx_pos = spec.rx_pos;
  rec.scan_count = spec.scans;
  rec.link_distance_m = geometry::link_distance_3d(spec.tx_pos, spec.rx_pos);

  const double step = 360.0 / spec.samples_per_scan;
  const double dt = 1.0 / spec.samples_per_scan;  // one rotation per second
  const double az0 = rng.uniform(0.0, 360.0);
  const double mean_db =
      linear_to_db(beam_shape_mean_linear(spec.beam_hpbw_deg, spec.beam_floor_db));
  const double base = spec.tx_power_dbm + spec.path_gain_db - mean_db;

  rec.samples.reserve(static_cast<std::size_t>(spec.scans) *
                      spec.samples_per_scan);
  int idx = 0;
  for (int s = 0; s < spec.scans; ++s) {
    double fade_db = linear_to_db(rician_power(rng, spec.k_linear));
    for (int i = 0; i < spec.samples_per_scan; ++i, ++idx) {
      AngularSample a;
      a.time_s = idx * dt;
      a.azimuth_deg = geometry::normalize_bearing_deg(az0 + idx * step);
      double off =
          geometry::angular_deviation_deg(a.azimuth_deg, spec.beam_center_deg);
      a.power_dbm = base +
                    beam_shape_db(off, spec.beam_hpbw_deg, spec.beam_floor_db) +
                    fade_db;
      rec.samples.push_back(a);
    }
  }
  return rec;
}

SidewalkDataset synth_dataset(const SynthConfig& cfg) {
  const SidewalkPreset& p = preset_or_throw(cfg.preset);
  int links = cfg.links > 0 ? cfg.links : p.link_count;
  if (links < 2) throw std::invalid_argument("need at least 2 links");

  double dh = p.rx_height_m - p.tx_height_m;
  double d_min = cfg.d_min_m ? *cfg.d_min_m : std::max(10.0, std::fabs(dh) + 2.0);
  double d_max = cfg.d_max_m ? *cfg.d_max_m : std::max(d_min + 10.0, p.length_m);
  if (!(d_min > std::fabs(dh))) {
    throw std::invalid_argument("d_min must exceed the Tx/Rx height offset");
  }
  if (!(d_max > d_min)) throw std::invalid_argument("require d_min < d_max");

  const double floor_db = beam_floor_for_abg(cfg.beam_hpbw_deg, p.median_abg_dbi);
  const double k_linear = db_to_linear(cfg.k_factor_db);
  const double brg = p.cw_angle_deg;
  const double e = std::sin(deg_to_rad(brg)), n = std::cos(deg_to_rad(brg));

  SidewalkDataset ds;
  ds.sidewalk_id = p.name;
  ds.condition = p.condition;
  ds.visual_los = VisualLos::VLOS;

  double lmin = std::log10(d_min), lmax = std::log10(d_max);
  for (int i = 0; i < links; ++i) {
    RandomStream rng = RandomStream::substream(cfg.seed, i);
    double t = static_cast<double>(i) / (links - 1);
    double d = std::pow(10.0, lmin + t * (lmax - lmin));
    double g = std::sqrt(std::max(d * d - dh * dh, 1e-6));  // ground range

    RecordSpec spec;
    std::ostringstream id;
    id << p.name << "-L" << (i + 1);
    spec.link_id = id.str();
    spec.rx_pos = {0.0, 0.0, p.rx_height_m};
    spec.tx_pos = {g * e, g * n, p.tx_height_m};
    spec.path_gain_db = 10.0 * p.slope_n * std::log10(d) + p.intercept_db +
                        p.sigma_db * rng.normal();
    spec.beam_center_deg = geometry::bearing_deg(spec.rx_pos, spec.tx_pos);
    spec.scans = cfg.scans;
    spec.samples_per_scan = cfg.samples_per_scan;
    spec.k_linear = k_linear;
    spec.beam_hpbw_deg = cfg.beam_hpbw_deg;
    spec.beam_floor_db = floor_db;
    spec.tx_power_dbm = ds.tx_power_dbm;
    ds.records.push_back(synth_record(spec, rng));
  }
  std::stable_sort(ds.records.begin(), ds.records.end(),
                   [](const PowerAngularRecord& a, const PowerAngularRecord& b) {
                     return a.link_distance_m < b.link_distance_m;
                   });
  return ds;
}

}  // namespace mmscm
