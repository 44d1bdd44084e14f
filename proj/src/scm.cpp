// SPDX-License-Identifier: Apache-2.0
#include "mmscm/scm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "mmscm/units.hpp"

namespace mmscm {

using nlohmann::json;

FrequencyMask::FrequencyMask(std::vector<MaskBreakpoint> breakpoints)
    : points_(std::move(breakpoints)) {
  if (points_.size() < 2) {
    throw std::invalid_argument("mask needs at least 2 breakpoints");
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i].freq_hz) ||
        !std::isfinite(points_[i].rel_psd_db)) {
      throw std::invalid_argument("mask breakpoints must be finite");
    }
    if (i > 0 && points_[i].freq_hz <= points_[i - 1].freq_hz) {
      throw std::invalid_argument("mask frequencies must strictly increase");
    }
  }
}

double FrequencyMask::eval_db(double f_hz) const {
  if (points_.empty() || f_hz < points_.front().freq_hz ||
      f_hz > points_.back().freq_hz) {
    return -std::numeric_limits<double>::infinity();
  }
  auto hi = std::lower_bound(
      points_.begin(), points_.end(), f_hz,
      [](const MaskBreakpoint& b, double v) { return b.freq_hz < v; });
  if (hi == points_.begin()) return points_.front().rel_psd_db;
  if (hi == points_.end()) return points_.back().rel_psd_db;
  auto lo = hi - 1;
  double t = (f_hz - lo->freq_hz) / (hi->freq_hz - lo->freq_hz);
  return lo->rel_psd_db + t * (hi->rel_psd_db - lo->rel_psd_db);
}

FrequencyMask FrequencyMask::shifted(double df_hz) const {
  std::vector<MaskBreakpoint> pts = points_;
  for (auto& p : pts) p.freq_hz += df_hz;
  return FrequencyMask(std::move(pts));
}

namespace {

void check_resolution(double resolution_deg) {
  if (!(resolution_deg > 0.0)) {
    throw std::invalid_argument("map resolution must be positive");
  }
  double na = 360.0 / resolution_deg;
  double ne = 180.0 / resolution_deg;
  if (std::fabs(na - std::round(na)) > 1e-9 ||
      std::fabs(ne - std::round(ne)) > 1e-9) {
    throw std::invalid_argument("map resolution must divide 360 and 180");
  }
}

}  // namespace

PowerMap PowerMap::from_grid(double resolution_deg,
                             std::vector<double> gain_db) {
  check_resolution(resolution_deg);
  PowerMap m;
  m.resolution_deg_ = resolution_deg;
  m.n_az_ = static_cast<int>(std::round(360.0 / resolution_deg));
  m.n_el_ = static_cast<int>(std::round(180.0 / resolution_deg)) + 1;
  if (gain_db.size() !=
      static_cast<std::size_t>(m.n_az_) * static_cast<std::size_t>(m.n_el_)) {
    throw std::invalid_argument("power map grid size mismatch");
  }
  double maxg = -std::numeric_limits<double>::infinity();
  for (double g : gain_db) {
    if (!std::isfinite(g)) {
      throw std::invalid_argument("power map gains must be finite");
    }
    maxg = std::max(maxg, g);
  }
  if (std::fabs(maxg) > 1e-9) {
    throw std::invalid_argument("power map maximum must be 0 dB");
  }
  m.grid_ = std::make_shared<const std::vector<double>>(std::move(gain_db));
  return m;
}

PowerMap PowerMap::from_cuts(const AntennaPattern& pattern,
                             double resolution_deg) {
  check_resolution(resolution_deg);
  int n_az = static_cast<int>(std::round(360.0 / resolution_deg));
  int n_el = static_cast<int>(std::round(180.0 / resolution_deg)) + 1;

  double floor_db = 0.0;
  for (const auto& k : pattern.azimuth_cut) {
    floor_db = std::min(floor_db, k.rel_gain_db);
  }
  for (const auto& k : pattern.elevation_cut) {
    floor_db = std::min(floor_db, k.rel_gain_db);
  }

  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(n_az) * n_el);
  double maxg = -std::numeric_limits<double>::infinity();
  for (int ia = 0; ia < n_az; ++ia) {
    double az = ia * resolution_deg;
    // Pattern cuts are [-180, 180]; the map azimuth axis is [0, 360).
    double az_gain = pattern.azimuth_gain_db(az > 180.0 ? az - 360.0 : az);
    for (int ie = 0; ie < n_el; ++ie) {
      double el = -90.0 + ie * resolution_deg;
      double g = std::max(az_gain + pattern.elevation_gain_db(el), floor_db);
      maxg = std::max(maxg, g);
      grid.push_back(g);
    }
  }
  // Guarantee the 0 dB maximum even for cuts whose peaks fall off-grid.
  for (double& g : grid) g -= maxg;
  return from_grid(resolution_deg, std::move(grid));
}

double PowerMap::gain_db(double azimuth_deg, double elevation_deg) const {
  if (empty()) throw std::invalid_argument("empty power map");
  if (!(elevation_deg >= -90.0 - 1e-9 && elevation_deg <= 90.0 + 1e-9)) {
    throw std::invalid_argument("elevation outside [-90, 90]");
  }
  double az = geometry::normalize_bearing_deg(azimuth_deg);
  double el = std::clamp(elevation_deg, -90.0, 90.0);

  double fa = az / resolution_deg_;
  int ia = static_cast<int>(std::floor(fa));
  double ta = fa - ia;
  int ia1 = (ia + 1) % n_az_;

  double fe = (el + 90.0) / resolution_deg_;
  int ie = static_cast<int>(std::floor(fe));
  if (ie >= n_el_ - 1) {  // exact +90 edge
    ie = n_el_ - 2;
  }
  double te = fe - ie;

  const std::vector<double>& g = *grid_;
  auto at = [&](int a, int e) {
    return g[static_cast<std::size_t>(a) * n_el_ + e];
  };
  double g00 = at(ia, ie), g01 = at(ia, ie + 1);
  double g10 = at(ia1, ie), g11 = at(ia1, ie + 1);
  double low = g00 + ta * (g10 - g00);
  double high = g01 + ta * (g11 - g01);
  return low + te * (high - low);
}

PropagationMap PropagationMap::uniform(double exponent) {
  Sector s{0.0, 360.0, exponent, false};
  return from_sectors(std::span<const Sector>(&s, 1), exponent);
}

PropagationMap PropagationMap::from_sectors(std::span<const Sector> sectors,
                                            double default_exponent) {
  if (!(default_exponent > 0.0 && default_exponent < 10.0)) {
    throw std::invalid_argument("default exponent outside (0, 10)");
  }
  // Unwrap the inputs into non-wrapping [start, end) pieces.
  std::vector<Sector> pieces;
  for (const auto& s : sectors) {
    if (!(s.exponent > 0.0 && s.exponent < 10.0)) {
      throw std::invalid_argument("sector exponent outside (0, 10)");
    }
    double a = s.start_deg, b = s.end_deg;
    if (!(a >= 0.0 && a < 360.0) || !(b >= 0.0 && b <= 360.0)) {
      throw std::invalid_argument("sector bounds outside [0, 360]");
    }
    if (a == b) throw std::invalid_argument("zero-width sector");
    if (a < b) {
      pieces.push_back({a, b, s.exponent, s.from_default});
    } else {  // wraps through north
      pieces.push_back({a, 360.0, s.exponent, s.from_default});
      if (b > 0.0) pieces.push_back({0.0, b, s.exponent, s.from_default});
    }
  }
  std::sort(pieces.begin(), pieces.end(),
            [](const Sector& x, const Sector& y) {
              return x.start_deg < y.start_deg;
            });
  for (std::size_t i = 1; i < pieces.size(); ++i) {
    if (pieces[i].start_deg < pieces[i - 1].end_deg - 1e-9) {
      throw std::invalid_argument("overlapping sectors");
    }
  }

  // Fill gaps with flagged default sectors.
  PropagationMap map;
  map.default_exponent_ = default_exponent;
  double cursor = 0.0;
  for (const auto& p : pieces) {
    if (p.start_deg > cursor + 1e-9) {
      map.sectors_.push_back({cursor, p.start_deg, default_exponent, true});
    }
    map.sectors_.push_back(p);
    cursor = p.end_deg;
  }
  if (cursor < 360.0 - 1e-9) {
    map.sectors_.push_back({cursor, 360.0, default_exponent, true});
  } else if (!map.sectors_.empty()) {
    map.sectors_.back().end_deg = 360.0;
  }
  if (map.sectors_.empty()) {
    map.sectors_.push_back({0.0, 360.0, default_exponent, true});
  }
  return map;
}

namespace {

const PropagationMap::Sector& sector_at(
    const std::vector<PropagationMap::Sector>& sectors, double bearing_deg) {
  double b = geometry::normalize_bearing_deg(bearing_deg);
  for (const auto& s : sectors) {
    if (b >= s.start_deg && b < s.end_deg) return s;
  }
  return sectors.back();  // b in the final half-open edge case
}

}  // namespace

double PropagationMap::exponent_at(double bearing_deg) const {
  if (empty()) throw std::invalid_argument("empty propagation map");
  return sector_at(sectors_, bearing_deg).exponent;
}

bool PropagationMap::is_default_at(double bearing_deg) const {
  if (empty()) throw std::invalid_argument("empty propagation map");
  return sector_at(sectors_, bearing_deg).from_default;
}

PropagationMap propagation_map_from_fits(std::span<const SectorFit> fits,
                                         double default_exponent) {
  std::vector<PropagationMap::Sector> sectors;
  sectors.reserve(fits.size());
  for (const auto& f : fits) {
    sectors.push_back(
        {f.start_deg, f.end_deg, std::fabs(f.fit.slope_n), false});
  }
  return PropagationMap::from_sectors(sectors, default_exponent);
}

Position3D ScmLocation::representative() const {
  if (geometry.empty()) {
    throw std::invalid_argument("location has no geometry");
  }
  if (kind == Kind::point || kind == Kind::trajectory) {
    return geometry.front();
  }
  Position3D c;
  for (const auto& p : geometry) {
    c.east += p.east;
    c.north += p.north;
    c.up += p.up;
  }
  double n = static_cast<double>(geometry.size());
  return {c.east / n, c.north / n, c.up / n};
}

std::string to_string(ScmLocation::Kind kind) {
  switch (kind) {
    case ScmLocation::Kind::point: return "point";
    case ScmLocation::Kind::volume: return "volume";
    case ScmLocation::Kind::trajectory: return "trajectory";
  }
  return "point";
}

ScmLocation::Kind location_kind_from_string(std::string_view s) {
  if (s == "point") return ScmLocation::Kind::point;
  if (s == "volume") return ScmLocation::Kind::volume;
  if (s == "trajectory") return ScmLocation::Kind::trajectory;
  throw std::invalid_argument("unknown location kind '" + std::string(s) + "'");
}

namespace {

void check_location(const ScmLocation& loc) {
  for (const auto& p : loc.geometry) {
    if (!position_is_valid(p)) {
      throw std::invalid_argument("location: position not finite/in range");
    }
  }
  switch (loc.kind) {
    case ScmLocation::Kind::point:
      if (loc.geometry.size() != 1) {
        throw std::invalid_argument("location: point wants exactly 1 position");
      }
      break;
    case ScmLocation::Kind::volume:
      if (loc.geometry.size() != 2) {
        throw std::invalid_argument("location: volume wants 2 box corners");
      }
      break;
    case ScmLocation::Kind::trajectory:
      if (loc.geometry.size() < 2) {
        throw std::invalid_argument(
            "location: trajectory wants >= 2 waypoints");
      }
      break;
  }
}

}  // namespace

void validate_scm(const SpectrumConsumptionModel& scm) {
  if (scm.id.empty()) {
    throw std::invalid_argument("scm: id must be nonempty");
  }
  if (!std::isfinite(scm.reference_power_dbm)) {
    throw std::invalid_argument("scm: reference power must be finite");
  }
  if (!std::isfinite(scm.boresight_azimuth_deg) ||
      scm.boresight_azimuth_deg < 0.0 || scm.boresight_azimuth_deg >= 360.0) {
    throw std::invalid_argument("scm: boresight azimuth outside [0, 360)");
  }
  if (scm.is_tx()) {
    if (!scm.spectrum_mask || scm.spectrum_mask->empty()) {
      throw std::invalid_argument(
          "scm: transmitter model requires a spectrum_mask");
    }
    if (scm.underlay_mask) {
      throw std::invalid_argument(
          "scm: transmitter model must not carry an underlay_mask");
    }
  } else {
    if (!scm.underlay_mask || scm.underlay_mask->empty()) {
      throw std::invalid_argument(
          "scm: receiver model requires an underlay_mask");
    }
    if (scm.spectrum_mask) {
      throw std::invalid_argument(
          "scm: receiver model must not carry a spectrum_mask");
    }
  }
  if (scm.power_map.empty()) {
    throw std::invalid_argument("scm: power map required");
  }
  if (scm.propagation_map.empty()) {
    throw std::invalid_argument("scm: propagation map required");
  }
  if (!(scm.schedule.start_s < scm.schedule.end_s)) {
    throw std::invalid_argument("scm: schedule start must precede end");
  }
  check_location(scm.location);
  if (!json::accept(scm.extras_json)) {
    throw std::invalid_argument("scm: extras must be valid JSON");
  }
}

namespace {

SpectrumConsumptionModel build_scm(SpectrumConsumptionModel::Kind kind,
                                   std::string id, double ref_power_dbm,
                                   FrequencyMask mask,
                                   const AntennaPattern& pattern,
                                   PropagationMap prop, Schedule schedule,
                                   ScmLocation location, double boresight_deg,
                                   double resolution_deg) {
  SpectrumConsumptionModel scm;
  scm.kind = kind;
  scm.id = std::move(id);
  scm.reference_power_dbm = ref_power_dbm;
  scm.boresight_azimuth_deg = geometry::normalize_bearing_deg(boresight_deg);
  if (kind == SpectrumConsumptionModel::Kind::transmitter) {
    scm.spectrum_mask = std::move(mask);
  } else {
    scm.underlay_mask = std::move(mask);
  }
  scm.power_map = PowerMap::from_cuts(pattern, resolution_deg);
  scm.propagation_map = std::move(prop);
  scm.schedule = schedule;
  scm.location = std::move(location);
  validate_scm(scm);
  return scm;
}

}  // namespace

SpectrumConsumptionModel build_tx_scm(std::string id, double ref_power_dbm,
                                      SpectrumMask mask,
                                      const AntennaPattern& pattern,
                                      PropagationMap prop, Schedule schedule,
                                      ScmLocation location,
                                      double boresight_azimuth_deg,
                                      double map_resolution_deg) {
  return build_scm(SpectrumConsumptionModel::Kind::transmitter, std::move(id),
                   ref_power_dbm, std::move(mask), pattern, std::move(prop),
                   schedule, std::move(location), boresight_azimuth_deg,
                   map_resolution_deg);
}

SpectrumConsumptionModel build_rx_scm(std::string id, double ref_power_dbm,
                                      UnderlayMask underlay,
                                      const AntennaPattern& pattern,
                                      PropagationMap prop, Schedule schedule,
                                      ScmLocation location,
                                      double boresight_azimuth_deg,
                                      double map_resolution_deg) {
  return build_scm(SpectrumConsumptionModel::Kind::receiver, std::move(id),
                   ref_power_dbm, std::move(underlay), pattern,
                   std::move(prop), schedule, std::move(location),
                   boresight_azimuth_deg, map_resolution_deg);
}

namespace {

json mask_to_json(const FrequencyMask& mask) {
  json arr = json::array();
  for (const auto& b : mask.breakpoints()) {
    arr.push_back(json::array({b.freq_hz, b.rel_psd_db}));
  }
  return arr;
}

FrequencyMask mask_from_json(const json& j, const std::string& path) {
  if (!j.is_array()) {
    throw ParseError(path + ": expected array of [freq_hz, rel_psd_db]");
  }
  std::vector<MaskBreakpoint> pts;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() ||
        !e[1].is_number()) {
      throw ParseError(path + ": expected [freq_hz, rel_psd_db] pairs");
    }
    pts.push_back({e[0].get<double>(), e[1].get<double>()});
  }
  try {
    return FrequencyMask(std::move(pts));
  } catch (const std::invalid_argument& e) {
    throw ParseError(path + ": " + e.what());
  }
}

const json& field(const json& j, const char* key, const std::string& path) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw ParseError(path + "." + key + ": missing");
  }
  return *it;
}

double num_field(const json& j, const char* key, const std::string& path) {
  const json& v = field(j, key, path);
  if (!v.is_number()) throw ParseError(path + "." + key + ": expected number");
  return v.get<double>();
}

}  // namespace

std::string serialize_scm(const SpectrumConsumptionModel& scm) {
  validate_scm(scm);
  json j;
  j["schema"] = "scm/1";
  j["kind"] = scm.is_tx() ? "transmitter" : "receiver";
  j["id"] = scm.id;
  j["reference_power_dbm"] = scm.reference_power_dbm;
  j["boresight_azimuth_deg"] = scm.boresight_azimuth_deg;
  if (scm.spectrum_mask) j["spectrum_mask"] = mask_to_json(*scm.spectrum_mask);
  if (scm.underlay_mask) j["underlay_mask"] = mask_to_json(*scm.underlay_mask);

  json pm;
  pm["resolution_deg"] = scm.power_map.resolution_deg();
  pm["gain_db"] = scm.power_map.grid();
  j["power_map"] = std::move(pm);

  json prop;
  prop["default_exponent"] = scm.propagation_map.default_exponent();
  json sectors = json::array();
  for (const auto& s : scm.propagation_map.sectors()) {
    json sj;
    sj["start_deg"] = s.start_deg;
    sj["end_deg"] = s.end_deg;
    sj["exponent"] = s.exponent;
    sj["from_default"] = s.from_default;
    sectors.push_back(std::move(sj));
  }
  prop["sectors"] = std::move(sectors);
  j["propagation_map"] = std::move(prop);

  j["schedule"] = {{"start_s", scm.schedule.start_s},
                   {"end_s", scm.schedule.end_s}};

  json loc;
  loc["kind"] = to_string(scm.location.kind);
  json geo = json::array();
  for (const auto& p : scm.location.geometry) {
    geo.push_back(json::array({p.east, p.north, p.up}));
  }
  loc["geometry"] = std::move(geo);
  j["location"] = std::move(loc);

  j["extras"] = json::parse(scm.extras_json);
  return j.dump() + "\n";
}

SpectrumConsumptionModel parse_scm_text(std::string_view text,
                                        const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(origin + ": " + e.what());
  }
  if (!j.is_object()) throw ParseError(origin + ": expected a JSON object");

  const std::string root = origin;
  const json& schema = field(j, "schema", root);
  if (!schema.is_string() || schema.get<std::string>() != "scm/1") {
    throw ParseError(root + ".schema: expected \"scm/1\"");
  }

  SpectrumConsumptionModel scm;
  const json& kind = field(j, "kind", root);
  if (kind == "transmitter") {
    scm.kind = SpectrumConsumptionModel::Kind::transmitter;
  } else if (kind == "receiver") {
    scm.kind = SpectrumConsumptionModel::Kind::receiver;
  } else {
    throw ParseError(root + ".kind: expected transmitter or receiver");
  }
  const json& id = field(j, "id", root);
  if (!id.is_string()) throw ParseError(root + ".id: expected string");
  scm.id = id.get<std::string>();
  scm.reference_power_dbm = num_field(j, "reference_power_dbm", root);
  scm.boresight_azimuth_deg = num_field(j, "boresight_azimuth_deg", root);

  if (j.contains("spectrum_mask")) {
    scm.spectrum_mask = mask_from_json(j["spectrum_mask"], root + ".spectrum_mask");
  }
  if (j.contains("underlay_mask")) {
    scm.underlay_mask = mask_from_json(j["underlay_mask"], root + ".underlay_mask");
  }

  const json& pm = field(j, "power_map", root);
  double res = num_field(pm, "resolution_deg", root + ".power_map");
  const json& gains = field(pm, "gain_db", root + ".power_map");
  if (!gains.is_array()) {
    throw ParseError(root + ".power_map.gain_db: expected array");
  }
  std::vector<double> grid;
  grid.reserve(gains.size());
  for (const auto& g : gains) {
    if (!g.is_number()) {
      throw ParseError(root + ".power_map.gain_db: expected numbers");
    }
    grid.push_back(g.get<double>());
  }
  try {
    scm.power_map = PowerMap::from_grid(res, std::move(grid));
  } catch (const std::invalid_argument& e) {
    throw ParseError(root + ".power_map: " + e.what());
  }

  const json& prop = field(j, "propagation_map", root);
  double defexp = num_field(prop, "default_exponent", root + ".propagation_map");
  const json& sectors = field(prop, "sectors", root + ".propagation_map");
  if (!sectors.is_array() || sectors.empty()) {
    throw ParseError(root + ".propagation_map.sectors: expected nonempty array");
  }
  std::vector<PropagationMap::Sector> secs;
  for (const auto& s : sectors) {
    const std::string spath = root + ".propagation_map.sectors";
    PropagationMap::Sector sec;
    sec.start_deg = num_field(s, "start_deg", spath);
    sec.end_deg = num_field(s, "end_deg", spath);
    sec.exponent = num_field(s, "exponent", spath);
    const json& fd = field(s, "from_default", spath);
    if (!fd.is_boolean()) throw ParseError(spath + ".from_default: expected bool");
    sec.from_default = fd.get<bool>();
    secs.push_back(sec);
  }
  try {
    scm.propagation_map = PropagationMap::from_sectors(secs, defexp);
  } catch (const std::invalid_argument& e) {
    throw ParseError(root + ".propagation_map: " + e.what());
  }

  const json& sched = field(j, "schedule", root);
  const json& ss = field(sched, "start_s", root + ".schedule");
  const json& se = field(sched, "end_s", root + ".schedule");
  if (!ss.is_number_integer() || !se.is_number_integer()) {
    throw ParseError(root + ".schedule: expected integer timestamps");
  }
  scm.schedule = {ss.get<std::int64_t>(), se.get<std::int64_t>()};

  const json& loc = field(j, "location", root);
  const json& lk = field(loc, "kind", root + ".location");
  if (!lk.is_string()) throw ParseError(root + ".location.kind: expected string");
  try {
    scm.location.kind = location_kind_from_string(lk.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ParseError(root + ".location.kind: " + e.what());
  }
  const json& geo = field(loc, "geometry", root + ".location");
  if (!geo.is_array()) {
    throw ParseError(root + ".location.geometry: expected array");
  }
  for (const auto& p : geo) {
    if (!p.is_array() || p.size() != 3 || !p[0].is_number() ||
        !p[1].is_number() || !p[2].is_number()) {
      throw ParseError(root + ".location.geometry: expected [e, n, u] triples");
    }
    scm.location.geometry.push_back(
        {p[0].get<double>(), p[1].get<double>(), p[2].get<double>()});
  }

  if (j.contains("extras")) {
    scm.extras_json = j["extras"].dump();
  }

  try {
    validate_scm(scm);
  } catch (const std::invalid_argument& e) {
    throw ParseError(origin + ": " + e.what());
  }
  return scm;
}

SpectrumConsumptionModel parse_scm_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ParseError(path + ": cannot open");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_scm_text(ss.str(), path);
}

void write_scm_file(const SpectrumConsumptionModel& scm,
                    const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ParseError(path + ": cannot open for writing");
  f << serialize_scm(scm);
}

}  // namespace mmscm
