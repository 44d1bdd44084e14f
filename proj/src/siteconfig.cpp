// SPDX-License-Identifier: Apache-2.0
#include "mmscm/siteconfig.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace mmscm {

using nlohmann::json;

namespace {

json position_to_json(const Position3D& p) {
  return json::array({p.east, p.north, p.up});
}

Position3D position_from_json(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 3 || !v[0].is_number() ||
      !v[1].is_number() || !v[2].is_number()) {
    throw ParseError(path + ": expected [east, north, up]");
  }
  Position3D p{v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
  if (!position_is_valid(p)) {
    throw ParseError(path + ": coordinates out of range");
  }
  return p;
}

double number_field(const json& obj, const char* key, const std::string& path) {
  const json& v = obj.at(key);
  if (!v.is_number()) throw ParseError(path + "." + key + ": expected number");
  double d = v.get<double>();
  if (!std::isfinite(d)) throw ParseError(path + "." + key + ": must be finite");
  return d;
}

void apply_budget(const json& b, const std::string& path, LinkBudget& out) {
  if (!b.is_object()) throw ParseError(path + ": expected object");
  static const std::set<std::string> known = {
      "tx_power_dbm",      "tx_max_gain_dbi", "rx_gain_dbi",
      "noise_figure_db",   "bandwidth_hz",    "snr_cutoff_db",
      "median_abg_dbi",    "nominal_azimuth_gain_dbi"};
  for (auto it = b.begin(); it != b.end(); ++it) {
    if (!known.count(it.key())) {
      throw ParseError(path + "." + it.key() + ": unknown budget field");
    }
  }
  if (b.contains("tx_power_dbm")) out.tx_power_dbm = number_field(b, "tx_power_dbm", path);
  if (b.contains("tx_max_gain_dbi")) out.tx_max_gain_dbi = number_field(b, "tx_max_gain_dbi", path);
  if (b.contains("rx_gain_dbi")) out.rx_gain_dbi = number_field(b, "rx_gain_dbi", path);
  if (b.contains("noise_figure_db")) out.noise_figure_db = number_field(b, "noise_figure_db", path);
  if (b.contains("bandwidth_hz")) out.bandwidth_hz = number_field(b, "bandwidth_hz", path);
  if (b.contains("snr_cutoff_db")) out.snr_cutoff_db = number_field(b, "snr_cutoff_db", path);
  if (b.contains("median_abg_dbi")) out.median_abg_dbi = number_field(b, "median_abg_dbi", path);
  if (b.contains("nominal_azimuth_gain_dbi")) {
    out.nominal_azimuth_gain_dbi = number_field(b, "nominal_azimuth_gain_dbi", path);
  }
  if (!(out.bandwidth_hz > 0.0)) {
    throw ParseError(path + ".bandwidth_hz: must be positive");
  }
}

}  // namespace

SiteConfig parse_site_text(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(origin + ": " + e.what());
  }
  const std::string root = origin;
  if (!j.is_object()) throw ParseError(root + ": expected a JSON object");
  if (!j.contains("schema") || j.at("schema") != "site/1") {
    throw ParseError(root + ".schema: expected \"site/1\"");
  }

  SiteConfig cfg;
  if (!j.contains("site_id") || !j.at("site_id").is_string()) {
    throw ParseError(root + ".site_id: expected string");
  }
  cfg.site_id = j.at("site_id").get<std::string>();
  if (cfg.site_id.empty()) throw ParseError(root + ".site_id: must be nonempty");

  if (!j.contains("rx_position")) {
    throw ParseError(root + ".rx_position: required");
  }
  cfg.rx_position = position_from_json(j.at("rx_position"), root + ".rx_position");

  if (!j.contains("sidewalks") || !j.at("sidewalks").is_array()) {
    throw ParseError(root + ".sidewalks: expected array");
  }
  std::set<std::string> seen;
  int idx = 0;
  for (const json& s : j.at("sidewalks")) {
    std::ostringstream pp;
    pp << root << ".sidewalks[" << idx++ << "]";
    const std::string path = pp.str();
    if (!s.is_object()) throw ParseError(path + ": expected object");

    SidewalkSite sw;
    if (!s.contains("sidewalk_id") || !s.at("sidewalk_id").is_string()) {
      throw ParseError(path + ".sidewalk_id: expected string");
    }
    sw.sidewalk_id = s.at("sidewalk_id").get<std::string>();
    if (sw.sidewalk_id.empty() || !seen.insert(sw.sidewalk_id).second) {
      throw ParseError(path + ".sidewalk_id: must be nonempty and unique");
    }
    sw.bearing_deg = number_field(s, "bearing_deg", path);
    if (!(sw.bearing_deg >= 0.0) || !(sw.bearing_deg < 360.0)) {
      throw ParseError(path + ".bearing_deg: must lie in [0, 360)");
    }
    if (s.contains("facade")) {
      const json& f = s.at("facade");
      if (!f.is_array() || f.size() != 2) {
        throw ParseError(path + ".facade: expected two endpoint positions");
      }
      FacadeLine line;
      line.a = position_from_json(f[0], path + ".facade[0]");
      line.b = position_from_json(f[1], path + ".facade[1]");
      if (geometry::horizontal_distance(line.a, line.b) < 1e-9) {
        throw ParseError(path + ".facade: endpoints coincide");
      }
      sw.facade = line;
    }
    if (s.contains("corner")) {
      CornerPoint c;
      c.position = position_from_json(s.at("corner"), path + ".corner");
      sw.corner = c;
    }
    if (s.contains("measurement_file")) {
      if (!s.at("measurement_file").is_string()) {
        throw ParseError(path + ".measurement_file: expected string");
      }
      sw.measurement_file = s.at("measurement_file").get<std::string>();
    }
    cfg.sidewalks.push_back(std::move(sw));
  }

  if (j.contains("budget")) {
    apply_budget(j.at("budget"), root + ".budget", cfg.budget);
  }
  return cfg;
}

SiteConfig parse_site_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  SiteConfig cfg = parse_site_text(ss.str(), path);

  namespace fs = std::filesystem;
  fs::path base = fs::path(path).parent_path();
  for (const auto& sw : cfg.sidewalks) {
    if (sw.measurement_file.empty()) continue;
    fs::path f = base / sw.measurement_file;
    if (!fs::exists(f)) {
      throw ParseError(path + ": referenced file missing: " + f.string());
    }
  }
  return cfg;
}

std::string serialize_site(const SiteConfig& cfg) {
  json j;
  j["schema"] = "site/1";
  j["site_id"] = cfg.site_id;
  j["rx_position"] = position_to_json(cfg.rx_position);
  json sws = json::array();
  for (const auto& sw : cfg.sidewalks) {
    json s;
    s["sidewalk_id"] = sw.sidewalk_id;
    s["bearing_deg"] = sw.bearing_deg;
    if (sw.facade) {
      s["facade"] = json::array(
          {position_to_json(sw.facade->a), position_to_json(sw.facade->b)});
    }
    if (sw.corner) s["corner"] = position_to_json(sw.corner->position);
    if (!sw.measurement_file.empty()) {
      s["measurement_file"] = sw.measurement_file;
    }
    sws.push_back(std::move(s));
  }
  j["sidewalks"] = std::move(sws);
  json b;
  b["tx_power_dbm"] = cfg.budget.tx_power_dbm;
  b["tx_max_gain_dbi"] = cfg.budget.tx_max_gain_dbi;
  b["rx_gain_dbi"] = cfg.budget.rx_gain_dbi;
  b["noise_figure_db"] = cfg.budget.noise_figure_db;
  b["bandwidth_hz"] = cfg.budget.bandwidth_hz;
  b["snr_cutoff_db"] = cfg.budget.snr_cutoff_db;
  b["median_abg_dbi"] = cfg.budget.median_abg_dbi;
  b["nominal_azimuth_gain_dbi"] = cfg.budget.nominal_azimuth_gain_dbi;
  j["budget"] = std::move(b);
  return j.dump() + "\n";
}

const SidewalkSite* find_sidewalk(const SiteConfig& cfg,
                                  const std::string& sidewalk_id) {
  for (const auto& sw : cfg.sidewalks) {
    if (sw.sidewalk_id == sidewalk_id) return &sw;
  }
  return nullptr;
}

}  // namespace mmscm
