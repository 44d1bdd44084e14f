// SPDX-License-Identifier: Apache-2.0
#include "mmscm/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "mmscm/units.hpp"

namespace mmscm {

namespace {

[[noreturn]] void fail(const std::string& origin, int line,
                       const std::string& msg) {
  throw ParseError(origin + ":" + std::to_string(line) + ": " + msg);
}

std::string fmt_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

double parse_double(const std::string& tok, const std::string& origin,
                    int line, const char* what) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    fail(origin, line, std::string("bad ") + what + " value '" + tok + "'");
  }
  if (pos != tok.size() || !std::isfinite(v)) {
    fail(origin, line, std::string("bad ") + what + " value '" + tok + "'");
  }
  return v;
}

bool is_blank_or_comment(const std::string& line) {
  for (char c : line) {
    if (c == '#') return true;
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Condition condition_from_string(std::string_view s) {
  if (s == "standard") return Condition::standard;
  if (s == "no_leaves") return Condition::no_leaves;
  if (s == "tx_raised") return Condition::tx_raised;
  if (s == "swap") return Condition::swap;
  if (s == "street") return Condition::street;
  if (s == "wall") return Condition::wall;
  if (s == "adjacent") return Condition::adjacent;
  throw ParseError("unknown condition '" + std::string(s) + "'");
}

std::string to_string(Condition c) {
  switch (c) {
    case Condition::standard: return "standard";
    case Condition::no_leaves: return "no_leaves";
    case Condition::tx_raised: return "tx_raised";
    case Condition::swap: return "swap";
    case Condition::street: return "street";
    case Condition::wall: return "wall";
    case Condition::adjacent: return "adjacent";
  }
  return "standard";
}

VisualLos visual_los_from_string(std::string_view s) {
  if (s == "VLOS") return VisualLos::VLOS;
  if (s == "VNLOS") return VisualLos::VNLOS;
  throw ParseError("unknown visual_los '" + std::string(s) + "'");
}

std::string to_string(VisualLos v) {
  return v == VisualLos::VLOS ? "VLOS" : "VNLOS";
}

SidewalkDataset parse_measurement_text(std::string_view text,
                                       const std::string& origin) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;

  auto next_line = [&](std::string& out) {
    while (std::getline(in, out)) {
      ++lineno;
      if (!is_blank_or_comment(out)) return true;
    }
    return false;
  };

  if (!next_line(line)) throw ParseError(origin + ": empty measurement file");
  if (split_ws(line) != std::vector<std::string>{"mms/1"}) {
    fail(origin, lineno, "expected version header 'mms/1'");
  }

  SidewalkDataset ds;
  std::map<std::string, std::size_t> link_index;
  bool saw_id = false;

  // Header block, terminated by the 'samples' marker.
  bool in_samples = false;
  while (next_line(line)) {
    auto tok = split_ws(line);
    if (tok.size() == 1 && tok[0] == "samples") {
      in_samples = true;
      break;
    }
    const std::string& key = tok[0];
    if (key == "sidewalk_id") {
      if (tok.size() != 2) fail(origin, lineno, "sidewalk_id wants one value");
      ds.sidewalk_id = tok[1];
      saw_id = true;
    } else if (key == "condition") {
      if (tok.size() != 2) fail(origin, lineno, "condition wants one value");
      try {
        ds.condition = condition_from_string(tok[1]);
      } catch (const ParseError& e) {
        fail(origin, lineno, e.what());
      }
    } else if (key == "visual_los") {
      if (tok.size() != 2) fail(origin, lineno, "visual_los wants one value");
      try {
        ds.visual_los = visual_los_from_string(tok[1]);
      } catch (const ParseError& e) {
        fail(origin, lineno, e.what());
      }
    } else if (key == "tx_power_dbm") {
      if (tok.size() != 2) fail(origin, lineno, "tx_power_dbm wants one value");
      ds.tx_power_dbm = parse_double(tok[1], origin, lineno, "tx_power_dbm");
    } else if (key == "rx_nominal_azimuth_gain_dbi") {
      if (tok.size() != 2) fail(origin, lineno, "gain wants one value");
      ds.rx_nominal_azimuth_gain_dbi =
          parse_double(tok[1], origin, lineno, "rx_nominal_azimuth_gain_dbi");
    } else if (key == "rx_total_gain_dbi") {
      if (tok.size() != 2) fail(origin, lineno, "gain wants one value");
      ds.rx_total_gain_dbi =
          parse_double(tok[1], origin, lineno, "rx_total_gain_dbi");
    } else if (key == "link") {
      if (tok.size() != 9) {
        fail(origin, lineno,
             "link wants: id txE txN txU rxE rxN rxU scan_count");
      }
      PowerAngularRecord rec;
      rec.link_id = tok[1];
      rec.tx_pos = {parse_double(tok[2], origin, lineno, "tx east"),
                    parse_double(tok[3], origin, lineno, "tx north"),
                    parse_double(tok[4], origin, lineno, "tx up")};
      rec.rx_pos = {parse_double(tok[5], origin, lineno, "rx east"),
                    parse_double(tok[6], origin, lineno, "rx north"),
                    parse_double(tok[7], origin, lineno, "rx up")};
      double sc = parse_double(tok[8], origin, lineno, "scan_count");
      if (sc < 0 || sc != std::floor(sc)) {
        fail(origin, lineno, "scan_count must be a nonnegative integer");
      }
      rec.scan_count = static_cast<int>(sc);
      if (!position_is_valid(rec.tx_pos) || !position_is_valid(rec.rx_pos)) {
        fail(origin, lineno, "position out of range for link " + rec.link_id);
      }
      if (link_index.count(rec.link_id)) {
        fail(origin, lineno, "duplicate link id " + rec.link_id);
      }
      link_index[rec.link_id] = ds.records.size();
      ds.records.push_back(std::move(rec));
    } else {
      fail(origin, lineno, "unknown header key '" + key + "'");
    }
  }

  if (!saw_id) throw ParseError(origin + ": missing sidewalk_id");
  if (!in_samples) throw ParseError(origin + ": missing 'samples' section");
  if (ds.records.empty()) throw ParseError(origin + ": no link declared");

  long n_samples = 0;
  while (next_line(line)) {
    auto tok = split_ws(line);
    if (tok.size() != 4) {
      fail(origin, lineno, "sample wants: link_id time_s azimuth_deg power_dbm");
    }
    auto it = link_index.find(tok[0]);
    if (it == link_index.end()) {
      fail(origin, lineno, "sample references undeclared link " + tok[0]);
    }
    AngularSample s;
    s.time_s = parse_double(tok[1], origin, lineno, "time");
    s.azimuth_deg = parse_double(tok[2], origin, lineno, "azimuth");
    s.power_dbm = parse_double(tok[3], origin, lineno, "power");
    if (s.azimuth_deg < 0.0 || s.azimuth_deg >= 360.0) {
      fail(origin, lineno, "azimuth " + tok[2] + " outside [0,360)");
    }
    PowerAngularRecord& rec = ds.records[it->second];
    if (!rec.samples.empty() && s.time_s < rec.samples.back().time_s) {
      fail(origin, lineno, "time decreases within link " + tok[0]);
    }
    rec.samples.push_back(s);
    ++n_samples;
  }
  if (n_samples == 0) throw ParseError(origin + ": no samples");
  for (const auto& rec : ds.records) {
    if (rec.samples.empty()) {
      throw ParseError(origin + ": link " + rec.link_id + " has no samples");
    }
  }

  // Distances are always recomputed from the declared positions.
  for (auto& rec : ds.records) {
    rec.link_distance_m = geometry::link_distance_3d(rec.tx_pos, rec.rx_pos);
  }
  std::stable_sort(ds.records.begin(), ds.records.end(),
                   [](const PowerAngularRecord& a, const PowerAngularRecord& b) {
                     return a.link_distance_m < b.link_distance_m;
                   });
  return ds;
}

SidewalkDataset parse_measurement_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ParseError(path + ": cannot open");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_measurement_text(ss.str(), path);
}

std::string serialize_measurement(const SidewalkDataset& ds) {
  std::ostringstream out;
  out << "mms/1\n";
  out << "sidewalk_id " << ds.sidewalk_id << "\n";
  out << "condition " << to_string(ds.condition) << "\n";
  out << "visual_los " << to_string(ds.visual_los) << "\n";
  out << "tx_power_dbm " << fmt_num(ds.tx_power_dbm) << "\n";
  out << "rx_nominal_azimuth_gain_dbi "
      << fmt_num(ds.rx_nominal_azimuth_gain_dbi) << "\n";
  out << "rx_total_gain_dbi " << fmt_num(ds.rx_total_gain_dbi) << "\n";
  for (const auto& rec : ds.records) {
    out << "link " << rec.link_id << " " << fmt_num(rec.tx_pos.east) << " "
        << fmt_num(rec.tx_pos.north) << " " << fmt_num(rec.tx_pos.up) << " "
        << fmt_num(rec.rx_pos.east) << " " << fmt_num(rec.rx_pos.north) << " "
        << fmt_num(rec.rx_pos.up) << " " << rec.scan_count << "\n";
  }
  out << "samples\n";
  for (const auto& rec : ds.records) {
    for (const auto& s : rec.samples) {
      out << rec.link_id << " " << fmt_num(s.time_s) << " "
          << fmt_num(s.azimuth_deg) << " " << fmt_num(s.power_dbm) << "\n";
    }
  }
  return out.str();
}

void write_measurement_file(const SidewalkDataset& ds,
                            const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ParseError(path + ": cannot open for writing");
  f << serialize_measurement(ds);
}

namespace {

double cut_gain(const std::vector<PatternKnot>& cut, double angle_deg,
                const char* which) {
  // Wrap into [-180, 180].
  double a = std::fmod(angle_deg + 180.0, 360.0);
  if (a < 0) a += 360.0;
  a -= 180.0;
  if (cut.empty() || a < cut.front().angle_deg - 1e-9 ||
      a > cut.back().angle_deg + 1e-9) {
    throw std::invalid_argument(std::string(which) +
                                " angle outside pattern coverage");
  }
  auto hi = std::lower_bound(
      cut.begin(), cut.end(), a,
      [](const PatternKnot& k, double v) { return k.angle_deg < v; });
  if (hi == cut.end()) return cut.back().rel_gain_db;
  if (hi == cut.begin()) return cut.front().rel_gain_db;
  auto lo = hi - 1;
  double t = (a - lo->angle_deg) / (hi->angle_deg - lo->angle_deg);
  return lo->rel_gain_db + t * (hi->rel_gain_db - lo->rel_gain_db);
}

void check_and_normalize_cut(std::vector<PatternKnot>& cut, const char* which,
                             double* peak_adjust) {
  if (cut.size() < 2) {
    throw ParseError(std::string(which) + " cut needs at least 2 knots");
  }
  double maxg = cut.front().rel_gain_db;
  for (std::size_t i = 0; i < cut.size(); ++i) {
    if (i > 0 && cut[i].angle_deg <= cut[i - 1].angle_deg) {
      throw ParseError(std::string(which) + " cut angles not increasing");
    }
    maxg = std::max(maxg, cut[i].rel_gain_db);
  }
  if (cut.front().angle_deg > -180.0 + 1e-9 ||
      cut.back().angle_deg < 180.0 - 1e-9) {
    throw ParseError(std::string(which) + " cut must cover [-180, 180]");
  }
  if (maxg > 0.01) {
    throw ParseError(std::string(which) + " cut has positive relative gain");
  }
  for (auto& k : cut) k.rel_gain_db -= maxg;
  *peak_adjust += maxg;
}

}  // namespace

double AntennaPattern::azimuth_gain_db(double angle_deg) const {
  return cut_gain(azimuth_cut, angle_deg, "azimuth");
}

double AntennaPattern::elevation_gain_db(double angle_deg) const {
  return cut_gain(elevation_cut, angle_deg, "elevation");
}

AntennaPattern parse_antenna_pattern_text(std::string_view text,
                                          const std::string& origin) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  auto next_line = [&](std::string& out) {
    while (std::getline(in, out)) {
      ++lineno;
      if (!is_blank_or_comment(out)) return true;
    }
    return false;
  };

  if (!next_line(line)) throw ParseError(origin + ": empty pattern file");
  if (split_ws(line) != std::vector<std::string>{"pat/1"}) {
    fail(origin, lineno, "expected version header 'pat/1'");
  }

  AntennaPattern p;
  bool saw_peak = false;
  std::vector<PatternKnot>* current = nullptr;
  while (next_line(line)) {
    auto tok = split_ws(line);
    if (tok.size() == 2 && tok[0] == "peak_gain_dbi") {
      p.peak_gain_dbi = parse_double(tok[1], origin, lineno, "peak_gain_dbi");
      saw_peak = true;
      continue;
    }
    if (tok.size() == 1 && tok[0] == "azimuth") {
      current = &p.azimuth_cut;
      continue;
    }
    if (tok.size() == 1 && tok[0] == "elevation") {
      current = &p.elevation_cut;
      continue;
    }
    if (!current) fail(origin, lineno, "knot row before a cut label");
    if (tok.size() != 1) fail(origin, lineno, "expected angle_deg,rel_gain_db");
    auto comma = tok[0].find(',');
    if (comma == std::string::npos) {
      fail(origin, lineno, "expected angle_deg,rel_gain_db");
    }
    PatternKnot k;
    k.angle_deg =
        parse_double(tok[0].substr(0, comma), origin, lineno, "angle");
    k.rel_gain_db =
        parse_double(tok[0].substr(comma + 1), origin, lineno, "gain");
    current->push_back(k);
  }
  if (!saw_peak) throw ParseError(origin + ": missing peak_gain_dbi");

  double adjust = 0.0;
  try {
    check_and_normalize_cut(p.azimuth_cut, "azimuth", &adjust);
    check_and_normalize_cut(p.elevation_cut, "elevation", &adjust);
  } catch (const ParseError& e) {
    throw ParseError(origin + ": " + e.what());
  }
  // Keep the absolute boresight gain unchanged under renormalization.
  p.peak_gain_dbi += adjust;
  return p;
}

AntennaPattern parse_antenna_pattern(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ParseError(path + ": cannot open");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_antenna_pattern_text(ss.str(), path);
}

std::string serialize_antenna_pattern(const AntennaPattern& p) {
  std::ostringstream out;
  out << "pat/1\n";
  out << "peak_gain_dbi " << fmt_num(p.peak_gain_dbi) << "\n";
  out << "azimuth\n";
  for (const auto& k : p.azimuth_cut) {
    out << fmt_num(k.angle_deg) << "," << fmt_num(k.rel_gain_db) << "\n";
  }
  out << "elevation\n";
  for (const auto& k : p.elevation_cut) {
    out << fmt_num(k.angle_deg) << "," << fmt_num(k.rel_gain_db) << "\n";
  }
  return out.str();
}

AntennaPattern isotropic_pattern(double peak_gain_dbi) {
  AntennaPattern p;
  p.azimuth_cut = {{-180.0, 0.0}, {180.0, 0.0}};
  p.elevation_cut = {{-180.0, 0.0}, {180.0, 0.0}};
  p.peak_gain_dbi = peak_gain_dbi;
  return p;
}

AntennaPattern gaussian_horn_pattern(double peak_gain_dbi, double az_hpbw_deg,
                                     double el_hpbw_deg, double floor_db) {
  auto cut = [&](double hpbw) {
    std::vector<PatternKnot> knots;
    knots.reserve(361);
    for (int a = -180; a <= 180; ++a) {
      double g = -12.0 * (a / hpbw) * (a / hpbw);
      knots.push_back({static_cast<double>(a), std::max(g, floor_db)});
    }
    return knots;
  };
  AntennaPattern p;
  p.azimuth_cut = cut(az_hpbw_deg);
  p.elevation_cut = cut(el_hpbw_deg);
  p.peak_gain_dbi = peak_gain_dbi;
  return p;
}

ValidationReport validate_dataset(const SidewalkDataset& ds) {
  ValidationReport report;
  for (const auto& rec : ds.records) {
    if (rec.samples.size() < 16000) {
      report.warnings.push_back(
          {rec.link_id, "only " + std::to_string(rec.samples.size()) +
                            " samples (full fidelity needs 16000)"});
    }
    if (rec.scan_count < 40) {
      report.warnings.push_back(
          {rec.link_id, "only " + std::to_string(rec.scan_count) +
                            " scans (full fidelity needs 40)"});
    }
    double mean_mw = 0.0;
    for (const auto& s : rec.samples) mean_mw += db_to_linear(s.power_dbm);
    mean_mw /= static_cast<double>(rec.samples.size());
    double implied_pg = linear_to_db(mean_mw) - ds.tx_power_dbm;
    if (implied_pg < -161.0) {
      report.warnings.push_back(
          {rec.link_id, "implied path gain " + fmt_num(implied_pg) +
                            " dB below sounder floor (-161 dB)"});
    } else if (implied_pg > -62.0) {
      report.warnings.push_back(
          {rec.link_id, "implied path gain " + fmt_num(implied_pg) +
                            " dB above sounder ceiling (-62 dB)"});
    }
  }
  for (std::size_t i = 1; i < ds.records.size(); ++i) {
    if (std::fabs(ds.records[i].link_distance_m -
                  ds.records[i - 1].link_distance_m) < 1e-6) {
      report.warnings.push_back(
          {ds.records[i].link_id,
           "duplicate link distance with " + ds.records[i - 1].link_id});
    }
  }
  return report;
}

std::ostream& operator<<(std::ostream& os, const ValidationReport& report) {
  if (report.clean()) return os << "clean\n";
  for (const auto& w : report.warnings) {
    if (w.link_id.empty()) {
      os << "dataset: " << w.message << "\n";
    } else {
      os << w.link_id << ": " << w.message << "\n";
    }
  }
  return os;
}

}  // namespace mmscm
