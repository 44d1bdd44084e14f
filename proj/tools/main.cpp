// SPDX-License-Identifier: Apache-2.0
//
// mmscm: measurement ingest, channel metrics, path-gain fitting, coverage,
// spectrum consumption models, compatibility checks, and channel
// deconfliction trials from one binary.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mmscm/channel_metrics.hpp"
#include "mmscm/compat.hpp"
#include "mmscm/coverage.hpp"
#include "mmscm/deconflict.hpp"
#include "mmscm/ingest.hpp"
#include "mmscm/pathloss.hpp"
#include "mmscm/pipeline.hpp"
#include "mmscm/scm.hpp"
#include "mmscm/siteconfig.hpp"
#include "mmscm/synth.hpp"
#include "mmscm/units.hpp"

namespace {

using namespace mmscm;

// Fixed 6-significant-digit numeric formatting keeps every output stable
// enough for golden files.
std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << text;
  if (!out) throw std::runtime_error(path + ": write failed");
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_text(out_path, text);
  }
}

// Two-column CSV (comma or whitespace), '#' comments.
std::vector<std::pair<double, double>> parse_pairs_csv(const std::string& path) {
  std::vector<std::pair<double, double>> rows;
  std::istringstream in(slurp(path));
  std::string line;
  int ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    for (char& c : line) {
      if (c == ',') c = ' ';
    }
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first) || first[0] == '#') continue;
    double a = 0.0, b = 0.0;
    try {
      a = std::stod(first);
    } catch (...) {
      throw std::runtime_error(path + ":" + std::to_string(ln) +
                               ": expected a number");
    }
    if (!(ls >> b)) {
      throw std::runtime_error(path + ":" + std::to_string(ln) +
                               ": expected two columns");
    }
    rows.emplace_back(a, b);
  }
  if (rows.empty()) throw std::runtime_error(path + ": no data rows");
  return rows;
}

std::vector<PropagationMap::Sector> parse_sectors_csv(const std::string& path) {
  std::vector<PropagationMap::Sector> sectors;
  std::istringstream in(slurp(path));
  std::string line;
  int ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    for (char& c : line) {
      if (c == ',') c = ' ';
    }
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first) || first[0] == '#') continue;
    PropagationMap::Sector s;
    try {
      s.start_deg = std::stod(first);
    } catch (...) {
      throw std::runtime_error(path + ":" + std::to_string(ln) +
                               ": expected a number");
    }
    if (!(ls >> s.end_deg >> s.exponent)) {
      throw std::runtime_error(path + ":" + std::to_string(ln) +
                               ": expected start,end,exponent");
    }
    sectors.push_back(s);
  }
  if (sectors.empty()) throw std::runtime_error(path + ": no data rows");
  return sectors;
}

std::string dataset_summary(const SidewalkDataset& ds) {
  std::size_t samples = 0;
  for (const auto& r : ds.records) samples += r.samples.size();
  std::ostringstream os;
  os << "sidewalk " << ds.sidewalk_id << " condition " << to_string(ds.condition)
     << " visual_los " << to_string(ds.visual_los) << " links "
     << ds.records.size() << " samples " << samples << "\n";
  return os.str();
}

std::string metrics_csv(const std::vector<LinkMetrics>& rows) {
  std::ostringstream os;
  os << "link_id,distance_m,path_gain_db,azimuth_gain_dbi,aoa_deg,k_factor_db\n";
  for (const auto& m : rows) {
    os << m.link_id << ',' << num(m.distance_m) << ',' << num(m.path_gain_db)
       << ',' << num(m.azimuth_gain_dbi) << ',' << num(m.aoa_deg) << ',';
    if (m.k_factor_db) os << num(*m.k_factor_db);
    os << '\n';
  }
  return os.str();
}

std::string fit_table_header() {
  return "name,length_m,links,slope_n,intercept_db,rms_db,median_abg_dbi,"
         "p10_abg_dbi\n";
}

std::string fit_table_row(const FitRow& r) {
  std::ostringstream os;
  os << r.name << ',' << num(r.length_m) << ',' << r.links << ','
     << num(r.slope_n) << ',' << num(r.intercept_b_db) << ','
     << num(r.rms_sigma_db) << ',' << num(r.median_abg_dbi) << ','
     << num(r.p10_abg_dbi) << '\n';
  return os.str();
}

PathGainFit fit_from_preset(const SidewalkPreset& p) {
  PathGainFit fit;
  fit.slope_n = p.slope_n;
  fit.intercept_b_db = p.intercept_db;
  fit.rms_sigma_db = p.sigma_db;
  fit.d_min_m = 10.0;
  fit.d_max_m = p.length_m;
  fit.count = p.link_count;
  fit.label = p.name;
  return fit;
}

struct MaskFlags {
  std::string mask_csv;
  double default_center_hz = 0.0;
  double default_bw_hz = 1e6;
};

FrequencyMask mask_from_flags(const MaskFlags& f, bool is_tx) {
  if (!f.mask_csv.empty()) {
    std::vector<MaskBreakpoint> pts;
    for (auto [a, b] : parse_pairs_csv(f.mask_csv)) pts.push_back({a, b});
    return FrequencyMask(std::move(pts));
  }
  if (f.default_center_hz > 0.0) {
    return is_tx ? default_tx_mask(f.default_center_hz, f.default_bw_hz)
                 : default_underlay_mask(f.default_center_hz, f.default_bw_hz);
  }
  throw std::runtime_error("need --mask-csv or --default-mask-center");
}

int run(int argc, char** argv) {
  CLI::App app{
      "Rotating-receiver measurement toolkit: channel metrics, path-gain "
      "models, coverage, spectrum consumption models, and deconfliction."};
  app.require_subcommand(1);
  app.set_version_flag("--version", "mmscm 0.1.0");

  // ---- ingest ---------------------------------------------------------
  auto* c_ingest = app.add_subcommand(
      "ingest", "Parse a measurement file and emit the normalized form");
  std::string ingest_in, ingest_out;
  c_ingest->add_option("file", ingest_in, "measurement file (mms/1)")
      ->required();
  c_ingest->add_option("-o,--output", ingest_out,
                       "write the normalized file here");

  // ---- validate -------------------------------------------------------
  auto* c_validate = app.add_subcommand(
      "validate", "Check a measurement file against the sounder's envelope");
  std::string validate_in;
  c_validate->add_option("file", validate_in, "measurement file (mms/1)")
      ->required();

  // ---- metrics --------------------------------------------------------
  auto* c_metrics = app.add_subcommand(
      "metrics", "Per-link path gain, beamforming gain, AoA and K-factor");
  std::string metrics_in, metrics_out, metrics_pat;
  double metrics_bin = 1.0, metrics_kwin = 10.0;
  bool metrics_no_k = false;
  c_metrics->add_option("file", metrics_in, "measurement file (mms/1)")
      ->required();
  c_metrics->add_option("-o,--output", metrics_out, "write CSV here");
  c_metrics->add_option("--bin-width", metrics_bin,
                        "azimuth bin width in degrees")
      ->capture_default_str();
  c_metrics->add_option("--elevation-pattern", metrics_pat,
                        "pattern file (pat/1) for the elevation correction");
  c_metrics->add_option("--k-window", metrics_kwin,
                        "gate width around the AoA for the K estimate")
      ->capture_default_str();
  c_metrics->add_flag("--no-k", metrics_no_k, "skip the K-factor estimate");

  // ---- fit ------------------------------------------------------------
  auto* c_fit = app.add_subcommand(
      "fit", "Single-slope path-gain fit per measurement file");
  std::vector<std::string> fit_in;
  std::string fit_out;
  bool fit_pooled = false;
  c_fit->add_option("files", fit_in, "measurement files (mms/1)")
      ->required()
      ->expected(-1);
  c_fit->add_option("-o,--output", fit_out, "write CSV here");
  c_fit->add_flag("--pooled", fit_pooled, "append a pooled fit over all files");

  // ---- compare --------------------------------------------------------
  auto* c_compare = app.add_subcommand(
      "compare", "Compare two fitted models, optionally against TR 38.901");
  std::string cmp_a, cmp_b;
  std::vector<double> cmp_at{10.0, 50.0, 100.0, 200.0};
  bool cmp_umi = false;
  double cmp_hbs = 15.0, cmp_hut = 1.5, cmp_freq = 28e9;
  c_compare->add_option("file_a", cmp_a, "measurement file (mms/1)")->required();
  c_compare->add_option("file_b", cmp_b, "second measurement file (mms/1)")
      ->required();
  c_compare->add_option("--at", cmp_at, "distances (m) for point deltas")
      ->capture_default_str();
  c_compare->add_flag("--umi", cmp_umi,
                      "also tabulate street-canyon LOS/NLOS reference gains");
  c_compare->add_option("--h-bs", cmp_hbs, "base station height (m)")
      ->capture_default_str();
  c_compare->add_option("--h-ut", cmp_hut, "terminal height (m)")
      ->capture_default_str();
  c_compare->add_option("--freq", cmp_freq, "carrier frequency (Hz)")
      ->capture_default_str();

  // ---- coverage -------------------------------------------------------
  auto* c_coverage = app.add_subcommand(
      "coverage", "SNR profile and cutoff distance from a fitted model");
  std::string cov_in, cov_preset, cov_profile_out, cov_site;
  LinkBudget cov_budget;
  bool cov_budget_abg_set = false;
  double cov_step = 1.0;
  c_coverage->add_option("file", cov_in, "measurement file (mms/1)");
  c_coverage->add_option("--preset", cov_preset,
                         "use a bundled sidewalk preset instead of a file");
  c_coverage->add_option("--site", cov_site,
                         "site config (site/1) supplying budget defaults");
  c_coverage->add_option("--profile", cov_profile_out,
                         "write the distance/SNR profile CSV here");
  c_coverage->add_option("--step", cov_step, "profile grid step (m)")
      ->capture_default_str();
  c_coverage->add_option("--tx-power", cov_budget.tx_power_dbm,
                         "transmit power (dBm)")->capture_default_str();
  c_coverage->add_option("--tx-gain", cov_budget.tx_max_gain_dbi,
                         "maximum Tx array gain (dBi)")->capture_default_str();
  c_coverage->add_option("--rx-gain", cov_budget.rx_gain_dbi,
                         "Rx gain (dBi)")->capture_default_str();
  c_coverage->add_option("--nf", cov_budget.noise_figure_db,
                         "noise figure (dB)")->capture_default_str();
  c_coverage->add_option("--bw", cov_budget.bandwidth_hz,
                         "bandwidth (Hz)")->capture_default_str();
  c_coverage->add_option("--snr-cutoff", cov_budget.snr_cutoff_db,
                         "SNR threshold (dB)")->capture_default_str();
  auto* cov_abg_opt =
      c_coverage->add_option("--median-abg", cov_budget.median_abg_dbi,
                             "measured median beamforming gain (dBi)");
  cov_abg_opt->capture_default_str();
  c_coverage->add_option("--nominal-abg", cov_budget.nominal_azimuth_gain_dbi,
                         "nominal azimuth gain (dBi)")->capture_default_str();

  // ---- scm-gen --------------------------------------------------------
  auto* c_scmgen = app.add_subcommand(
      "scm-gen", "Build a spectrum consumption model document (scm/1)");
  std::string sg_kind, sg_id, sg_pattern, sg_out, sg_prop_csv;
  double sg_ref = 0.0, sg_boresight = 0.0, sg_resolution = 1.0;
  double sg_iso_gain = -1.0, sg_prop_uniform = 0.0, sg_default_exp = 2.0;
  std::vector<double> sg_location{0.0, 0.0, 0.0};
  std::vector<double> sg_schedule{0.0, 86400.0};
  MaskFlags sg_mask;
  c_scmgen->add_option("--kind", sg_kind, "transmitter or receiver")
      ->required()
      ->check(CLI::IsMember({"transmitter", "receiver"}));
  c_scmgen->add_option("--id", sg_id, "model identifier")->required();
  c_scmgen->add_option("--ref-dbm", sg_ref,
                       "reference PSD (dBm/MHz at the 0 dB mask level)")
      ->required();
  c_scmgen->add_option("--pattern", sg_pattern, "antenna pattern file (pat/1)");
  c_scmgen->add_option("--isotropic", sg_iso_gain,
                       "use an isotropic pattern with this peak gain (dBi)");
  c_scmgen->add_option("--boresight", sg_boresight,
                       "power-map boresight compass heading (deg)")
      ->capture_default_str();
  c_scmgen->add_option("--mask-csv", sg_mask.mask_csv,
                       "mask breakpoints CSV: freq_hz,rel_db");
  c_scmgen->add_option("--default-mask-center", sg_mask.default_center_hz,
                       "build the default trapezoid mask at this center (Hz)");
  c_scmgen->add_option("--default-mask-bw", sg_mask.default_bw_hz,
                       "default mask channel bandwidth (Hz)")
      ->capture_default_str();
  c_scmgen->add_option("--prop-csv", sg_prop_csv,
                       "propagation sectors CSV: start_deg,end_deg,exponent");
  c_scmgen->add_option("--prop-uniform", sg_prop_uniform,
                       "uniform path-loss exponent");
  c_scmgen->add_option("--default-exponent", sg_default_exp,
                       "exponent for unmeasured sectors")
      ->capture_default_str();
  c_scmgen->add_option("--location", sg_location, "east,north,up (m)")
      ->expected(3)
      ->capture_default_str();
  c_scmgen->add_option("--schedule", sg_schedule, "start_s,end_s")
      ->expected(2)
      ->capture_default_str();
  c_scmgen->add_option("--resolution", sg_resolution,
                       "power-map resolution (deg)")
      ->capture_default_str();
  c_scmgen->add_option("-o,--output", sg_out, "write the model here")
      ->required();

  // ---- compat ---------------------------------------------------------
  auto* c_compat = app.add_subcommand(
      "compat", "Aggregate-interference margin at a receiver model");
  std::string cp_rx;
  std::vector<std::string> cp_tx;
  c_compat->add_option("--rx", cp_rx, "receiver model (scm/1)")->required();
  c_compat->add_option("--tx", cp_tx, "transmitter models (scm/1)")
      ->expected(-1);

  // ---- simulate -------------------------------------------------------
  auto* c_simulate = app.add_subcommand(
      "simulate", "Monte Carlo channel-deconfliction trials");
  int sim_links = 100, sim_trials = 10;
  std::uint64_t sim_seed = 1;
  bool sim_timing = false;
  ScenarioConfig sim_cfg;
  c_simulate->add_option("--links", sim_links, "links per trial")
      ->capture_default_str();
  c_simulate->add_option("--trials", sim_trials, "number of trials")
      ->capture_default_str();
  c_simulate->add_option("--seed", sim_seed, "RNG seed")->capture_default_str();
  c_simulate->add_flag("--timing", sim_timing,
                       "include wall-clock timing (not golden-stable)");
  c_simulate->add_option("--area", sim_cfg.area_sq_miles,
                         "deployment area (square miles)")
      ->capture_default_str();
  c_simulate->add_option("--exponent", sim_cfg.prop_exponent,
                         "path-loss exponent")->capture_default_str();
  c_simulate->add_option("--channel-bw", sim_cfg.channel_bw_hz,
                         "channel bandwidth (Hz)")->capture_default_str();
  c_simulate->add_option("--underlay-ref", sim_cfg.underlay_reference_dbm_mhz,
                         "receiver underlay reference (dBm/MHz)")
      ->capture_default_str();

  // ---- stack ----------------------------------------------------------
  auto* c_stack = app.add_subcommand(
      "stack", "Distance-stacked power-angular grid for plotting");
  std::string stack_in, stack_out;
  double stack_bin = 1.0;
  c_stack->add_option("file", stack_in, "measurement file (mms/1)")->required();
  c_stack->add_option("-o,--output", stack_out, "write CSV here");
  c_stack->add_option("--bin-width", stack_bin, "azimuth bin width (deg)")
      ->capture_default_str();

  // ---- synth ----------------------------------------------------------
  auto* c_synth = app.add_subcommand(
      "synth", "Generate a synthetic dataset from a bundled sidewalk preset");
  SynthConfig sy_cfg;
  std::string sy_out;
  bool sy_list = false;
  double sy_dmin = 0.0, sy_dmax = 0.0;
  c_synth->add_option("--preset", sy_cfg.preset, "sidewalk preset name")
      ->capture_default_str();
  c_synth->add_flag("--list-presets", sy_list, "list preset names and exit");
  c_synth->add_option("--links", sy_cfg.links,
                      "link count (0: preset's count)")
      ->capture_default_str();
  c_synth->add_option("--scans", sy_cfg.scans, "rotations per link")
      ->capture_default_str();
  c_synth->add_option("--samples", sy_cfg.samples_per_scan,
                      "samples per rotation")
      ->capture_default_str();
  c_synth->add_option("--k-db", sy_cfg.k_factor_db,
                      "per-scan Rician K factor (dB)")
      ->capture_default_str();
  c_synth->add_option("--hpbw", sy_cfg.beam_hpbw_deg, "beam HPBW (deg)")
      ->capture_default_str();
  c_synth->add_option("--d-min", sy_dmin, "minimum link distance (m)");
  c_synth->add_option("--d-max", sy_dmax, "maximum link distance (m)");
  c_synth->add_option("--seed", sy_cfg.seed, "RNG seed")->capture_default_str();
  c_synth->add_option("-o,--output", sy_out, "write the dataset here");

  CLI11_PARSE(app, argc, argv);

  if (c_ingest->parsed()) {
    SidewalkDataset ds = parse_measurement_file(ingest_in);
    std::cout << dataset_summary(ds);
    if (!ingest_out.empty()) write_measurement_file(ds, ingest_out);
    return 0;
  }

  if (c_validate->parsed()) {
    SidewalkDataset ds = parse_measurement_file(validate_in);
    ValidationReport report = validate_dataset(ds);
    std::cout << report;
    return 0;
  }

  if (c_metrics->parsed()) {
    SidewalkDataset ds = parse_measurement_file(metrics_in);
    AntennaPattern pat;
    MetricsOptions opts;
    opts.bin_width_deg = metrics_bin;
    opts.k_window_deg = metrics_kwin;
    opts.compute_k = !metrics_no_k;
    if (!metrics_pat.empty()) {
      pat = parse_antenna_pattern(metrics_pat);
      opts.elevation_pattern = &pat;
    }
    emit(metrics_csv(compute_dataset_metrics(ds, opts)), metrics_out);
    return 0;
  }

  if (c_fit->parsed()) {
    std::ostringstream os;
    os << fit_table_header();
    std::vector<std::vector<PgPoint>> pools;
    for (const auto& path : fit_in) {
      SidewalkDataset ds = parse_measurement_file(path);
      os << fit_table_row(fit_row(ds));
      pools.push_back(extract_pg_points(ds));
    }
    if (fit_pooled) {
      PathGainFit pf = pooled_fit(pools, "pooled");
      FitRow r;
      r.name = pf.label;
      r.length_m = pf.d_max_m;
      r.links = pf.count;
      r.slope_n = pf.slope_n;
      r.intercept_b_db = pf.intercept_b_db;
      r.rms_sigma_db = pf.rms_sigma_db;
      os << fit_table_row(r);
    }
    emit(os.str(), fit_out);
    return 0;
  }

  if (c_compare->parsed()) {
    SidewalkDataset da = parse_measurement_file(cmp_a);
    SidewalkDataset db = parse_measurement_file(cmp_b);
    PathGainFit fa = fit_single_slope(extract_pg_points(da), da.sidewalk_id);
    PathGainFit fb = fit_single_slope(extract_pg_points(db), db.sidewalk_id);
    FitComparison cmp = compare_fits(fa, fb, cmp_at);
    std::ostringstream os;
    os << "fit_a " << fa.label << " n " << num(fa.slope_n) << " b "
       << num(fa.intercept_b_db) << " rms " << num(fa.rms_sigma_db) << "\n";
    os << "fit_b " << fb.label << " n " << num(fb.slope_n) << " b "
       << num(fb.intercept_b_db) << " rms " << num(fb.rms_sigma_db) << "\n";
    os << "delta_n " << num(cmp.delta_n) << " delta_b_db " << num(cmp.delta_b_db)
       << "\n";
    if (cmp_umi) {
      os << "distance_m,fit_a_db,fit_b_db,umi_los_db,umi_nlos_db\n";
    } else {
      os << "distance_m,fit_a_db,fit_b_db,delta_db\n";
    }
    for (std::size_t i = 0; i < cmp.delta_db_at.size(); ++i) {
      double d = cmp.delta_db_at[i].first;
      os << num(d) << ',' << num(eval_fit(fa, d)) << ',' << num(eval_fit(fb, d));
      if (cmp_umi) {
        os << ',' << num(umi_los_db(d, cmp_hbs, cmp_hut, cmp_freq)) << ','
           << num(umi_nlos_db(d, cmp_hbs, cmp_hut, cmp_freq));
      } else {
        os << ',' << num(cmp.delta_db_at[i].second);
      }
      os << '\n';
    }
    std::cout << os.str();
    return 0;
  }

  if (c_coverage->parsed()) {
    if (!cov_site.empty()) {
      SiteConfig site = parse_site_file(cov_site);
      LinkBudget merged = site.budget;
      // Explicit flags win over the site file.
      if (c_coverage->count("--tx-power")) merged.tx_power_dbm = cov_budget.tx_power_dbm;
      if (c_coverage->count("--tx-gain")) merged.tx_max_gain_dbi = cov_budget.tx_max_gain_dbi;
      if (c_coverage->count("--rx-gain")) merged.rx_gain_dbi = cov_budget.rx_gain_dbi;
      if (c_coverage->count("--nf")) merged.noise_figure_db = cov_budget.noise_figure_db;
      if (c_coverage->count("--bw")) merged.bandwidth_hz = cov_budget.bandwidth_hz;
      if (c_coverage->count("--snr-cutoff")) merged.snr_cutoff_db = cov_budget.snr_cutoff_db;
      if (c_coverage->count("--median-abg")) merged.median_abg_dbi = cov_budget.median_abg_dbi;
      if (c_coverage->count("--nominal-abg")) {
        merged.nominal_azimuth_gain_dbi = cov_budget.nominal_azimuth_gain_dbi;
      }
      cov_budget = merged;
      cov_budget_abg_set = site.budget.median_abg_dbi != LinkBudget{}.median_abg_dbi;
    }
    PathGainFit fit;
    if (!cov_preset.empty()) {
      const SidewalkPreset& p = preset_or_throw(cov_preset);
      fit = fit_from_preset(p);
      if (!cov_abg_opt->count() && !cov_budget_abg_set) {
        cov_budget.median_abg_dbi = p.median_abg_dbi;
      }
    } else if (!cov_in.empty()) {
      SidewalkDataset ds = parse_measurement_file(cov_in);
      fit = fit_single_slope(extract_pg_points(ds), ds.sidewalk_id);
      if (!cov_abg_opt->count() && !cov_budget_abg_set) {
        std::vector<double> gains;
        for (const auto& m : compute_dataset_metrics(ds)) {
          gains.push_back(m.azimuth_gain_dbi);
        }
        cov_budget.median_abg_dbi = abg_cdf(std::move(gains)).median();
      }
    } else {
      throw std::runtime_error("coverage needs a measurement file or --preset");
    }

    auto degraded = snr_profile(fit, cov_budget, cov_step, true);
    auto full = snr_profile(fit, cov_budget, cov_step, false);
    CutoffResult cd = cutoff_distance(degraded, cov_budget.snr_cutoff_db);
    CutoffResult cf = cutoff_distance(full, cov_budget.snr_cutoff_db);

    std::ostringstream os;
    os << "model " << fit.label << " n " << num(fit.slope_n) << " b "
       << num(fit.intercept_b_db) << " over " << num(fit.d_min_m) << ".."
       << num(fit.d_max_m) << " m\n";
    os << "noise_floor_dbm " << num(noise_floor_dbm(cov_budget)) << "\n";
    os << "effective_tx_gain_dbi " << num(effective_tx_gain_dbi(cov_budget))
       << " (max " << num(cov_budget.tx_max_gain_dbi)
       << " less the median-beamforming shortfall vs nominal "
       << num(cov_budget.nominal_azimuth_gain_dbi) << ")\n";
    os << "snr_threshold_db " << num(cov_budget.snr_cutoff_db) << "\n";
    os << "cutoff_degraded_m " << to_string(cd.kind);
    if (cd.kind == CutoffResult::Kind::cutoff_at) os << ' ' << num(cd.distance_m);
    os << "\n";
    os << "cutoff_full_gain_m " << to_string(cf.kind);
    if (cf.kind == CutoffResult::Kind::cutoff_at) os << ' ' << num(cf.distance_m);
    os << "\n";
    os << "note: the source text is ambiguous about whether the measured "
          "median beamforming gain degrades G_Tx; both conventions above "
          "bracket the coverage cutoff\n";
    os << "shannon_rate_at_threshold_bps "
       << num(shannon_rate_bps(cov_budget.snr_cutoff_db, cov_budget.bandwidth_hz))
       << "\n";
    std::cout << os.str();

    if (!cov_profile_out.empty()) {
      std::ostringstream csv;
      csv << "distance_m,snr_db_degraded,snr_db_full_gain\n";
      for (std::size_t i = 0; i < degraded.size(); ++i) {
        csv << num(degraded[i].distance_m) << ',' << num(degraded[i].snr_db)
            << ',' << num(full[i].snr_db) << '\n';
      }
      write_text(cov_profile_out, csv.str());
    }
    return 0;
  }

  if (c_scmgen->parsed()) {
    AntennaPattern pat;
    if (!sg_pattern.empty()) {
      pat = parse_antenna_pattern(sg_pattern);
    } else if (c_scmgen->count("--isotropic")) {
      pat = isotropic_pattern(sg_iso_gain);
    } else {
      throw std::runtime_error("need --pattern or --isotropic");
    }
    PropagationMap prop;
    if (!sg_prop_csv.empty()) {
      auto sectors = parse_sectors_csv(sg_prop_csv);
      prop = PropagationMap::from_sectors(sectors, sg_default_exp);
    } else if (c_scmgen->count("--prop-uniform")) {
      prop = PropagationMap::uniform(sg_prop_uniform);
    } else {
      throw std::runtime_error("need --prop-csv or --prop-uniform");
    }
    Schedule sched{static_cast<std::int64_t>(sg_schedule[0]),
                   static_cast<std::int64_t>(sg_schedule[1])};
    ScmLocation loc;
    loc.kind = ScmLocation::Kind::point;
    loc.geometry = {
        Position3D{sg_location[0], sg_location[1], sg_location[2]}};
    SpectrumConsumptionModel scm;
    if (sg_kind == "transmitter") {
      scm = build_tx_scm(sg_id, sg_ref, mask_from_flags(sg_mask, true), pat,
                         prop, sched, loc, sg_boresight, sg_resolution);
    } else {
      scm = build_rx_scm(sg_id, sg_ref, mask_from_flags(sg_mask, false), pat,
                         prop, sched, loc, sg_boresight, sg_resolution);
    }
    std::string text = serialize_scm(scm);
    write_text(sg_out, text);
    std::cout << "wrote " << sg_out << " kind " << sg_kind << " id " << sg_id
              << " bytes " << text.size() << "\n";
    return 0;
  }

  if (c_compat->parsed()) {
    SpectrumConsumptionModel rx = parse_scm_file(cp_rx);
    std::vector<SpectrumConsumptionModel> txs;
    for (const auto& p : cp_tx) txs.push_back(parse_scm_file(p));
    CompatReport report =
        aggregate_margin(std::span<const SpectrumConsumptionModel>(txs), rx);
    std::ostringstream os;
    for (const auto& c : report.per_interferer) {
      os << "tx " << c.tx_id << " peak_psd_dbm_mhz "
         << num(c.received_psd_peak_dbm_mhz) << "\n";
    }
    os << "worst_freq_hz " << num(report.worst_freq_hz) << "\n";
    os << "margin_db " << num(report.margin_db) << "\n";
    os << "compatible " << (report.compatible ? "yes" : "no") << "\n";
    std::cout << os.str();
    return 0;
  }

  if (c_simulate->parsed()) {
    TrialSummary s = run_trials(sim_links, sim_trials, sim_seed, sim_cfg);
    std::ostringstream os;
    os << "links " << sim_links << " trials " << sim_trials << " seed "
       << sim_seed << "\n";
    for (const auto& [k, v] : s.histogram) {
      os << "channels " << k << " count " << v << "\n";
    }
    os << "mode " << s.mode << " fraction_2_3 " << num(s.fraction_2_3)
       << " max_channels " << s.max_channels << "\n";
    if (sim_timing) {
      os << "max_link_seconds " << num(s.max_link_seconds) << "\n";
    }
    std::cout << os.str();
    return 0;
  }

  if (c_stack->parsed()) {
    SidewalkDataset ds = parse_measurement_file(stack_in);
    emit(serialize_stack_grid(spectrum_stack_grid(ds, stack_bin)), stack_out);
    return 0;
  }

  if (c_synth->parsed()) {
    if (sy_list) {
      for (const auto& p : sidewalk_presets()) std::cout << p.name << "\n";
      return 0;
    }
    if (c_synth->count("--d-min")) sy_cfg.d_min_m = sy_dmin;
    if (c_synth->count("--d-max")) sy_cfg.d_max_m = sy_dmax;
    SidewalkDataset ds = synth_dataset(sy_cfg);
    std::cout << dataset_summary(ds);
    if (!sy_out.empty()) write_measurement_file(ds, sy_out);
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
