// SPDX-License-Identifier: Apache-2.0
//
// Python bindings for the core operations. Documents cross the boundary as
// text in the versioned formats; computed results come back as plain dicts
// and lists so the module needs no numpy dependency.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "mmscm/channel_metrics.hpp"
#include "mmscm/compat.hpp"
#include "mmscm/coverage.hpp"
#include "mmscm/deconflict.hpp"
#include "mmscm/geometry.hpp"
#include "mmscm/ingest.hpp"
#include "mmscm/pathloss.hpp"
#include "mmscm/pipeline.hpp"
#include "mmscm/scm.hpp"
#include "mmscm/synth.hpp"

namespace py = pybind11;
using namespace mmscm;

namespace {

py::dict fit_to_dict(const PathGainFit& f) {
  py::dict d;
  d["label"] = f.label;
  d["slope_n"] = f.slope_n;
  d["intercept_b_db"] = f.intercept_b_db;
  d["rms_sigma_db"] = f.rms_sigma_db;
  d["d_min_m"] = f.d_min_m;
  d["d_max_m"] = f.d_max_m;
  d["count"] = f.count;
  return d;
}

PathGainFit fit_from_dict(const py::dict& d) {
  PathGainFit f;
  if (d.contains("label")) f.label = py::cast<std::string>(d["label"]);
  f.slope_n = py::cast<double>(d["slope_n"]);
  f.intercept_b_db = py::cast<double>(d["intercept_b_db"]);
  if (d.contains("rms_sigma_db")) f.rms_sigma_db = py::cast<double>(d["rms_sigma_db"]);
  f.d_min_m = py::cast<double>(d["d_min_m"]);
  f.d_max_m = py::cast<double>(d["d_max_m"]);
  if (d.contains("count")) f.count = py::cast<int>(d["count"]);
  return f;
}

std::vector<PgPoint> points_from_pairs(
    const std::vector<std::pair<double, double>>& pairs) {
  std::vector<PgPoint> pts;
  pts.reserve(pairs.size());
  for (auto [d, g] : pairs) pts.push_back({d, g});
  return pts;
}

}  // namespace

PYBIND11_MODULE(_mmscm, m) {
  m.doc() = "Rotating-receiver channel measurement toolkit (core bindings)";

  // ---- measurement ingest & metrics ----
  m.def(
      "dataset_metrics",
      [](const std::string& text, double bin_width_deg, bool compute_k) {
        SidewalkDataset ds = parse_measurement_text(text);
        MetricsOptions opts;
        opts.bin_width_deg = bin_width_deg;
        opts.compute_k = compute_k;
        py::list rows;
        for (const auto& lm : compute_dataset_metrics(ds, opts)) {
          py::dict r;
          r["link_id"] = lm.link_id;
          r["distance_m"] = lm.distance_m;
          r["path_gain_db"] = lm.path_gain_db;
          r["azimuth_gain_dbi"] = lm.azimuth_gain_dbi;
          r["aoa_deg"] = lm.aoa_deg;
          if (lm.k_factor_db) {
            r["k_factor_db"] = *lm.k_factor_db;
          } else {
            r["k_factor_db"] = py::none();
          }
          rows.append(r);
        }
        return rows;
      },
      py::arg("measurement_text"), py::arg("bin_width_deg") = 1.0,
      py::arg("compute_k") = true,
      "Per-link metrics from an mms/1 document.");

  m.def(
      "normalize_measurement",
      [](const std::string& text) {
        return serialize_measurement(parse_measurement_text(text));
      },
      py::arg("measurement_text"),
      "Parse and re-serialize an mms/1 document in normalized form.");

  m.def(
      "validate_measurement",
      [](const std::string& text) {
        SidewalkDataset ds = parse_measurement_text(text);
        py::list out;
        for (const auto& w : validate_dataset(ds).warnings) {
          out.append(py::make_tuple(w.link_id, w.message));
        }
        return out;
      },
      py::arg("measurement_text"),
      "Validation warnings as (link_id, message) tuples.");

  // ---- fitting & reference models ----
  m.def(
      "fit_dataset",
      [](const std::string& text) {
        SidewalkDataset ds = parse_measurement_text(text);
        return fit_to_dict(
            fit_single_slope(extract_pg_points(ds), ds.sidewalk_id));
      },
      py::arg("measurement_text"),
      "Single-slope path-gain fit of an mms/1 document.");

  m.def(
      "fit_points",
      [](const std::vector<std::pair<double, double>>& pairs,
         const std::string& label) {
        return fit_to_dict(fit_single_slope(points_from_pairs(pairs), label));
      },
      py::arg("points"), py::arg("label") = "",
      "Single-slope fit of (distance_m, path_gain_db) pairs.");

  m.def("eval_fit",
        [](const py::dict& fit, double d_m) {
          return eval_fit(fit_from_dict(fit), d_m);
        },
        py::arg("fit"), py::arg("distance_m"));

  m.def("fspl_db", &fspl_db, py::arg("distance_m"), py::arg("freq_hz"),
        "Free-space path gain (dB, negative).");
  m.def("umi_los_db", &umi_los_db, py::arg("d3d_m"), py::arg("h_bs_m"),
        py::arg("h_ut_m"), py::arg("freq_hz"));
  m.def("umi_nlos_db", &umi_nlos_db, py::arg("d3d_m"), py::arg("h_bs_m"),
        py::arg("h_ut_m"), py::arg("freq_hz"));
  m.def("los_probability", &los_probability, py::arg("d2d_m"));

  // ---- coverage ----
  m.def(
      "coverage_summary",
      [](const py::dict& fit, const py::dict& budget_overrides) {
        LinkBudget b;
        auto get = [&](const char* k, double& out) {
          if (budget_overrides.contains(k)) {
            out = py::cast<double>(budget_overrides[k]);
          }
        };
        get("tx_power_dbm", b.tx_power_dbm);
        get("tx_max_gain_dbi", b.tx_max_gain_dbi);
        get("rx_gain_dbi", b.rx_gain_dbi);
        get("noise_figure_db", b.noise_figure_db);
        get("bandwidth_hz", b.bandwidth_hz);
        get("snr_cutoff_db", b.snr_cutoff_db);
        get("median_abg_dbi", b.median_abg_dbi);
        get("nominal_azimuth_gain_dbi", b.nominal_azimuth_gain_dbi);
        PathGainFit f = fit_from_dict(fit);
        auto degraded = snr_profile(f, b, 1.0, true);
        auto full = snr_profile(f, b, 1.0, false);
        CutoffResult cd = cutoff_distance(degraded, b.snr_cutoff_db);
        CutoffResult cf = cutoff_distance(full, b.snr_cutoff_db);
        py::dict out;
        out["noise_floor_dbm"] = noise_floor_dbm(b);
        out["effective_tx_gain_dbi"] = effective_tx_gain_dbi(b);
        out["cutoff_degraded"] = to_string(cd.kind);
        out["cutoff_degraded_m"] = cd.distance_m;
        out["cutoff_full_gain"] = to_string(cf.kind);
        out["cutoff_full_gain_m"] = cf.distance_m;
        out["shannon_rate_at_threshold_bps"] =
            shannon_rate_bps(b.snr_cutoff_db, b.bandwidth_hz);
        return out;
      },
      py::arg("fit"), py::arg("budget") = py::dict(),
      "Noise floor, cutoff distances (both gain conventions), and rate.");

  // ---- SCM & compatibility ----
  m.def(
      "canonicalize_scm",
      [](const std::string& text) { return serialize_scm(parse_scm_text(text)); },
      py::arg("scm_text"), "Parse and re-serialize an scm/1 document.");

  m.def(
      "compat_margin",
      [](const std::vector<std::string>& tx_texts, const std::string& rx_text) {
        std::vector<SpectrumConsumptionModel> txs;
        for (const auto& t : tx_texts) txs.push_back(parse_scm_text(t));
        SpectrumConsumptionModel rx = parse_scm_text(rx_text);
        CompatReport rep =
            aggregate_margin(std::span<const SpectrumConsumptionModel>(txs), rx);
        py::dict out;
        out["margin_db"] = rep.margin_db;
        out["compatible"] = rep.compatible;
        out["worst_freq_hz"] = rep.worst_freq_hz;
        py::list per;
        for (const auto& c : rep.per_interferer) {
          per.append(py::make_tuple(c.tx_id, c.received_psd_peak_dbm_mhz));
        }
        out["per_interferer"] = per;
        return out;
      },
      py::arg("tx_scm_texts"), py::arg("rx_scm_text"),
      "Aggregate-interference margin of transmitters against one receiver.");

  // ---- synthesis & simulation ----
  m.def(
      "synth_measurement",
      [](const std::string& preset, int links, int scans, int samples_per_scan,
         double k_factor_db, std::uint64_t seed) {
        SynthConfig cfg;
        cfg.preset = preset;
        cfg.links = links;
        cfg.scans = scans;
        cfg.samples_per_scan = samples_per_scan;
        cfg.k_factor_db = k_factor_db;
        cfg.seed = seed;
        return serialize_measurement(synth_dataset(cfg));
      },
      py::arg("preset") = "Int-N-E", py::arg("links") = 0,
      py::arg("scans") = 40, py::arg("samples_per_scan") = 400,
      py::arg("k_factor_db") = 10.0, py::arg("seed") = 1,
      "Synthetic mms/1 document from a bundled sidewalk preset.");

  m.def("preset_names", [] {
    std::vector<std::string> names;
    for (const auto& p : sidewalk_presets()) names.push_back(p.name);
    return names;
  });

  m.def(
      "run_trials",
      [](int n_links, int n_trials, std::uint64_t seed) {
        TrialSummary s = run_trials(n_links, n_trials, seed);
        py::dict out;
        py::dict hist;
        for (const auto& [k, v] : s.histogram) hist[py::int_(k)] = v;
        out["histogram"] = hist;
        out["per_trial"] = s.per_trial;
        out["mode"] = s.mode;
        out["fraction_2_3"] = s.fraction_2_3;
        out["max_channels"] = s.max_channels;
        return out;
      },
      py::arg("links"), py::arg("trials"), py::arg("seed") = 1,
      "Monte Carlo deconfliction trials with the bundled defaults.");

  // ---- geometry ----
  m.def(
      "aoi_angles",
      [](const std::vector<double>& tx, const std::vector<double>& rx,
         const std::vector<double>& facade_a,
         const std::vector<double>& facade_b) {
        auto pos = [](const std::vector<double>& v) {
          if (v.size() != 3) {
            throw std::invalid_argument("positions are [east, north, up]");
          }
          return Position3D{v[0], v[1], v[2]};
        };
        FacadeLine f{pos(facade_a), pos(facade_b)};
        Position3D t = pos(tx), r = pos(rx);
        py::dict out;
        out["direct_deg"] = geometry::aoi_direct_deg(t, r);
        out["reflection_deg"] = geometry::aoi_reflection_deg(t, r, f);
        out["image_deg"] = geometry::aoi_reflection_image_deg(t, r, f);
        return out;
      },
      py::arg("tx"), py::arg("rx"), py::arg("facade_a"), py::arg("facade_b"),
      "Direct and reflective angle-of-incidence bearings at the receiver.");
}
