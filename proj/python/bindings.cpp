#include "mmwfp/clustering.hpp"
#include "mmwfp/config.hpp"
#include "mmwfp/error.hpp"
#include "mmwfp/experiment.hpp"
#include "mmwfp/protocol.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cmath>
#include <optional>

namespace py = pybind11;
using namespace mmwfp;

namespace {

ScenarioConfig config_from(const std::optional<std::string>& text) {
  return text ? parse_config(*text) : default_config();
}

py::dict point_dict(const SweepPoint& p) {
  py::dict d;
  d["axis"] = to_string(p.axis);
  d["value"] = p.value;
  d["lps"] = p.lps;
  d["wifi_aps"] = p.wifi_aps;
  d["beams"] = p.beams;
  d["trials"] = p.trials;
  d["seed"] = p.seed;
  d["avg_rpr_db"] = p.avg_rpr_db;
  d["nn_rpr_db"] = p.nn_rpr_db;
  d["outage_rate"] = p.outage_rate;
  d["nn_outage_rate"] = p.nn_outage_rate;
  d["coverage_rate"] = p.coverage_rate;
  return d;
}

py::dict setup_dict(const SetupTime& t) {
  py::dict d;
  d["total_s"] = t.total_s;
  d["sls_s"] = t.sls_s;
  d["mid_s"] = t.mid_s;
  d["bc_s"] = t.bc_s;
  d["rss_s"] = t.rss_s;
  d["processing_s"] = t.processing_s;
  d["sls_share"] = t.sls_share();
  return d;
}

Scheme parse_scheme(const std::string& name) {
  if (name == "midc") return Scheme::Midc;
  if (name == "proposed") return Scheme::Proposed;
  if (name == "proposed+mid") return Scheme::ProposedWithMid;
  throw InvalidInput("unknown scheme '" + name + "' (expected midc, proposed or proposed+mid)");
}

std::vector<std::vector<std::optional<SectorId>>> best_rows(const BestSectorDb& db) {
  std::vector<std::vector<std::optional<SectorId>>> out(db.lps());
  for (std::size_t l = 0; l < db.lps(); ++l)
    for (std::size_t m = 0; m < db.aps(); ++m) out[l].push_back(db.at(l, m));
  return out;
}

std::vector<std::vector<double>> wifi_rows(const WifiRssDb& db) {
  std::vector<std::vector<double>> out;
  for (std::size_t l = 0; l < db.lps(); ++l) out.emplace_back(db.row(l).begin(), db.row(l).end());
  return out;
}

} // namespace

PYBIND11_MODULE(_mmwfp, m) {
  m.doc() = "WiFi-fingerprint mm-wave beam estimation";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidInput>(m, "InvalidInput", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<CoverageError>(m, "CoverageError", base.ptr());
  py::register_exception<NoCoverageError>(m, "NoCoverageError", base.ptr());
  py::register_exception<StaleMapError>(m, "StaleMapError", base.ptr());

  m.def("default_config_yaml", [] { return serialize_config(default_config()); });
  m.def(
      "validate_config", [](const std::string& text) { return serialize_config(parse_config(text)); }, py::arg("text"),
      "Parses and validates a YAML config; returns it normalized.");

  m.def("free_space_loss_db",
        [](double length, const std::string& band) {
          if (band != "5GHz" && band != "60GHz") throw InvalidInput("band must be '5GHz' or '60GHz'");
          return free_space_loss_db(length, band == "5GHz" ? Band::Wifi5GHz : Band::MmWave60GHz);
        },
        py::arg("length_m"), py::arg("band"));

  m.def("beam_gain",
        [](double beam_azimuth, double beam_tilt, double azimuth_hpbw, double elevation_hpbw, double phi,
           double theta) {
          return beam_gain(make_sector(1, beam_azimuth, beam_tilt, azimuth_hpbw, elevation_hpbw), phi, theta);
        },
        py::arg("beam_azimuth"), py::arg("beam_tilt"), py::arg("azimuth_hpbw"), py::arg("elevation_hpbw"),
        py::arg("phi"), py::arg("theta"), "Sector gain in dB; all angles in radians.");

  m.def("codebook",
        [](std::uint32_t sectors, std::uint32_t azimuth_steps, std::uint32_t elevation_steps) {
          CodebookLayout l;
          l.sectors = sectors;
          l.azimuth_steps = azimuth_steps;
          l.elevation_steps = elevation_steps;
          const Codebook cb = build_codebook(l);
          py::list out;
          for (const auto& s : cb.sectors()) {
            py::dict d;
            d["id"] = s.id;
            d["azimuth"] = s.beam_azimuth;
            d["tilt"] = s.beam_tilt;
            d["boresight_gain_db"] = s.boresight_gain_db;
            out.append(d);
          }
          return out;
        },
        py::arg("sectors") = 92, py::arg("azimuth_steps") = 23, py::arg("elevation_steps") = 4);

  m.def("affinity_propagate",
        [](const std::vector<std::vector<double>>& points, double chi) {
          const auto r = affinity_propagate(similarity_matrix(points, chi));
          py::dict d;
          d["exemplars"] = r.exemplars;
          d["assignment"] = r.assignment;
          d["iterations"] = r.iterations;
          d["converged"] = r.converged;
          d["used_fallback"] = r.used_fallback;
          return d;
        },
        py::arg("points"), py::arg("chi") = 0.3);

  m.def("setup_time",
        [](const std::string& scheme, std::uint32_t sectors, std::uint32_t beams, std::uint32_t aps,
           const std::optional<std::string>& config) {
          return setup_dict(setup_time(config_from(config).timing.model(), parse_scheme(scheme), sectors, beams, aps));
        },
        py::arg("scheme"), py::arg("sectors"), py::arg("beams"), py::arg("aps") = 1, py::arg("config") = py::none());

  m.def("report_timing",
        [](const std::optional<std::string>& config, std::optional<std::uint32_t> aps) {
          py::list out;
          for (const auto& r : report_timing(config_from(config), aps)) {
            py::dict d = setup_dict(r.time);
            d["scheme"] = r.scheme;
            d["sectors"] = r.sectors;
            d["beams"] = r.beams;
            d["aps"] = r.aps;
            d["reduction"] = r.reduction;
            out.append(d);
          }
          return out;
        },
        py::arg("config") = py::none(), py::arg("aps") = py::none());

  py::class_<StoredRadioMaps>(m, "RadioMaps")
      .def_property_readonly("wifi", [](const StoredRadioMaps& s) { return wifi_rows(s.wifi); })
      .def_property_readonly("best", [](const StoredRadioMaps& s) { return best_rows(s.best); })
      .def_property_readonly("wifi_ap_ids", [](const StoredRadioMaps& s) { return s.wifi.ap_ids(); })
      .def_property_readonly("mmw_ap_ids", [](const StoredRadioMaps& s) { return s.best.ap_ids(); })
      .def("cluster_count",
           [](const StoredRadioMaps& s, std::size_t ap, SectorId sector) {
             const auto it = s.exemplars.entries.find({ap, sector});
             return it == s.exemplars.entries.end() ? std::size_t{0} : it->second.cluster_count();
           },
           py::arg("ap"), py::arg("sector"))
      .def("estimate_best_beams",
           [](const StoredRadioMaps& s, const std::vector<double>& rss, std::size_t ap, std::size_t beams) {
             std::vector<std::pair<SectorId, double>> out;
             for (const auto& b : estimate_best_beams(rss, s.exemplars, ap, beams).ranked)
               out.emplace_back(b.sector, b.distance);
             return out;
           },
           py::arg("rss"), py::arg("ap"), py::arg("beams"))
      .def("nearest_neighbor",
           [](const StoredRadioMaps& s, const std::vector<double>& rss, std::size_t ap) {
             return nearest_neighbor_baseline(rss, s.wifi, s.best, ap);
           },
           py::arg("rss"), py::arg("ap"))
      .def("save", [](const StoredRadioMaps& s, const std::filesystem::path& p) { save_radio_maps(s, p); },
           py::arg("path"));

  m.def("load_radio_maps", [](const std::filesystem::path& p) { return load_radio_maps(p); }, py::arg("path"));

  m.def("run_offline",
        [](const std::optional<std::string>& config, std::optional<std::uint32_t> lps,
           std::optional<std::uint32_t> wifi_aps) {
          const ScenarioConfig c = config_from(config);
          auto r = run_offline(c, lps.value_or(c.grid.lps), wifi_aps.value_or(c.grid.wifi_aps));
          return py::make_tuple(std::move(r.maps), r.warnings);
        },
        py::arg("config") = py::none(), py::arg("lps") = py::none(), py::arg("wifi_aps") = py::none(),
        "Builds radio maps in memory; returns (RadioMaps, warnings).");

  m.def("run_sweep",
        [](const std::string& axis, const std::optional<std::string>& config, std::optional<std::uint32_t> trials,
           std::optional<std::uint64_t> seed, unsigned parallelism) {
          const ScenarioConfig c = config_from(config);
          SweepOptions opt;
          opt.trials = trials;
          opt.seed = seed;
          opt.parallelism = parallelism;
          opt.keep_records = false;
          std::vector<SweepPoint> points;
          {
            py::gil_scoped_release release;
            points = run_sweep(c, parse_axis(axis), in_memory_maps(c), opt);
          }
          py::list out;
          for (const auto& p : points) out.append(point_dict(p));
          return out;
        },
        py::arg("axis"), py::arg("config") = py::none(), py::arg("trials") = py::none(), py::arg("seed") = py::none(),
        py::arg("parallelism") = 1, "Monte Carlo sweep with radio maps built in memory.");

  m.def("sweep_csv",
        [](const std::string& axis, const std::optional<std::string>& config, std::optional<std::uint32_t> trials,
           std::optional<std::uint64_t> seed) {
          const ScenarioConfig c = config_from(config);
          SweepOptions opt;
          opt.trials = trials;
          opt.seed = seed;
          opt.keep_records = false;
          return format_results(run_sweep(c, parse_axis(axis), in_memory_maps(c), opt), ResultFormat::Csv);
        },
        py::arg("axis"), py::arg("config") = py::none(), py::arg("trials") = py::none(), py::arg("seed") = py::none());
}
