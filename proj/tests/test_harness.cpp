#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "support.hpp"

#include "mmwfp/error.hpp"
#include "mmwfp/experiment.hpp"

#include "json.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

using namespace mmwfp;

namespace {

ScenarioConfig small_config() {
  ScenarioConfig c = default_config();
  c.sweep.lps = {6, 24};
  c.sweep.wifi_aps = {1, 4};
  c.sweep.beams = {1, 5};
  c.sweep.trials = 30;
  return c;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

} // namespace

TEST_CASE("axis names") {
  CHECK(parse_axis("lps") == Axis::Lps);
  CHECK(parse_axis("wifiAps") == Axis::WifiAps);
  CHECK(parse_axis("beams") == Axis::Beams);
  CHECK(to_string(Axis::WifiAps) == "wifiAps");
  CHECK_THROWS_AS(parse_axis("LPS"), InvalidInput);
  CHECK_THROWS_AS(parse_format("xml"), InvalidInput);
}

TEST_CASE("axis values and required maps") {
  const ScenarioConfig c = small_config();
  CHECK(axis_values(c, Axis::Beams) == std::vector<std::uint32_t>{1, 5, 92});
  CHECK(axis_values(c, Axis::Lps) == std::vector<std::uint32_t>{6, 24});
  ScenarioConfig no_full = c;
  no_full.sweep.append_full_codebook = false;
  CHECK(axis_values(no_full, Axis::Beams) == std::vector<std::uint32_t>{1, 5});

  using Pair = std::pair<std::uint32_t, std::uint32_t>;
  CHECK(required_maps(c, Axis::Beams) == std::vector<Pair>{{90, 4}});
  CHECK(required_maps(c, Axis::Lps) == std::vector<Pair>{{6, 4}, {24, 4}});
  CHECK(required_maps(c, Axis::WifiAps) == std::vector<Pair>{{90, 1}, {90, 4}});
  CHECK(radio_map_path(c, 24, 4).filename() == "radio_map_L24_N4.bin");
}

TEST_CASE("one learning point warns about degenerate clustering") {
  const auto off = run_offline(default_config(), 1, 4);
  CHECK(off.maps.wifi.lps() == 1);
  bool warned = false;
  for (const auto& w : off.warnings) warned = warned || w.find("degenerate") != std::string::npos;
  CHECK(warned);
}

TEST_CASE("sweep is reproducible and independent of parallelism") {
  const ScenarioConfig c = small_config();
  const auto maps = in_memory_maps(c);
  SweepOptions serial;
  SweepOptions threaded;
  threaded.parallelism = 3;
  const auto a = run_sweep(c, Axis::Lps, maps, serial);
  const auto b = run_sweep(c, Axis::Lps, maps, threaded);
  REQUIRE(a.size() == 2);
  CHECK(format_results(a, ResultFormat::Csv) == format_results(b, ResultFormat::Csv));
  CHECK(format_results(a, ResultFormat::Json) == format_results(b, ResultFormat::Json));
  for (std::size_t i = 0; i < a.size(); ++i) {
    REQUIRE(a[i].records.size() == b[i].records.size());
    for (std::size_t r = 0; r < a[i].records.size(); ++r) {
      CHECK(a[i].records[r].proposed_dbm == b[i].records[r].proposed_dbm);
      CHECK(a[i].records[r].exhaustive_sector == b[i].records[r].exhaustive_sector);
    }
  }
  SweepOptions other_seed;
  other_seed.seed = 99;
  CHECK(format_results(run_sweep(c, Axis::Lps, maps, other_seed), ResultFormat::Csv) !=
        format_results(a, ResultFormat::Csv));
}

TEST_CASE("sweep points carry their setup") {
  const ScenarioConfig c = small_config();
  const auto pts = run_sweep(c, Axis::WifiAps, in_memory_maps(c));
  REQUIRE(pts.size() == 2);
  CHECK(pts[0].wifi_aps == 1);
  CHECK(pts[1].wifi_aps == 4);
  CHECK(pts[0].lps == c.grid.lps);
  CHECK(pts[0].beams == c.online.beams);
  CHECK(pts[0].trials == 30);
  CHECK(pts[0].seed == c.sweep.seed);
  CHECK(pts[0].records.size() == 30 * 8);
  CHECK(pts[0].per_ap.size() == 8);
}

TEST_CASE("full codebook training matches exhaustive search exactly") {
  const ScenarioConfig c = small_config();
  const auto pts = run_sweep(c, Axis::Beams, in_memory_maps(c));
  REQUIRE(pts.size() == 3);
  CHECK(pts.back().beams == 92);
  CHECK(pts.back().avg_rpr_db == 0.0);
  CHECK(pts.back().outage_rate == 0.0);
  for (const auto& r : pts.back().records) {
    if (!r.covered) continue;
    CHECK(r.proposed_sector == r.exhaustive_sector);
    CHECK(r.proposed_dbm == r.exhaustive_dbm);
  }
  for (const auto& p : pts) {
    for (const auto& r : p.records) {
      if (r.proposed_valid()) CHECK(r.proposed_dbm <= r.exhaustive_dbm);
      if (r.nn_valid()) CHECK(r.nn_dbm <= r.exhaustive_dbm);
    }
    CHECK(p.avg_rpr_db <= 0.0);
  }
}

TEST_CASE("csv and json carry the same numbers") {
  const ScenarioConfig c = small_config();
  auto pts = run_sweep(c, Axis::Beams, in_memory_maps(c));
  const auto rows = csv_rows(format_results(pts, ResultFormat::Csv));
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == std::vector<std::string>{"axis", "value", "avg_rpr_db", "nn_rpr_db", "outage_rate", "trials", "seed"});
  const auto json = nlohmann::json::parse(format_results(pts, ResultFormat::Json));
  REQUIRE(json.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& row = rows[i + 1];
    const auto& j = json[i];
    CHECK(row[0] == j["axis"].get<std::string>());
    CHECK(std::stoul(row[1]) == j["value"].get<std::uint32_t>());
    CHECK(std::stod(row[2]) == j["avg_rpr_db"].get<double>());
    CHECK(std::stod(row[3]) == j["nn_rpr_db"].get<double>());
    CHECK(std::stod(row[4]) == j["outage_rate"].get<double>());
    CHECK(std::stoul(row[5]) == j["trials"].get<std::uint32_t>());
    CHECK(std::stoull(row[6]) == j["seed"].get<std::uint64_t>());
  }
}

TEST_CASE("results files are identical across reruns") {
  const auto dir = test::scratch_dir("harness_files");
  const ScenarioConfig c = small_config();
  for (const char* name : {"a", "b"}) {
    const auto pts = run_sweep(c, Axis::Lps, in_memory_maps(c));
    emit_results(pts, ResultFormat::Csv, dir / (std::string(name) + ".csv"));
    emit_results(pts, ResultFormat::Json, dir / (std::string(name) + ".json"));
  }
  CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
  CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));
  CHECK_THROWS_AS(emit_results({}, ResultFormat::Csv, dir / "no" / "such" / "dir" / "x.csv"), Error);
}

TEST_CASE("stored maps must exist and match") {
  const auto dir = test::scratch_dir("harness_maps");
  ScenarioConfig c = small_config();
  c.map_dir = dir.string();
  try {
    run_sweep(c, Axis::Beams, stored_maps(c));
    FAIL("expected a missing-map error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("offline") != std::string::npos);
  }
  const auto off = run_offline(c, 90, 4);
  save_radio_maps(off.maps, radio_map_path(c, 90, 4));
  const auto stored = run_sweep(c, Axis::Beams, stored_maps(c));
  const auto memory = run_sweep(c, Axis::Beams, in_memory_maps(c));
  CHECK(format_results(stored, ResultFormat::Csv) == format_results(memory, ResultFormat::Csv));

  ScenarioConfig changed = c;
  changed.codebook.azimuth_hpbw_deg = 25.0;
  CHECK_THROWS_AS(run_sweep(changed, Axis::Beams, stored_maps(changed)), StaleMapError);
}

TEST_CASE("timing report") {
  ScenarioConfig c = default_config();
  c.online.beams = 10;
  const auto rows = report_timing(c);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0].scheme == "MIDC");
  CHECK(rows[0].reduction == 0.0);
  CHECK(rows[1].scheme == "proposed");
  CHECK(rows[1].reduction > 0.70);
  CHECK(rows[3].aps == 8);
  CHECK(rows[3].time.total_s == doctest::Approx(8 * rows[0].time.total_s));
  CHECK(report_timing(c, 10)[3].aps == 10);
  CHECK(format_timing(rows).find("MIDC") != std::string::npos);
}
