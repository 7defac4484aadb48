#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "support.hpp"

#include "mmwfp/config.hpp"
#include "mmwfp/error.hpp"
#include "mmwfp/experiment.hpp"
#include "mmwfp/protocol.hpp"
#include "mmwfp/random.hpp"

#include <algorithm>
#include <cmath>

using namespace mmwfp;
using namespace mmwfp::test;

namespace {

SectorExemplars entry(std::vector<std::vector<double>> vectors) {
  SectorExemplars e;
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    e.member_lps.push_back(j);
    e.exemplar_members.push_back(j);
    e.assignment.push_back(j);
  }
  e.vectors = std::move(vectors);
  return e;
}

ExemplarSet three_sectors() {
  ExemplarSet set;
  set.entries[{0, 1}] = entry({{0.0, 0.0}});
  set.entries[{0, 2}] = entry({{3.0, 4.0}, {6.0, 8.0}});
  set.entries[{0, 3}] = entry({{10.0, 0.0}});
  return set;
}

// AP at (0, 0, 3) and UE at (6, 0, 1.5) next to a reflecting wall at y = 3.
// Sector 1 looks down the LOS path, sector 2 at the wall reflection.
struct TwoPathRig {
  Scene scene;
  Vec3 ue{6.0, 0.0, 1.5};

  TwoPathRig() {
    scene = open_scene();
    scene.surfaces.push_back({1, 3.0, -50.0, 50.0, -50.0, 50.0, "concrete"});
    const Vec3 ap{0.0, 0.0, 3.0};
    const auto paths = trace_paths(scene, ap, ue, Band::MmWave60GHz, 1);
    REQUIRE(paths.size() == 2);
    const auto& los = paths[0].kind == PathKind::Los ? paths[0] : paths[1];
    const auto& ref = paths[0].kind == PathKind::Los ? paths[1] : paths[0];
    const double bw = deg_to_rad(20.0);
    scene.codebooks[0] = Codebook({make_sector(1, los.azimuth, los.elevation, bw, bw),
                                   make_sector(2, ref.azimuth, ref.elevation, bw, bw)});
    scene.wifi_aps.push_back({"w", {1.0, 1.0, 2.5}, 20.0});
    scene.mmw_aps.push_back({"m", ap, 10.0, 0});
  }

  static BlockageState blocked() {
    BlockageState b = BlockageState::clear(1, 1);
    b.blocked[0] = 1;
    b.attenuation_db = 25.0;
    return b;
  }
};

} // namespace

TEST_CASE("ranking by nearest exemplar") {
  const ExemplarSet set = three_sectors();
  const std::vector<double> rss{0.0, 0.0};
  const auto est = estimate_best_beams(rss, set, 0, 3);
  REQUIRE(est.ranked.size() == 3);
  CHECK(est.ranked[0] == RankedBeam{1, 0.0});
  CHECK(est.ranked[1] == RankedBeam{2, 25.0});
  CHECK(est.ranked[2] == RankedBeam{3, 100.0});
  CHECK(est.sectors() == std::vector<SectorId>{1, 2, 3});
  CHECK(est.requested == 3);
}

TEST_CASE("requested beam count is clamped") {
  const ExemplarSet set = three_sectors();
  const std::vector<double> rss{6.0, 8.0};
  CHECK(estimate_best_beams(rss, set, 0, 1).sectors() == std::vector<SectorId>{2});
  CHECK(estimate_best_beams(rss, set, 0, 50).ranked.size() == 3);
  CHECK_THROWS_AS(estimate_best_beams(rss, set, 0, 0), InvalidInput);
  CHECK_THROWS_AS(estimate_best_beams(rss, set, 4, 5), NoCoverageError);
  const std::vector<double> wrong{1.0};
  CHECK_THROWS_AS(estimate_best_beams(wrong, set, 0, 1), InvalidInput);
}

TEST_CASE("equal distances go to the lower sector id") {
  ExemplarSet set;
  set.entries[{0, 9}] = entry({{1.0, 0.0}});
  set.entries[{0, 4}] = entry({{-1.0, 0.0}});
  const std::vector<double> rss{0.0, 0.0};
  CHECK(estimate_best_beams(rss, set, 0, 2).sectors() == std::vector<SectorId>{4, 9});
}

TEST_CASE("estimation never reads the UE position") {
  const ExemplarSet set = three_sectors();
  OnlineRss a{{2.0, 2.0}, 1.0, {1, 2, 3}};
  OnlineRss b{{2.0, 2.0}, 1.0, {9, 9, 1}};
  CHECK(estimate_best_beams(a, set, 0, 3).ranked == estimate_best_beams(b, set, 0, 3).ranked);
}

TEST_CASE("an exemplar's own vector ranks its sector first") {
  const ScenarioConfig cfg = default_config();
  const auto off = run_offline(cfg, 90, 4);
  std::size_t checked = 0;
  for (const auto& [key, ex] : off.maps.exemplars.entries) {
    for (std::size_t j = 0; j < ex.cluster_count(); ++j) {
      const auto est = estimate_best_beams(ex.vectors[j], off.maps.exemplars, key.first, 5);
      CHECK(est.ranked[0].sector == key.second);
      CHECK(est.ranked[0].distance == 0.0);
      ++checked;
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("online RSS measurement") {
  const ScenarioConfig cfg = default_config();
  const Scene scene = build_scene(cfg);
  const auto off = run_offline(cfg, 90, 4);
  const SurveySettings settings = survey_settings(cfg);

  const Vec3 lp = off.grid.points[12];
  const auto clean = measure_online_rss(scene, lp, 0.0, 1, settings);
  const auto row = off.maps.wifi.row(12);
  CHECK(std::equal(clean.values.begin(), clean.values.end(), row.begin(), row.end()));
  CHECK(clean.position == lp);

  const auto a = measure_online_rss(scene, lp, 1.0, 1, settings);
  const auto b = measure_online_rss(scene, lp, 1.0, 2, settings);
  CHECK(a.values != b.values);
  CHECK(a.values == measure_online_rss(scene, lp, 1.0, 1, settings).values);
  for (std::size_t n = 0; n < row.size(); ++n) {
    CHECK(std::abs(a.values[n] - row[n]) < 5.0);
    CHECK(std::abs(b.values[n] - row[n]) < 5.0);
  }
  CHECK_THROWS_AS(measure_online_rss(scene, lp, -1.0, 1, settings), InvalidInput);

  Scene single = open_scene();
  single.wifi_aps.push_back({"w", {0, 0, 1.5}, 20.0});
  const auto far = measure_online_rss(single, {10, 0, 1.5}, 0.0, 1, {});
  CHECK(std::abs(far.values[0] - -66.4) <= 0.1);
}

TEST_CASE("beam combining versus exhaustive search") {
  TwoPathRig rig;
  const auto clear = BlockageState::clear(1, 1);
  const Link link = make_link(rig.scene, 0, rig.ue, clear, 0, 1);

  const BeamDecision ex = exhaustive_search(link);
  CHECK(ex.best_sector == 1);
  CHECK(scan_best_sector(rig.scene, 0, rig.ue, -78.0) == SectorId{1});

  const std::vector<SectorId> only2{2};
  const BeamDecision single = beam_combining(link, only2);
  CHECK(single.best_sector == 2);
  CHECK(single.best_power_dbm <= ex.best_power_dbm);

  const std::vector<SectorId> both{1, 2};
  const BeamDecision d = beam_combining(link, both);
  CHECK(d.best_sector == ex.best_sector);
  CHECK(d.best_power_dbm == ex.best_power_dbm);
  REQUIRE(d.trained.size() == 2);
  CHECK(d.backup_order == std::vector<SectorId>{1, 2});
  CHECK(rpr(d, ex) == 0.0);
  CHECK_THROWS_AS(beam_combining(link, std::span<const SectorId>{}), InvalidInput);
}

TEST_CASE("a blocked LOS hands the link to the reflection") {
  TwoPathRig rig;
  const auto blocked = TwoPathRig::blocked();
  BeamEstimate est;
  est.ap = 0;
  est.requested = 2;
  est.ranked = {{1, 0.0}, {2, 1.0}};
  const BeamDecision d = beam_combining(rig.scene, rig.ue, 0, est, blocked, 0, 1);
  CHECK(d.best_sector == 2);
  CHECK(d.backup_order.front() == 2);
  const BeamDecision ex = exhaustive_search(rig.scene, rig.ue, 0, blocked, 0, 1);
  CHECK(ex.best_sector == 2);
  CHECK(scan_best_sector(rig.scene, 0, rig.ue, -78.0) == SectorId{1});
}

TEST_CASE("exhaustive search bounds every candidate subset") {
  const ScenarioConfig cfg = default_config();
  const Scene scene = build_scene(cfg);
  Rng rng(8);
  for (int t = 0; t < 20; ++t) {
    const Vec3 ue{rng.uniform(1.0, 19.0), rng.uniform(1.0, 9.0), 1.5};
    const auto blockage = sample_blockage(scene, std::span<const Vec3>(&ue, 1), 100 + t, 0.4, 25.0);
    for (std::size_t m = 0; m < scene.mmw_aps.size(); ++m) {
      const Link link = make_link(scene, m, ue, blockage, 0, 1);
      const BeamDecision ex = exhaustive_search(link);
      std::vector<SectorId> subset;
      for (int k = 0; k < 5; ++k) subset.push_back(1 + static_cast<SectorId>(rng.uniform() * 92.0));
      const BeamDecision bc = beam_combining(link, subset);
      CHECK(bc.best_power_dbm <= ex.best_power_dbm);
      if (ex.no_signal()) CHECK(ex.outage(-78.0));
    }
  }
}

TEST_CASE("exhaustive search finds the boresight sector") {
  Scene s = open_scene();
  s.mmw_aps.push_back({"m", {0, 0, 3}, 10.0, 0});
  const Sector& s7 = s.codebooks[0].at(7);
  const Vec3 ue = along(s.mmw_aps[0].position, s7.beam_azimuth, s7.beam_tilt, 5.0);
  CHECK(exhaustive_search(s, ue, 0, BlockageState::clear(1, 1), 0, 1).best_sector == 7);
}

TEST_CASE("training candidates") {
  BeamEstimate est;
  est.ranked = {{5, 0.0}, {3, 1.0}, {8, 2.0}};
  CHECK(training_candidates(est, 2, 92) == std::vector<SectorId>{5, 3});
  CHECK(training_candidates(est, 10, 92) == std::vector<SectorId>{5, 3, 8});
  const auto all = training_candidates(est, 92, 92);
  REQUIRE(all.size() == 92);
  CHECK(all.front() == 1);
  CHECK(all.back() == 92);
}

TEST_CASE("nearest-neighbour baseline") {
  const std::size_t lps = 20;
  WifiRssDb wifi(lps, {"a", "b", "c"});
  BestSectorDb best(lps, {"m"});
  for (std::size_t l = 0; l < lps; ++l) {
    wifi.at(l, 0) = -40.0 - 2.0 * l;
    wifi.at(l, 1) = -80.0 + 1.5 * l;
    wifi.at(l, 2) = -60.0 + (l % 3);
    best.set(l, 0, static_cast<SectorId>(l + 1));
  }
  best.set(5, 0, std::nullopt);

  const auto row12 = wifi.row(12);
  const std::vector<double> exact(row12.begin(), row12.end());
  CHECK(nearest_neighbor_baseline(exact, wifi, best, 0) == SectorId{13});

  // Nearest other row is sqrt(2^2 + 1.5^2 + 1) away; stay inside half of it.
  double min_gap = 1e9;
  for (std::size_t l = 0; l < lps; ++l) {
    if (l == 12) continue;
    double d = 0.0;
    for (std::size_t n = 0; n < 3; ++n) d += std::pow(wifi.at(l, n) - wifi.at(12, n), 2);
    min_gap = std::min(min_gap, std::sqrt(d));
  }
  Rng rng(4);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> noisy = exact;
    std::vector<double> dir{rng.normal(0, 1), rng.normal(0, 1), rng.normal(0, 1)};
    const double len = std::sqrt(dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]);
    for (std::size_t n = 0; n < 3; ++n) noisy[n] += dir[n] / len * 0.49 * min_gap;
    CHECK(nearest_neighbor_baseline(noisy, wifi, best, 0) == SectorId{13});
  }

  const auto row5 = wifi.row(5);
  CHECK_FALSE(nearest_neighbor_baseline(std::vector<double>(row5.begin(), row5.end()), wifi, best, 0).has_value());
  CHECK_THROWS_AS(nearest_neighbor_baseline(std::vector<double>{1.0}, wifi, best, 0), InvalidInput);
}

TEST_CASE("received power ratio") {
  BeamDecision p, e;
  p.best_power_dbm = -60.0;
  e.best_power_dbm = -58.0;
  CHECK(rpr(p, e) == -2.0);
  CHECK(rpr(e, e) == 0.0);
  p.ap = 1;
  CHECK_THROWS_AS(rpr(p, e), InvalidInput);
}

TEST_CASE("setup time model") {
  const TimingModel m;
  const SetupTime midc = setup_time(m, Scheme::Midc, 32, 7, 1);
  CHECK(midc.total_s == doctest::Approx(1.801e-3).epsilon(1e-9));
  CHECK(std::abs(midc.total_s - 1.8e-3) <= 0.05 * 1.8e-3);
  CHECK(midc.sls_share() > 0.70);
  CHECK(setup_time(m, Scheme::Midc, 32, 7, 10).total_s > 18e-3);

  const SetupTime prop = setup_time(m, Scheme::Proposed, 92, 10, 1);
  CHECK(prop.total_s == doctest::Approx(0.15e-3));
  CHECK(prop.sls_s == 0.0);
  const double full = setup_time(m, Scheme::Midc, 92, 10, 1).total_s;
  CHECK(1.0 - prop.total_s / full > 0.70);

  TimingModel serial = m;
  serial.pipelined = false;
  const double one = setup_time(serial, Scheme::Proposed, 92, 10, 1).total_s;
  const double eight = setup_time(serial, Scheme::Proposed, 92, 10, 8).total_s;
  CHECK(one == doctest::Approx(0.15e-3 + 100e-6 + 50e-6));
  CHECK(eight - 8 * 0.15e-3 == doctest::Approx(150e-6));

  const SetupTime mid = setup_time(m, Scheme::ProposedWithMid, 92, 10, 2);
  CHECK(mid.total_s == doctest::Approx(2 * (0.15e-3 + 13e-6)));
  CHECK_THROWS_AS(setup_time(m, Scheme::Midc, 0, 7, 1), InvalidInput);
  CHECK(to_string(Scheme::Midc) == "MIDC");
}
