#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "mmwfp/clustering.hpp"
#include "mmwfp/error.hpp"
#include "mmwfp/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

using namespace mmwfp;

namespace {

using Points = std::vector<std::vector<double>>;

double sqdist(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
  return d;
}

// Net similarity of an exemplar subset, computed from raw points.
double oracle_net(const Points& pts, double pref, const std::vector<std::size_t>& ex) {
  double net = pref * static_cast<double>(ex.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (std::ranges::find(ex, i) != ex.end()) continue;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t k : ex) best = std::max(best, -sqdist(pts[i], pts[k]));
    net += best;
  }
  return net;
}

// Best net similarity over every nonempty exemplar subset; fewer exemplars win ties.
std::pair<double, std::size_t> brute_force(const Points& pts, double pref) {
  const std::size_t n = pts.size();
  double best = -std::numeric_limits<double>::infinity();
  std::size_t best_count = 0;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<std::size_t> ex;
    for (std::size_t k = 0; k < n; ++k) if (mask & (1u << k)) ex.push_back(k);
    const double v = oracle_net(pts, pref, ex);
    if (v > best || (v == best && ex.size() < best_count)) {
      best = v;
      best_count = ex.size();
    }
  }
  return {best, best_count};
}

double median_offdiag(const Points& pts) {
  std::vector<double> v;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t k = 0; k < pts.size(); ++k)
      if (i != k) v.push_back(-sqdist(pts[i], pts[k]));
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size();
  return m % 2 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

// RSS-like instance: a few blobs around -40..-90 dB.
Points random_instance(Rng& rng, std::size_t k, std::size_t dim) {
  const std::size_t blobs = 1 + static_cast<std::size_t>(rng.uniform() * 3.0);
  Points centres;
  for (std::size_t b = 0; b < blobs; ++b) {
    std::vector<double> c(dim);
    for (double& x : c) x = rng.uniform(-90.0, -40.0);
    centres.push_back(c);
  }
  Points pts;
  for (std::size_t i = 0; i < k; ++i) {
    auto p = centres[i % blobs];
    for (double& x : p) x += rng.normal(0.0, 2.0);
    pts.push_back(p);
  }
  return pts;
}

} // namespace

TEST_CASE("similarity of two points") {
  const Points pts{{0.0, 0.0}, {3.0, 4.0}};
  const auto s = similarity_matrix(pts, 0.3);
  REQUIRE(s.size == 2);
  CHECK(s.at(0, 1) == -25.0);
  CHECK(s.at(1, 0) == -25.0);
  CHECK(s.preference == doctest::Approx(-7.5));
  CHECK(s.at(0, 0) == doctest::Approx(-7.5));
  CHECK(s.at(1, 1) == doctest::Approx(-7.5));
}

TEST_CASE("similarity edge cases") {
  const auto dup = similarity_matrix(Points{{1.0, 2.0}, {1.0, 2.0}, {1.0, 2.0}}, 0.3);
  for (double v : dup.values) CHECK(v == 0.0);
  const auto one = similarity_matrix(Points{{5.0, 5.0}}, 0.3);
  REQUIRE(one.size == 1);
  CHECK(one.values == std::vector<double>{0.0});
  CHECK_THROWS_AS(similarity_matrix(Points{{1.0}, {1.0, 2.0}}, 0.3), InvalidInput);
}

TEST_CASE("preference uses the median of all ordered pairs") {
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const auto pts = random_instance(rng, 2 + t % 7, 3);
    const auto s = similarity_matrix(pts, 0.3);
    CHECK(s.preference == doctest::Approx(0.3 * median_offdiag(pts)).epsilon(1e-12));
  }
}

TEST_CASE("single point is its own exemplar") {
  const auto r = affinity_propagate(similarity_matrix(Points{{-50.0, -60.0}}, 0.3));
  CHECK(r.exemplars == std::vector<std::size_t>{0});
  CHECK(r.assignment == std::vector<std::size_t>{0});
}

TEST_CASE("two tight blobs give two clusters") {
  const Points pts{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {100.0, 0.0}, {101.0, 0.0}, {100.0, 1.0}};
  const auto sim = similarity_matrix(pts, 0.3);
  const auto r = affinity_propagate(sim);
  REQUIRE(r.exemplars.size() == 2);
  CHECK(r.exemplars[0] < 3);
  CHECK(r.exemplars[1] >= 3);
  for (std::size_t i = 0; i < 6; ++i) CHECK(r.assignment[i] == (i < 3 ? 0u : 1u));
  const auto [opt, count] = brute_force(pts, sim.preference);
  CHECK(count == 2);
  CHECK(oracle_net(pts, sim.preference, r.exemplars) == doctest::Approx(opt));
}

TEST_CASE("identical points give one cluster") {
  const Points pts(5, std::vector<double>{-55.0, -70.0});
  const auto r = affinity_propagate(similarity_matrix(pts, 0.3));
  CHECK(r.exemplars.size() == 1);
  CHECK(brute_force(pts, 0.0).second == 1);
}

TEST_CASE("net similarity agrees with the oracle") {
  Rng rng(11);
  for (int t = 0; t < 30; ++t) {
    const auto pts = random_instance(rng, 2 + t % 7, 2);
    const auto sim = similarity_matrix(pts, 0.3);
    const std::vector<std::size_t> ex{0, pts.size() - 1};
    CHECK(net_similarity(sim, ex) == doctest::Approx(oracle_net(pts, sim.preference, ex)).epsilon(1e-12));
  }
}

TEST_CASE("affinity propagation is near the brute-force optimum") {
  Rng rng(2024);
  for (int t = 0; t < 100; ++t) {
    const std::size_t k = 1 + static_cast<std::size_t>(rng.uniform() * 8.0);
    const auto pts = random_instance(rng, k, 2 + t % 3);
    const auto sim = similarity_matrix(pts, 0.3);
    const auto r = affinity_propagate(sim);
    const double got = oracle_net(pts, sim.preference, r.exemplars);
    const double opt = brute_force(pts, sim.preference).first;
    CHECK(got <= opt + 1e-9);
    if (opt == 0.0) {
      CHECK(got == 0.0);
    } else {
      CHECK(opt / got >= 0.95);
    }
  }
}

TEST_CASE("exemplars are members and assignments are optimal") {
  Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    const auto pts = random_instance(rng, 3 + t % 20, 4);
    const auto sim = similarity_matrix(pts, 0.3);
    const auto r = affinity_propagate(sim);
    REQUIRE_FALSE(r.exemplars.empty());
    CHECK(std::is_sorted(r.exemplars.begin(), r.exemplars.end()));
    REQUIRE(r.assignment.size() == pts.size());
    for (std::size_t j = 0; j < r.exemplars.size(); ++j) CHECK(r.assignment[r.exemplars[j]] == j);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (std::ranges::find(r.exemplars, i) != r.exemplars.end()) continue;
      const double mine = sim.at(i, r.exemplars[r.assignment[i]]);
      for (std::size_t k : r.exemplars) CHECK(mine >= sim.at(i, k));
    }
  }
}

TEST_CASE("permuting the input permutes the exemplars") {
  Rng rng(77);
  for (int t = 0; t < 30; ++t) {
    auto pts = random_instance(rng, 4 + t % 10, 3);
    const auto a = affinity_propagate(similarity_matrix(pts, 0.3));
    std::set<std::vector<double>> ea;
    for (std::size_t k : a.exemplars) ea.insert(pts[k]);

    std::vector<std::size_t> perm(pts.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng.engine());
    Points shuffled;
    for (std::size_t p : perm) shuffled.push_back(pts[p]);
    const auto b = affinity_propagate(similarity_matrix(shuffled, 0.3));
    std::set<std::vector<double>> eb;
    for (std::size_t k : b.exemplars) eb.insert(shuffled[k]);
    CHECK(ea == eb);
  }
}

TEST_CASE("more negative preference gives no more clusters on average") {
  const double chis[] = {0.1, 0.3, 1.0, 3.0};
  double mean[4] = {0, 0, 0, 0};
  const int seeds = 200;
  for (int seed = 0; seed < seeds; ++seed) {
    Rng rng(static_cast<std::uint64_t>(seed) + 1000);
    const auto pts = random_instance(rng, 12, 3);
    for (int c = 0; c < 4; ++c) mean[c] += affinity_propagate(similarity_matrix(pts, chis[c])).exemplars.size();
  }
  for (int c = 0; c < 3; ++c) CHECK(mean[c] >= mean[c + 1]);
  CHECK(mean[0] > mean[3]);
}

TEST_CASE("no exemplar emerging falls back to one") {
  // A one-iteration budget can stop before any exemplar emerges.
  ApParams p;
  p.max_iterations = 1;
  p.stable_window = 1;
  const Points pts{{0.0}, {1.0}, {2.0}};
  const auto r = affinity_propagate(similarity_matrix(pts, 0.3), p);
  CHECK_FALSE(r.exemplars.empty());
}

TEST_CASE("invalid clustering input") {
  auto sim = similarity_matrix(Points{{0.0}, {1.0}}, 0.3);
  sim.values[1] = std::nan("");
  CHECK_THROWS_AS(affinity_propagate(sim), InvalidInput);
  ApParams bad;
  bad.damping = 1.0;
  CHECK_THROWS_AS(affinity_propagate(similarity_matrix(Points{{0.0}, {1.0}}, 0.3), bad), InvalidInput);
}

TEST_CASE("exemplar set over sector groups") {
  CHECK(build_exemplar_set({}, 0.3).empty());

  std::vector<SectorGroup> groups;
  groups.push_back({0, 4, {2}, {{-50.0, -60.0}}});
  groups.push_back({0, 9, {5}, {{-40.0, -70.0}}});
  groups.push_back({1, 4, {0, 1, 3}, {{-50.0, -60.0}, {-50.5, -60.0}, {-90.0, -40.0}}});
  const auto set = build_exemplar_set(groups, 0.3);
  CHECK(set.sector_count(0) == 2);
  CHECK(set.sector_count(1) == 1);
  CHECK(set.sector_count(2) == 0);
  const auto& single = set.entries.at({0, 4});
  CHECK(single.cluster_count() == 1);
  CHECK(single.vectors[0] == groups[0].rss[0]);
  CHECK(single.exemplar_lp(0) == 2);
  const auto& multi = set.entries.at({1, 4});
  CHECK(multi.member_lps == std::vector<std::size_t>{0, 1, 3});
  for (std::size_t j = 0; j < multi.cluster_count(); ++j) {
    CHECK(std::ranges::find(groups[2].rss, multi.vectors[j]) != groups[2].rss.end());
  }
  CHECK(multi.cluster_count() < 3);
}
