#include "mmwfp/protocol.hpp"

#include "mmwfp/error.hpp"
#include "mmwfp/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mmwfp {

OnlineRss measure_online_rss(const Scene& scene, const Vec3& ue, double noise_sigma_db, std::uint64_t seed,
                             const SurveySettings& settings) {
  if (!(noise_sigma_db >= 0.0)) throw InvalidInput("RSS noise sigma must be >= 0");
  if (!scene.bounds.contains(ue)) throw InvalidInput("UE position outside scene bounds");
  OnlineRss out;
  out.values = wifi_rss_vector(scene, ue, settings);
  out.noise_sigma_db = noise_sigma_db;
  out.position = ue;
  if (noise_sigma_db > 0.0) {
    Rng rng(seed);
    for (double& v : out.values) v += rng.normal(0.0, noise_sigma_db);
  }
  return out;
}

std::vector<SectorId> BeamEstimate::sectors() const {
  std::vector<SectorId> out;
  out.reserve(ranked.size());
  for (const auto& b : ranked) out.push_back(b.sector);
  return out;
}

BeamEstimate estimate_best_beams(std::span<const double> rss, const ExemplarSet& exemplars, std::size_t ap,
                                 std::size_t beams) {
  if (beams < 1) throw InvalidInput("at least one beam must be requested");
  BeamEstimate est;
  est.ap = ap;
  est.requested = beams;
  const auto first = exemplars.entries.lower_bound(ExemplarKey{ap, 0});
  for (auto it = first; it != exemplars.entries.end() && it->first.first == ap; ++it) {
    const auto& entry = it->second;
    if (entry.vectors.empty()) continue;
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& ex : entry.vectors) {
      if (ex.size() != rss.size()) throw InvalidInput("online RSS length differs from the stored exemplars");
      double d = 0.0;
      for (std::size_t n = 0; n < rss.size(); ++n) {
        const double diff = rss[n] - ex[n];
        d += diff * diff;
      }
      nearest = std::min(nearest, d);
    }
    est.ranked.push_back({it->first.second, nearest});
  }
  if (est.ranked.empty()) {
    throw NoCoverageError("mm-w AP " + std::to_string(ap) + " has no sector with stored exemplars");
  }
  // Map order already lists sectors by ascending id, so a stable sort keeps
  // the lower id first on equal distances.
  std::stable_sort(est.ranked.begin(), est.ranked.end(),
                   [](const RankedBeam& a, const RankedBeam& b) { return a.distance < b.distance; });
  if (est.ranked.size() > beams) est.ranked.resize(beams);
  return est;
}

BeamEstimate estimate_best_beams(const OnlineRss& rss, const ExemplarSet& exemplars, std::size_t ap,
                                 std::size_t beams) {
  return estimate_best_beams(std::span<const double>(rss.values), exemplars, ap, beams);
}

double Link::power_dbm(SectorId sector) const {
  return sector_power_dbm(paths, tx_power_dbm, codebook->at(sector), los_penalty_db);
}

Link make_link(const Scene& scene, std::size_t ap, const Vec3& ue, const BlockageState& blockage,
               std::size_t position_index, int max_reflection_order) {
  const MmwAp& mmw = scene.mmw_aps.at(ap);
  Link link;
  link.ap = ap;
  link.tx_power_dbm = mmw.tx_power_dbm;
  link.los_penalty_db = blockage.los_penalty_db(ap, position_index);
  link.codebook = &scene.codebook_of(mmw);
  link.paths = trace_paths(scene, mmw.position, ue, Band::MmWave60GHz, max_reflection_order);
  return link;
}

BeamDecision beam_combining(const Link& link, std::span<const SectorId> candidates) {
  if (candidates.empty()) throw InvalidInput("beam combining needs at least one candidate");
  BeamDecision d;
  d.ap = link.ap;
  d.trained.reserve(candidates.size());
  for (SectorId id : candidates) {
    const double p = link.power_dbm(id);
    d.trained.push_back({id, p});
    if (d.best_sector == 0 || p > d.best_power_dbm || (p == d.best_power_dbm && id < d.best_sector)) {
      d.best_sector = id;
      d.best_power_dbm = p;
    }
  }
  auto order = d.trained;
  std::sort(order.begin(), order.end(), [](const TrainedBeam& a, const TrainedBeam& b) {
    return a.power_dbm != b.power_dbm ? a.power_dbm > b.power_dbm : a.sector < b.sector;
  });
  for (const auto& t : order) d.backup_order.push_back(t.sector);
  return d;
}

BeamDecision beam_combining(const Scene& scene, const Vec3& ue, std::size_t ap, const BeamEstimate& candidates,
                            const BlockageState& blockage, std::size_t position_index, int max_reflection_order) {
  const Link link = make_link(scene, ap, ue, blockage, position_index, max_reflection_order);
  const auto ids = candidates.sectors();
  return beam_combining(link, ids);
}

BeamDecision exhaustive_search(const Link& link) {
  std::vector<SectorId> all(link.codebook->size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<SectorId>(i + 1);
  return beam_combining(link, all);
}

BeamDecision exhaustive_search(const Scene& scene, const Vec3& ue, std::size_t ap, const BlockageState& blockage,
                               std::size_t position_index, int max_reflection_order) {
  return exhaustive_search(make_link(scene, ap, ue, blockage, position_index, max_reflection_order));
}

std::vector<SectorId> training_candidates(const BeamEstimate& estimate, std::size_t beams,
                                          std::uint32_t codebook_size) {
  if (beams >= codebook_size) {
    std::vector<SectorId> all(codebook_size);
    for (std::uint32_t i = 0; i < codebook_size; ++i) all[i] = i + 1;
    return all;
  }
  auto ids = estimate.sectors();
  if (ids.size() > beams) ids.resize(beams);
  return ids;
}

std::optional<SectorId> nearest_neighbor_baseline(std::span<const double> rss, const WifiRssDb& wifi,
                                                  const BestSectorDb& best, std::size_t ap) {
  if (wifi.lps() == 0 || wifi.lps() != best.lps()) throw InvalidInput("radio maps are empty or inconsistent");
  if (rss.size() != wifi.aps()) throw InvalidInput("online RSS length differs from the radio map");
  std::size_t nearest = 0;
  double nearest_d = std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l < wifi.lps(); ++l) {
    const auto row = wifi.row(l);
    double d = 0.0;
    for (std::size_t n = 0; n < rss.size(); ++n) {
      const double diff = rss[n] - row[n];
      d += diff * diff;
    }
    if (d < nearest_d) {
      nearest_d = d;
      nearest = l;
    }
  }
  return best.at(nearest, ap);
}

double rpr(const BeamDecision& proposed, const BeamDecision& exhaustive) {
  if (proposed.ap != exhaustive.ap) throw InvalidInput("RPR compares decisions for different APs");
  return proposed.best_power_dbm - exhaustive.best_power_dbm;
}

SetupTime setup_time(const TimingModel& model, Scheme scheme, std::uint32_t sectors, std::uint32_t bc_beams,
                     std::uint32_t ap_count) {
  if (sectors < 1 || bc_beams < 1 || ap_count < 1) throw InvalidInput("setup-time counts must be >= 1");
  SetupTime t;
  const double aps = ap_count;
  t.bc_s = aps * bc_beams * model.brp_per_beam_s;
  switch (scheme) {
    case Scheme::Midc:
      t.sls_s = aps * sectors * model.sls_per_sector_s;
      t.mid_s = aps * sectors * model.mid_per_sector_s;
      break;
    case Scheme::ProposedWithMid:
      t.mid_s = aps * model.ue_sectors * model.mid_per_sector_s;
      [[fallthrough]];
    case Scheme::Proposed:
      if (!model.pipelined) {
        t.rss_s = model.rss_probe_s;
        t.processing_s = model.processing_s;
      }
      break;
  }
  t.total_s = t.sls_s + t.mid_s + t.bc_s + t.rss_s + t.processing_s;
  return t;
}

std::string to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::Midc: return "MIDC";
    case Scheme::Proposed: return "proposed";
    case Scheme::ProposedWithMid: return "proposed+MID";
  }
  return "unknown";
}

} // namespace mmwfp
