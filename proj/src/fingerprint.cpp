#include "mmwfp/fingerprint.hpp"

#include "mmwfp/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace mmwfp {

GridLayout grid_layout_for(const Box& bounds, std::uint32_t count, double ue_height, double margin) {
  if (count < 1) throw ConfigError("learning grid needs at least one LP");
  const double wx = bounds.hi.x - bounds.lo.x - 2.0 * margin;
  const double wy = bounds.hi.y - bounds.lo.y - 2.0 * margin;
  if (!(wx > 0.0 && wy > 0.0)) throw ConfigError("learning grid margin leaves no floor area");
  const double aspect = wx / wy;

  GridLayout best{count, 1, ue_height, margin};
  double best_score = std::numeric_limits<double>::infinity();
  for (std::uint32_t ny = 1; ny <= count; ++ny) {
    if (count % ny != 0) continue;
    const std::uint32_t nx = count / ny;
    const double score = std::abs(std::log((static_cast<double>(nx) / ny) / aspect));
    if (score < best_score - 1e-12) {
      best_score = score;
      best = {nx, ny, ue_height, margin};
    }
  }
  return best;
}

LearningGrid make_learning_grid(const Box& bounds, const GridLayout& layout) {
  if (layout.nx < 1 || layout.ny < 1) throw ConfigError("learning grid counts must be >= 1");
  const double x0 = bounds.lo.x + layout.margin;
  const double y0 = bounds.lo.y + layout.margin;
  const double dx = (bounds.hi.x - bounds.lo.x - 2.0 * layout.margin) / layout.nx;
  const double dy = (bounds.hi.y - bounds.lo.y - 2.0 * layout.margin) / layout.ny;
  if (!(dx > 0.0 && dy > 0.0)) throw ConfigError("learning grid margin leaves no floor area");

  LearningGrid grid;
  grid.layout = layout;
  grid.points.reserve(static_cast<std::size_t>(layout.nx) * layout.ny);
  for (std::uint32_t j = 0; j < layout.ny; ++j) {
    for (std::uint32_t i = 0; i < layout.nx; ++i) {
      const Vec3 p{x0 + (i + 0.5) * dx, y0 + (j + 0.5) * dy, bounds.lo.z + layout.ue_height};
      if (!bounds.contains(p)) throw ConfigError("learning point falls outside the scene bounds");
      grid.points.push_back(p);
    }
  }
  return grid;
}

WifiRssDb::WifiRssDb(std::size_t lps, std::vector<std::string> ap_ids)
    : lps_(lps), ap_ids_(std::move(ap_ids)), values_(lps_ * ap_ids_.size(), 0.0) {}

BestSectorDb::BestSectorDb(std::size_t lps, std::vector<std::string> ap_ids)
    : lps_(lps), ap_ids_(std::move(ap_ids)), values_(lps_ * ap_ids_.size(), kNull) {}

std::vector<double> wifi_rss_vector(const Scene& scene, const Vec3& pos, const SurveySettings& settings) {
  std::vector<double> out;
  out.reserve(scene.wifi_aps.size());
  for (const auto& ap : scene.wifi_aps) {
    const auto paths = trace_paths(scene, pos, ap.position, Band::Wifi5GHz, settings.max_reflection_order);
    const double gain = omni_path_gain_db(paths);
    if (gain == kNoSignalDbm) {
      throw CoverageError("WiFi AP '" + ap.id + "' has no path to position (" + std::to_string(pos.x) + ", " +
                          std::to_string(pos.y) + ", " + std::to_string(pos.z) + ")");
    }
    // RSS at the AP, normalized by the UE's 5 GHz transmit power.
    const double rss_dbm = settings.ue_wifi_tx_power_dbm + gain;
    out.push_back(rss_dbm - settings.ue_wifi_tx_power_dbm);
  }
  return out;
}

bool wifi_covered(const Scene& scene, const Vec3& pos, int max_reflection_order) {
  return std::ranges::all_of(scene.wifi_aps, [&](const WifiAp& ap) {
    return !trace_paths(scene, pos, ap.position, Band::Wifi5GHz, max_reflection_order).empty();
  });
}

std::optional<SectorId> scan_best_sector(const Scene& scene, std::size_t mmw_ap, const Vec3& lp,
                                         double sensitivity_dbm, int max_reflection_order) {
  const MmwAp& ap = scene.mmw_aps.at(mmw_ap);
  const Codebook& codebook = scene.codebook_of(ap);
  if (codebook.size() == 0) throw InvalidInput("mm-w AP '" + ap.id + "' has an empty codebook");
  const auto paths = trace_paths(scene, ap.position, lp, Band::MmWave60GHz, max_reflection_order);
  if (paths.empty()) return std::nullopt;

  SectorId best = 0;
  double best_power = kNoSignalDbm;
  for (const Sector& sector : codebook.sectors()) {
    const double p = sector_power_dbm(paths, ap.tx_power_dbm, sector, 0.0);
    if (best == 0 || p > best_power || (p == best_power && sector.id < best)) {
      best = sector.id;
      best_power = p;
    }
  }
  if (best_power < sensitivity_dbm) return std::nullopt;
  return best;
}

RadioMaps build_databases(const Scene& scene, const LearningGrid& grid, const SurveySettings& settings) {
  std::vector<std::string> wifi_ids;
  for (const auto& ap : scene.wifi_aps) wifi_ids.push_back(ap.id);
  std::vector<std::string> mmw_ids;
  for (const auto& ap : scene.mmw_aps) mmw_ids.push_back(ap.id);

  RadioMaps maps{WifiRssDb(grid.points.size(), wifi_ids), BestSectorDb(grid.points.size(), mmw_ids)};
  for (std::size_t l = 0; l < grid.points.size(); ++l) {
    const Vec3& lp = grid.points[l];
    std::vector<double> rss;
    try {
      rss = wifi_rss_vector(scene, lp, settings);
    } catch (const CoverageError& e) {
      throw CoverageError("LP " + std::to_string(l + 1) + ": " + e.what());
    }
    for (std::size_t n = 0; n < rss.size(); ++n) maps.wifi.at(l, n) = rss[n];
    for (std::size_t m = 0; m < scene.mmw_aps.size(); ++m) {
      maps.best.set(l, m, scan_best_sector(scene, m, lp, settings.sensitivity_dbm, settings.max_reflection_order));
    }
  }
  return maps;
}

std::vector<SectorGroup> group_by_sector(const WifiRssDb& wifi, const BestSectorDb& best, std::size_t mmw_ap) {
  if (wifi.lps() != best.lps()) throw InvalidInput("radio maps disagree on the LP count");
  if (mmw_ap >= best.aps()) throw InvalidInput("mm-w AP index out of range");

  std::map<SectorId, SectorGroup> by_sector;
  for (std::size_t l = 0; l < best.lps(); ++l) {
    const auto id = best.at(l, mmw_ap);
    if (!id) continue;
    auto& group = by_sector[*id];
    group.ap = mmw_ap;
    group.sector = *id;
    group.lps.push_back(l);
    const auto row = wifi.row(l);
    group.rss.emplace_back(row.begin(), row.end());
  }
  std::vector<SectorGroup> out;
  out.reserve(by_sector.size());
  for (auto& [id, group] : by_sector) out.push_back(std::move(group));
  return out;
}

} // namespace mmwfp
