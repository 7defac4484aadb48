#pragma once

#include "mmwfp/antenna.hpp"
#include "mmwfp/environment.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mmwfp {

struct GridLayout {
  std::uint32_t nx = 1;
  std::uint32_t ny = 1;
  double ue_height = 1.5;
  double margin = 0.5;

  bool operator==(const GridLayout&) const = default;
};

/// The learning points (LPs) where the offline radio maps are surveyed.
struct LearningGrid {
  std::vector<Vec3> points;
  GridLayout layout;
};

/// Splits `count` into nx * ny with nx / ny as close as possible to the
/// room's x / y aspect ratio.
GridLayout grid_layout_for(const Box& bounds, std::uint32_t count, double ue_height, double margin);

/// Cell-centred uniform grid over the room floor shrunk by `layout.margin`.
LearningGrid make_learning_grid(const Box& bounds, const GridLayout& layout);

/// Offline WiFi radio map: L x N normalized RSS (path gain, dB).
class WifiRssDb {
public:
  WifiRssDb() = default;
  WifiRssDb(std::size_t lps, std::vector<std::string> ap_ids);

  std::size_t lps() const { return lps_; }
  std::size_t aps() const { return ap_ids_.size(); }
  const std::vector<std::string>& ap_ids() const { return ap_ids_; }

  double at(std::size_t lp, std::size_t ap) const { return values_[lp * aps() + ap]; }
  double& at(std::size_t lp, std::size_t ap) { return values_[lp * aps() + ap]; }
  std::span<const double> row(std::size_t lp) const { return {values_.data() + lp * aps(), aps()}; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  bool operator==(const WifiRssDb&) const = default;

private:
  std::size_t lps_ = 0;
  std::vector<std::string> ap_ids_;
  std::vector<double> values_;
};

/// Offline mm-w radio map: L x M best sector ids, 0 meaning null (no coverage).
class BestSectorDb {
public:
  static constexpr SectorId kNull = 0;

  BestSectorDb() = default;
  BestSectorDb(std::size_t lps, std::vector<std::string> ap_ids);

  std::size_t lps() const { return lps_; }
  std::size_t aps() const { return ap_ids_.size(); }
  const std::vector<std::string>& ap_ids() const { return ap_ids_; }

  std::optional<SectorId> at(std::size_t lp, std::size_t ap) const {
    const SectorId v = values_[lp * aps() + ap];
    return v == kNull ? std::nullopt : std::optional<SectorId>(v);
  }
  void set(std::size_t lp, std::size_t ap, std::optional<SectorId> id) {
    values_[lp * aps() + ap] = id.value_or(kNull);
  }
  const std::vector<SectorId>& raw() const { return values_; }
  std::vector<SectorId>& raw() { return values_; }

  bool operator==(const BestSectorDb&) const = default;

private:
  std::size_t lps_ = 0;
  std::vector<std::string> ap_ids_;
  std::vector<SectorId> values_;
};

/// LPs sharing one best sector of one mm-w AP, with their full RSS vectors.
struct SectorGroup {
  std::size_t ap = 0;
  SectorId sector = 0;
  std::vector<std::size_t> lps;
  std::vector<std::vector<double>> rss;

  std::size_t size() const { return lps.size(); }
};

struct SurveySettings {
  double sensitivity_dbm = -78.0;
  int max_reflection_order = 1;
  double ue_wifi_tx_power_dbm = 15.0;
};

/// Normalized 5 GHz RSS vector (one entry per WiFi AP) for a UE at `pos`.
/// Throws CoverageError naming the AP when some WiFi AP has no path.
std::vector<double> wifi_rss_vector(const Scene& scene, const Vec3& pos, const SurveySettings& settings);

/// True when every WiFi AP of the scene has at least one 5 GHz path to `pos`.
bool wifi_covered(const Scene& scene, const Vec3& pos, int max_reflection_order = 1);

/// Offline exhaustive scan of one mm-w AP's codebook toward `lp` with a
/// quasi-omni receiver and no blockage. Returns the strongest sector (lowest
/// id on ties), or nullopt when there is no path or the peak is below the
/// sensitivity.
std::optional<SectorId> scan_best_sector(const Scene& scene, std::size_t mmw_ap, const Vec3& lp,
                                         double sensitivity_dbm, int max_reflection_order = 1);

struct RadioMaps {
  WifiRssDb wifi;
  BestSectorDb best;
};

RadioMaps build_databases(const Scene& scene, const LearningGrid& grid, const SurveySettings& settings);

/// Partitions the non-null LPs of one AP's Phi column by best sector, in
/// ascending sector order.
std::vector<SectorGroup> group_by_sector(const WifiRssDb& wifi, const BestSectorDb& best, std::size_t mmw_ap);

} // namespace mmwfp
