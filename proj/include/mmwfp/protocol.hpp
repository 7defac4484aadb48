#pragma once

#include "mmwfp/clustering.hpp"
#include "mmwfp/environment.hpp"
#include "mmwfp/fingerprint.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mmwfp {

/// Online WiFi RSS vector reported for a UE. `position` is ground truth kept
/// for evaluation; nothing in the estimation path reads it.
struct OnlineRss {
  std::vector<double> values;
  double noise_sigma_db = 0.0;
  Vec3 position;
};

/// Noiseless normalized 5 GHz RSS plus N(0, sigma^2) dB per entry.
OnlineRss measure_online_rss(const Scene& scene, const Vec3& ue, double noise_sigma_db, std::uint64_t seed,
                             const SurveySettings& settings = {});

struct RankedBeam {
  SectorId sector = 0;
  double distance = 0.0; ///< squared Euclidean distance to the nearest exemplar

  bool operator==(const RankedBeam&) const = default;
};

struct BeamEstimate {
  std::size_t ap = 0;
  std::size_t requested = 0;
  std::vector<RankedBeam> ranked;

  std::vector<SectorId> sectors() const;
};

/// Ranks the sectors of `ap` by the distance from `rss` to their nearest
/// exemplar and keeps the first min(X, sector count). Ties go to the lower id.
/// Throws NoCoverageError when `ap` has no sector with exemplars.
BeamEstimate estimate_best_beams(std::span<const double> rss, const ExemplarSet& exemplars, std::size_t ap,
                                 std::size_t beams);
BeamEstimate estimate_best_beams(const OnlineRss& rss, const ExemplarSet& exemplars, std::size_t ap,
                                 std::size_t beams);

/// One mm-w AP -> UE link with its traced 60 GHz paths and the LOS blockage
/// penalty of the current trial.
struct Link {
  std::size_t ap = 0;
  double tx_power_dbm = 0.0;
  double los_penalty_db = 0.0;
  const Codebook* codebook = nullptr;
  std::vector<PropagationPath> paths;

  /// Received power through `sector` with the quasi-omni UE.
  double power_dbm(SectorId sector) const;
};

Link make_link(const Scene& scene, std::size_t ap, const Vec3& ue, const BlockageState& blockage,
               std::size_t position_index, int max_reflection_order = 1);

struct TrainedBeam {
  SectorId sector = 0;
  double power_dbm = kNoSignalDbm;

  bool operator==(const TrainedBeam&) const = default;
};

struct BeamDecision {
  std::size_t ap = 0;
  SectorId best_sector = 0;
  double best_power_dbm = kNoSignalDbm;
  std::vector<TrainedBeam> trained;    ///< in training order
  std::vector<SectorId> backup_order;  ///< strongest first, ties to the lower id

  /// No path at all: every trained beam returned no signal.
  bool no_signal() const { return best_power_dbm == kNoSignalDbm; }
  bool outage(double sensitivity_dbm) const { return no_signal() || best_power_dbm < sensitivity_dbm; }
};

/// Trains only the candidate beams and keeps the strongest (lower id on ties).
BeamDecision beam_combining(const Link& link, std::span<const SectorId> candidates);
BeamDecision beam_combining(const Scene& scene, const Vec3& ue, std::size_t ap, const BeamEstimate& candidates,
                            const BlockageState& blockage, std::size_t position_index,
                            int max_reflection_order = 1);

/// Trains every sector of the AP's codebook.
BeamDecision exhaustive_search(const Link& link);
BeamDecision exhaustive_search(const Scene& scene, const Vec3& ue, std::size_t ap, const BlockageState& blockage,
                               std::size_t position_index, int max_reflection_order = 1);

/// Sector list actually trained for `beams` requested beams: the estimate's
/// ranking, or the whole codebook once `beams` reaches the codebook size.
std::vector<SectorId> training_candidates(const BeamEstimate& estimate, std::size_t beams,
                                          std::uint32_t codebook_size);

/// Best sector of the LP whose stored RSS row is nearest to `rss` (lower LP
/// on ties). nullopt when that LP is null for `ap`.
std::optional<SectorId> nearest_neighbor_baseline(std::span<const double> rss, const WifiRssDb& wifi,
                                                  const BestSectorDb& best, std::size_t ap);

/// Received power ratio in dB: proposed best power minus exhaustive best power.
double rpr(const BeamDecision& proposed, const BeamDecision& exhaustive);

enum class Scheme { Midc, Proposed, ProposedWithMid };

struct TimingModel {
  double sls_per_sector_s = 40e-6;
  double mid_per_sector_s = 13e-6;
  double brp_per_beam_s = 15e-6;
  double rss_probe_s = 100e-6;   ///< T_RSS: 5 GHz probe request
  double processing_s = 50e-6;   ///< T_PT: controller estimation
  bool pipelined = true;
  std::uint32_t ue_sectors = 1;

  bool operator==(const TimingModel&) const = default;
};

struct SetupTime {
  double total_s = 0.0;
  double sls_s = 0.0;
  double mid_s = 0.0;
  double bc_s = 0.0;
  double rss_s = 0.0;
  double processing_s = 0.0;

  double sls_share() const { return total_s > 0.0 ? sls_s / total_s : 0.0; }
};

/// Beamforming setup time across `ap_count` APs.
///
/// MIDC sweeps all `sectors` in SLS and MID and then trains `bc_beams` pairs.
/// The proposed scheme only trains `bc_beams`; the probe and estimation
/// times join the critical path only when the model is not pipelined.
SetupTime setup_time(const TimingModel& model, Scheme scheme, std::uint32_t sectors, std::uint32_t bc_beams,
                     std::uint32_t ap_count);

std::string to_string(Scheme scheme);

} // namespace mmwfp
