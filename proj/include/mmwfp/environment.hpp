#pragma once

#include "mmwfp/antenna.hpp"
#include "mmwfp/geometry.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace mmwfp {

enum class Band { Wifi5GHz, MmWave60GHz };

double carrier_hz(Band band);

inline constexpr double kSpeedOfLight = 299792458.0;

/// Returned as received power when no propagation path exists.
inline constexpr double kNoSignalDbm = -std::numeric_limits<double>::infinity();

/// Free-space (Friis) loss in dB over `length_m` at the band's carrier.
double free_space_loss_db(double length_m, Band band);

struct Material {
  double loss_5ghz_db = 0.0;
  double loss_60ghz_db = 0.0;

  double loss_db(Band band) const { return band == Band::Wifi5GHz ? loss_5ghz_db : loss_60ghz_db; }
  bool operator==(const Material&) const = default;
};

/// Axis-aligned rectangle. `normal_axis` is 0, 1 or 2 (x, y, z); the rectangle
/// lies in the plane coordinate[normal_axis] == `offset` and spans `u` and `v`
/// along the two remaining axes in increasing axis order.
struct Surface {
  int normal_axis = 0;
  double offset = 0.0;
  double u_min = 0.0;
  double u_max = 0.0;
  double v_min = 0.0;
  double v_max = 0.0;
  std::string material;

  bool operator==(const Surface&) const = default;
};

struct WifiAp {
  std::string id;
  Vec3 position;
  double tx_power_dbm = 20.0;

  bool operator==(const WifiAp&) const = default;
};

struct MmwAp {
  std::string id;
  Vec3 position;
  double tx_power_dbm = 10.0;
  std::size_t codebook = 0; ///< index into Scene::codebooks

  bool operator==(const MmwAp&) const = default;
};

struct Scene {
  Box bounds;
  std::vector<Surface> surfaces;
  std::map<std::string, Material> materials;
  std::vector<WifiAp> wifi_aps;
  std::vector<MmwAp> mmw_aps;
  std::vector<Codebook> codebooks;

  const Codebook& codebook_of(const MmwAp& ap) const { return codebooks.at(ap.codebook); }

  /// Collects every violated invariant; empty when the scene is usable.
  std::vector<std::string> problems() const;
  /// Throws ConfigError listing all problems().
  void validate() const;
};

/// Adds the six bounding walls (floor, ceiling, four sides) as reflectors.
void add_room_walls(Scene& scene, const std::string& material);

/// Adds the four vertical faces of a full-height rectangular column.
void add_pillar(Scene& scene, double x_min, double x_max, double y_min, double y_max,
                const std::string& material);

enum class PathKind { Los, Reflected };

struct PropagationPath {
  PathKind kind = PathKind::Los;
  int order = 0;                ///< number of reflections
  double length = 0.0;          ///< metres
  double azimuth = 0.0;         ///< departure azimuth at tx, [0, 2pi)
  double elevation = 0.0;       ///< departure zenith angle at tx, [0, pi]
  double path_loss_db = 0.0;    ///< free-space loss plus reflection losses
  Band band = Band::MmWave60GHz;
  std::vector<Vec3> bounces;    ///< reflection points in travel order
  std::vector<std::size_t> surfaces; ///< reflecting surface indices
};

/// Image-method tracer: the unoccluded LOS path plus every specular reflection
/// up to `max_reflection_order` (0, 1 or 2) whose unfolded path is unoccluded.
/// A surface never reflects a path whose endpoint lies in its own plane.
std::vector<PropagationPath> trace_paths(const Scene& scene, const Vec3& tx, const Vec3& rx, Band band,
                                         int max_reflection_order);

/// True when the straight segment a->b crosses any surface other than those
/// listed in `ignore`.
bool segment_occluded(const Scene& scene, const Vec3& a, const Vec3& b,
                      std::span<const std::size_t> ignore = {});

struct BlockageState {
  std::size_t ap_count = 0;
  std::size_t position_count = 0;
  std::vector<std::uint8_t> blocked; ///< ap-major: blocked[ap * position_count + pos]
  double attenuation_db = 0.0;
  double block_probability = 0.0;

  /// No blockage for any link.
  static BlockageState clear(std::size_t aps, std::size_t positions);

  bool is_blocked(std::size_t ap, std::size_t pos) const;
  /// Penalty applied to the LOS path of link (ap, pos).
  double los_penalty_db(std::size_t ap, std::size_t pos) const {
    return is_blocked(ap, pos) ? attenuation_db : 0.0;
  }
};

/// Draws p ~ U[0, p_max] once, then blocks each (mm-w AP, position) LOS path
/// independently with probability p. Fully determined by `seed`.
BlockageState sample_blockage(const Scene& scene, std::span<const Vec3> positions, std::uint64_t seed,
                              double p_max, double attenuation_db);

struct PathContribution {
  double beam_gain_db = 0.0;
  double penalty_db = 0.0;
  double power_dbm = 0.0;
};

struct ChannelGain {
  std::vector<PathContribution> contributions; ///< parallel to the input paths
  double total_gain_db = kNoSignalDbm;
  double received_power_dbm = kNoSignalDbm;

  bool has_signal() const { return received_power_dbm != kNoSignalDbm; }
};

using TxGainFn = std::function<double(double phi, double theta)>;

/// Non-coherent power sum over `paths`. `los_penalty_db` is added as loss on
/// LOS paths only. An empty path list yields kNoSignalDbm.
ChannelGain received_power(std::span<const PropagationPath> paths, double tx_power_dbm,
                           const TxGainFn& tx_gain, double rx_gain_db, double los_penalty_db = 0.0);

/// Same as above, taking the penalty for link (ap, pos) from a blockage draw.
ChannelGain received_power(std::span<const PropagationPath> paths, double tx_power_dbm,
                           const TxGainFn& tx_gain, double rx_gain_db, const BlockageState& blockage,
                           std::size_t ap, std::size_t pos);

/// Received power through one codebook sector with a quasi-omni receiver.
/// Matches received_power(...).received_power_dbm bit for bit.
double sector_power_dbm(std::span<const PropagationPath> paths, double tx_power_dbm, const Sector& sector,
                        double los_penalty_db);

/// Path gain (negative dB) for omni antennas at both ends; kNoSignalDbm when
/// `paths` is empty.
double omni_path_gain_db(std::span<const PropagationPath> paths);

} // namespace mmwfp
