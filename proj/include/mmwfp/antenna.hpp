#pragma once

#include <cstdint>
#include <vector>

namespace mmwfp {

/// 1-based sector identifier inside one codebook. 0 is reserved for "no sector".
using SectorId = std::uint32_t;

/// One switched-beam sector of the 802.11ad steering antenna model.
struct Sector {
  SectorId id = 1;
  double beam_azimuth = 0.0;    ///< radians, [0, 2pi)
  double beam_tilt = 0.0;       ///< radians from zenith, [0, pi]
  double azimuth_hpbw = 0.0;    ///< radians
  double elevation_hpbw = 0.0;  ///< radians
  double boresight_gain_db = 0.0;
  double floor_db = 0.0;        ///< A_m: maximum attenuation below boresight

  bool operator==(const Sector&) const = default;
};

/// Peak gain for an elevation half-power beamwidth (radians).
double boresight_gain_db(double elevation_hpbw);

/// Makes a sector whose gain parameters are derived from the two beamwidths.
Sector make_sector(SectorId id, double beam_azimuth, double beam_tilt, double azimuth_hpbw,
                   double elevation_hpbw);

/// Directional gain in dB of `sector` toward azimuth `phi` and zenith angle `theta`.
///
/// The azimuth offset from the beam centre is wrapped into (-pi, pi] first, so
/// sectors pointing near phi = 0 stay symmetric. The result always lies in
/// [-12 dB, boresight gain].
double beam_gain(const Sector& sector, double phi, double theta);

/// Receive gain of the UE's single quasi-omni sector.
constexpr double quasi_omni_gain() { return 0.0; }

struct CodebookLayout {
  std::uint32_t sectors = 92;
  std::uint32_t azimuth_steps = 23;
  std::uint32_t elevation_steps = 4;
  double azimuth_hpbw = 0.3490658503988659;   // 20 deg
  double elevation_hpbw = 0.3490658503988659; // 20 deg
  double tilt_min = 1.5707963267948966;       // 90 deg from zenith
  double tilt_max = 2.6179938779914944;       // 150 deg from zenith

  bool operator==(const CodebookLayout&) const = default;
};

class Codebook {
public:
  Codebook() = default;
  explicit Codebook(std::vector<Sector> sectors);

  const std::vector<Sector>& sectors() const { return sectors_; }
  std::uint32_t size() const { return static_cast<std::uint32_t>(sectors_.size()); }
  const Sector& at(SectorId id) const;
  bool contains(SectorId id) const { return id >= 1 && id <= sectors_.size(); }

  /// FNV-1a over every sector parameter; changes whenever any beam changes.
  std::uint64_t hash() const;

  bool operator==(const Codebook&) const = default;

private:
  std::vector<Sector> sectors_;
};

/// Lays `layout.sectors` beams on a regular (elevation-major, then azimuth)
/// grid. Beam centres sit in the middle of each grid cell, so azimuths are
/// (j + 1/2) * 2pi / azimuth_steps and tilts are spread the same way over
/// [tilt_min, tilt_max]. Throws ConfigError when the step product differs
/// from the sector count.
Codebook build_codebook(const CodebookLayout& layout);

} // namespace mmwfp
