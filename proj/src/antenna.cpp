#include "mmwfp/antenna.hpp"

#include "mmwfp/error.hpp"
#include "mmwfp/geometry.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace mmwfp {

double boresight_gain_db(double elevation_hpbw) {
  return 20.0 * std::log10(1.6162 / std::sin(elevation_hpbw / 2.0));
}

Sector make_sector(SectorId id, double beam_azimuth, double beam_tilt, double azimuth_hpbw,
                   double elevation_hpbw) {
  if (!(azimuth_hpbw > 0.0 && azimuth_hpbw < kPi) || !(elevation_hpbw > 0.0 && elevation_hpbw < kPi)) {
    throw ConfigError("sector beamwidths must lie in (0, pi)");
  }
  Sector s;
  s.id = id;
  s.beam_azimuth = wrap_two_pi(beam_azimuth);
  s.beam_tilt = beam_tilt;
  s.azimuth_hpbw = azimuth_hpbw;
  s.elevation_hpbw = elevation_hpbw;
  s.boresight_gain_db = boresight_gain_db(elevation_hpbw);
  s.floor_db = 12.0 + s.boresight_gain_db;
  return s;
}

double beam_gain(const Sector& sector, double phi, double theta) {
  const double dphi = wrap_pi(phi - sector.beam_azimuth) / sector.azimuth_hpbw;
  const double dtheta = (theta - sector.beam_tilt) / sector.elevation_hpbw;
  const double horizontal = -std::min(12.0 * dphi * dphi, sector.floor_db);
  const double vertical = -std::min(12.0 * dtheta * dtheta, sector.floor_db);
  return sector.boresight_gain_db - std::min(-(horizontal + vertical), sector.floor_db);
}

Codebook::Codebook(std::vector<Sector> sectors) : sectors_(std::move(sectors)) {
  if (sectors_.empty()) throw ConfigError("codebook must hold at least one sector");
  for (std::size_t i = 0; i < sectors_.size(); ++i) {
    if (sectors_[i].id != i + 1) {
      throw ConfigError("codebook sector ids must be 1..D without gaps (position " +
                        std::to_string(i + 1) + " has id " + std::to_string(sectors_[i].id) + ")");
    }
  }
}

const Sector& Codebook::at(SectorId id) const {
  if (!contains(id)) throw InvalidInput("sector id " + std::to_string(id) + " not in codebook");
  return sectors_[id - 1];
}

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

void fnv_mix(std::uint64_t& h, std::uint64_t word) {
  for (int i = 0; i < 8; ++i) {
    h ^= (word >> (8 * i)) & 0xffU;
    h *= kFnvPrime;
  }
}

} // namespace

std::uint64_t Codebook::hash() const {
  std::uint64_t h = kFnvOffset;
  fnv_mix(h, sectors_.size());
  for (const auto& s : sectors_) {
    fnv_mix(h, s.id);
    for (double v : {s.beam_azimuth, s.beam_tilt, s.azimuth_hpbw, s.elevation_hpbw,
                     s.boresight_gain_db, s.floor_db}) {
      fnv_mix(h, std::bit_cast<std::uint64_t>(v));
    }
  }
  return h;
}

Codebook build_codebook(const CodebookLayout& layout) {
  if (layout.azimuth_steps < 1 || layout.elevation_steps < 1) {
    throw ConfigError("codebook grid steps must be >= 1");
  }
  if (static_cast<std::uint64_t>(layout.azimuth_steps) * layout.elevation_steps != layout.sectors) {
    throw ConfigError("codebook grid " + std::to_string(layout.azimuth_steps) + " x " +
                      std::to_string(layout.elevation_steps) + " does not multiply to " +
                      std::to_string(layout.sectors) + " sectors");
  }
  if (!(layout.tilt_min <= layout.tilt_max) || layout.tilt_min < 0.0 || layout.tilt_max > kPi) {
    throw ConfigError("codebook tilt range must satisfy 0 <= min <= max <= pi");
  }

  std::vector<Sector> sectors;
  sectors.reserve(layout.sectors);
  const double az_step = kTwoPi / layout.azimuth_steps;
  const double tilt_step = (layout.tilt_max - layout.tilt_min) / layout.elevation_steps;
  SectorId id = 1;
  for (std::uint32_t row = 0; row < layout.elevation_steps; ++row) {
    const double tilt = layout.tilt_min + (row + 0.5) * tilt_step;
    for (std::uint32_t col = 0; col < layout.azimuth_steps; ++col) {
      sectors.push_back(make_sector(id++, (col + 0.5) * az_step, tilt, layout.azimuth_hpbw,
                                    layout.elevation_hpbw));
    }
  }
  return Codebook(std::move(sectors));
}

} // namespace mmwfp
