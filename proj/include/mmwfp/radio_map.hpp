#pragma once

#include "mmwfp/clustering.hpp"
#include "mmwfp/environment.hpp"
#include "mmwfp/fingerprint.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>

namespace mmwfp {

inline constexpr std::uint32_t kRadioMapVersion = 1;

/// Hash of every mm-w AP codebook, in AP order.
std::uint64_t scene_codebook_hash(const Scene& scene);

struct StoredRadioMaps {
  WifiRssDb wifi;
  BestSectorDb best;
  ExemplarSet exemplars;
  std::uint64_t codebook_hash = 0;

  bool operator==(const StoredRadioMaps&) const = default;
};

/// What the caller expects to find; any mismatch raises StaleMapError.
struct RadioMapExpectation {
  std::optional<std::uint64_t> codebook_hash;
  std::optional<std::size_t> lps;
  std::optional<std::size_t> wifi_aps;
  std::optional<std::size_t> mmw_aps;
};

/// Binary layout, little-endian:
///   "MMWFPRM\0" | u32 version | u32 L | u32 N | u32 M | u64 codebook hash
///   N x str wifi ids | M x str mm-w ids          (str = u32 length + bytes)
///   L*N f64 Psi (row-major) | L*M u32 Phi (row-major, 0 = null)
///   u32 entries | per entry: u32 ap, u32 sector, u32 K, K x u32 member LP,
///   u32 C, C x u32 exemplar member, C*N f64 vectors, K x u32 assignment
void save_radio_maps(const StoredRadioMaps& maps, const std::filesystem::path& path);

/// Throws ParseError for truncated or malformed files and StaleMapError for a
/// version, dimension or codebook mismatch. Never returns a partial result.
StoredRadioMaps load_radio_maps(const std::filesystem::path& path, const RadioMapExpectation& expect = {});

} // namespace mmwfp
