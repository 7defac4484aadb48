#pragma once

#include "mmwfp/antenna.hpp"
#include "mmwfp/clustering.hpp"
#include "mmwfp/environment.hpp"
#include "mmwfp/fingerprint.hpp"
#include "mmwfp/protocol.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mmwfp {

inline constexpr int kConfigVersion = 1;

struct SceneConfig {
  Box bounds{{0.0, 0.0, 0.0}, {20.0, 10.0, 3.5}};
  std::map<std::string, Material> materials;
  std::string wall_material = "concrete";
  std::vector<Surface> surfaces; ///< interior surfaces; room walls are added from bounds
  std::vector<WifiAp> wifi_aps;  ///< placement order used by the WiFi-AP sweep
  std::vector<MmwAp> mmw_aps;

  bool operator==(const SceneConfig&) const = default;
};

/// Codebook grid in degrees as written in the config file.
struct CodebookConfig {
  std::uint32_t sectors = 92;
  std::uint32_t azimuth_steps = 23;
  std::uint32_t elevation_steps = 4;
  double azimuth_hpbw_deg = 20.0;
  double elevation_hpbw_deg = 20.0;
  double tilt_min_deg = 90.0;
  double tilt_max_deg = 150.0;

  CodebookLayout layout() const;
  bool operator==(const CodebookConfig&) const = default;
};

struct GridConfig {
  std::uint32_t lps = 90;
  std::uint32_t wifi_aps = 4; ///< WiFi APs in use when that axis is not swept
  double ue_height = 1.5;
  double margin = 0.5;

  bool operator==(const GridConfig&) const = default;
};

struct ClusteringConfig {
  double chi = 0.3;
  ApParams ap;

  bool operator==(const ClusteringConfig&) const = default;
};

struct OnlineConfig {
  double noise_sigma_db = 1.0;
  std::uint32_t beams = 5;
  double p_max = 0.4;
  double blockage_db = 25.0;
  double sensitivity_dbm = -78.0;
  double ue_wifi_tx_power_dbm = 15.0;

  bool operator==(const OnlineConfig&) const = default;
};

struct SweepConfig {
  std::vector<std::uint32_t> lps{18, 36, 60, 90};
  std::vector<std::uint32_t> wifi_aps{1, 2, 3, 4};
  std::vector<std::uint32_t> beams{1, 3, 5, 10};
  bool append_full_codebook = true; ///< beams axis also trains every sector
  std::uint32_t trials = 500;
  std::uint64_t seed = 1;

  bool operator==(const SweepConfig&) const = default;
};

/// Timing constants in microseconds as written in the config file.
struct TimingConfig {
  double sls_per_sector_us = 40.0;
  double mid_per_sector_us = 13.0;
  double brp_per_beam_us = 15.0;
  double rss_probe_us = 100.0;
  double processing_us = 50.0;
  bool pipelined = true;
  std::uint32_t ue_sectors = 1;

  TimingModel model() const;
  bool operator==(const TimingConfig&) const = default;
};

struct ScenarioConfig {
  int version = kConfigVersion;
  SceneConfig scene;
  CodebookConfig codebook;
  int max_reflection_order = 1;
  GridConfig grid;
  ClusteringConfig clustering;
  OnlineConfig online;
  SweepConfig sweep;
  TimingConfig timing;
  std::string map_dir = "radio_maps";

  bool operator==(const ScenarioConfig&) const = default;
};

/// Indoor office used when the config does not describe a scene: a 20 x 10 x
/// 3.5 m concrete room with three 2 m partition walls, wooden desks, four WiFi
/// APs in corner/opposite-corner/centre/corner order and eight ceiling mm-w APs.
SceneConfig default_scene();
ScenarioConfig default_config();

/// Every semantic problem, not just the first.
std::vector<std::string> validation_errors(const ScenarioConfig& config);

/// Parses YAML text, fills defaults, rejects unknown keys and validates.
/// Syntax problems raise ParseError with a line number; semantic problems
/// raise ConfigError listing all of them.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);

/// YAML text that parse_config() maps back to an equal config.
std::string serialize_config(const ScenarioConfig& config);

/// Scene for the config using the first `wifi_aps` WiFi APs of the placement list.
Scene build_scene(const ScenarioConfig& config, std::optional<std::uint32_t> wifi_aps = std::nullopt);

SurveySettings survey_settings(const ScenarioConfig& config);

} // namespace mmwfp
