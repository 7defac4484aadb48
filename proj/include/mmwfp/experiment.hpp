#pragma once

#include "mmwfp/config.hpp"
#include "mmwfp/radio_map.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace mmwfp {

enum class Axis { Lps, WifiAps, Beams };

std::string to_string(Axis axis);
/// Accepts "lps", "wifiAps" and "beams".
Axis parse_axis(const std::string& name);

struct ApSummary {
  std::string id;
  std::size_t groups = 0;
  std::size_t clusters = 0;
  std::size_t null_lps = 0;
};

struct OfflineResult {
  StoredRadioMaps maps;
  LearningGrid grid;
  std::vector<ApSummary> per_ap;
  std::vector<std::string> warnings;
};

/// Builds the LP grid, both radio maps and the exemplar set for `lps` learning
/// points and the first `wifi_aps` WiFi APs. Does not touch the disk.
OfflineResult run_offline(const ScenarioConfig& config, std::uint32_t lps, std::uint32_t wifi_aps);
OfflineResult run_offline(const ScenarioConfig& config);

/// `<mapDir>/radio_map_L<lps>_N<wifi>.bin`
std::filesystem::path radio_map_path(const ScenarioConfig& config, std::uint32_t lps, std::uint32_t wifi_aps);

/// (lps, wifiAps) combinations the sweep along `axis` needs.
std::vector<std::pair<std::uint32_t, std::uint32_t>> required_maps(const ScenarioConfig& config,
                                                                   std::optional<Axis> axis);

/// Supplies radio maps for an (lps, wifiAps) combination.
using MapProvider = std::function<StoredRadioMaps(std::uint32_t lps, std::uint32_t wifi_aps)>;

/// Builds maps in memory on demand, caching each combination.
MapProvider in_memory_maps(const ScenarioConfig& config);
/// Loads maps written by the offline phase; a missing file raises an Error
/// telling the user to run the offline phase first.
MapProvider stored_maps(const ScenarioConfig& config);

/// One mm-w AP in one trial.
struct TrialRecord {
  std::uint32_t trial = 0;
  std::uint32_t ap = 0;
  bool covered = false;            ///< exhaustive search reaches the sensitivity
  double exhaustive_dbm = kNoSignalDbm;
  double proposed_dbm = kNoSignalDbm;
  double nn_dbm = kNoSignalDbm;    ///< no signal when the N.N. LP is null
  SectorId exhaustive_sector = 0;
  SectorId proposed_sector = 0;
  SectorId nn_sector = 0;

  bool proposed_valid() const { return covered && proposed_dbm != kNoSignalDbm; }
  bool nn_valid() const { return covered && nn_sector != 0; }
};

struct ApBreakdown {
  std::string id;
  double avg_rpr_db = 0.0;
  double nn_rpr_db = 0.0;
  std::size_t samples = 0;
};

struct SweepPoint {
  Axis axis = Axis::Beams;
  std::uint32_t value = 0;
  std::uint32_t lps = 0;
  std::uint32_t wifi_aps = 0;
  std::uint32_t beams = 0;
  std::uint32_t trials = 0;
  std::uint64_t seed = 0;
  double avg_rpr_db = 0.0;
  double nn_rpr_db = 0.0;
  double outage_rate = 0.0;     ///< proposed below sensitivity, over covered AP-trials
  double nn_outage_rate = 0.0;
  double coverage_rate = 0.0;   ///< covered AP-trials over all AP-trials
  std::vector<ApBreakdown> per_ap;
  std::vector<TrialRecord> records;
};

struct SweepOptions {
  std::optional<std::uint32_t> trials;
  std::optional<std::uint64_t> seed;
  unsigned parallelism = 1;
  bool keep_records = true;
};

/// Axis values actually swept (the beams axis may append the codebook size).
std::vector<std::uint32_t> axis_values(const ScenarioConfig& config, Axis axis);

/// Monte Carlo sweep. Every trial draws a UE position, a blockage realization
/// and RSS noise from seed = derive(master, axis, value, trial), then runs the
/// proposed scheme, the N.N. baseline and exhaustive search for every mm-w AP
/// under that shared realization. Results do not depend on `parallelism`.
std::vector<SweepPoint> run_sweep(const ScenarioConfig& config, Axis axis, const MapProvider& maps,
                                  const SweepOptions& options = {});

enum class ResultFormat { Csv, Json };

ResultFormat parse_format(const std::string& name);

/// CSV columns: axis,value,avg_rpr_db,nn_rpr_db,outage_rate,trials,seed.
std::string format_results(const std::vector<SweepPoint>& points, ResultFormat format);
void emit_results(const std::vector<SweepPoint>& points, ResultFormat format, const std::filesystem::path& path);

struct TimingRow {
  std::string scheme;
  std::uint32_t sectors = 0;
  std::uint32_t beams = 0;
  std::uint32_t aps = 0;
  SetupTime time;
  double reduction = 0.0; ///< fraction saved relative to MIDC with the same counts
};

/// MIDC against the proposed scheme for the configured sector and beam counts,
/// for one AP and for `aps` APs (default: every mm-w AP in the scene).
std::vector<TimingRow> report_timing(const ScenarioConfig& config, std::optional<std::uint32_t> aps = std::nullopt);
std::string format_timing(const std::vector<TimingRow>& rows);

} // namespace mmwfp
