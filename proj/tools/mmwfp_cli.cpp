#include "mmwfp/config.hpp"
#include "mmwfp/error.hpp"
#include "mmwfp/experiment.hpp"
#include "mmwfp/radio_map.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace {

mmwfp::ScenarioConfig load(const std::string& path) {
  return path.empty() ? mmwfp::default_config() : mmwfp::load_config(path);
}

void print_points(const std::vector<mmwfp::SweepPoint>& points) {
  std::printf("%-8s %6s %12s %12s %10s %10s\n", "axis", "value", "avg_rpr_db", "nn_rpr_db", "outage", "coverage");
  for (const auto& p : points) {
    std::printf("%-8s %6u %12.4f %12.4f %10.4f %10.4f\n", mmwfp::to_string(p.axis).c_str(), p.value, p.avg_rpr_db,
                p.nn_rpr_db, p.outage_rate, p.coverage_rate);
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"WiFi-fingerprint mm-wave beam estimation simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string axis_name;
  std::string out_path;
  std::string format_name = "csv";
  std::optional<std::uint64_t> seed;
  std::optional<std::uint32_t> trials;
  std::optional<std::uint32_t> aps;
  unsigned parallelism = 1;

  auto* offline = app.add_subcommand("offline", "Build and store radio maps and exemplars");
  offline->add_option("--config", config_path, "Scenario file (YAML)");
  offline->add_option("--axis", axis_name, "Also build the maps a sweep along this axis needs")
      ->check(CLI::IsMember({"lps", "wifiAps", "beams"}));
  offline->add_option("--out", out_path, "Directory for radio maps (overrides output.mapDir)");

  auto* sweep = app.add_subcommand("sweep", "Monte Carlo RPR sweep over one axis");
  sweep->add_option("--config", config_path, "Scenario file (YAML)");
  sweep->add_option("--axis", axis_name, "Swept axis")->required()->check(CLI::IsMember({"lps", "wifiAps", "beams"}));
  sweep->add_option("--seed", seed, "Master seed (overrides sweep.seed)");
  sweep->add_option("--trials", trials, "Trials per axis value (overrides sweep.trials)")->check(CLI::PositiveNumber);
  sweep->add_option("--out", out_path, "Results file");
  sweep->add_option("--format", format_name, "Results format")->check(CLI::IsMember({"csv", "json"}));
  sweep->add_option("--parallelism", parallelism, "Worker threads")->check(CLI::PositiveNumber);

  auto* timing = app.add_subcommand("timing", "Beamforming setup time: MIDC against the proposed scheme");
  timing->add_option("--config", config_path, "Scenario file (YAML)");
  timing->add_option("--aps", aps, "Number of mm-w APs to report")->check(CLI::PositiveNumber);

  auto* validate = app.add_subcommand("validate", "Check a scenario file");
  validate->add_option("--config", config_path, "Scenario file (YAML)")->required();

  auto* defaults = app.add_subcommand("defaults", "Print the default scenario as YAML");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*defaults) {
      std::cout << mmwfp::serialize_config(mmwfp::default_config());
      return 0;
    }

    auto config = load(config_path);

    if (*validate) {
      std::cout << "config OK: " << config_path << "\n";
      return 0;
    }

    if (*timing) {
      std::cout << mmwfp::format_timing(mmwfp::report_timing(config, aps));
      return 0;
    }

    if (*offline) {
      if (!out_path.empty()) config.map_dir = out_path;
      std::optional<mmwfp::Axis> axis;
      if (!axis_name.empty()) axis = mmwfp::parse_axis(axis_name);
      std::filesystem::create_directories(config.map_dir);
      for (const auto& [lps, wifi] : mmwfp::required_maps(config, axis)) {
        const auto result = mmwfp::run_offline(config, lps, wifi);
        const auto path = mmwfp::radio_map_path(config, lps, wifi);
        mmwfp::save_radio_maps(result.maps, path);
        std::cout << path.string() << ": " << result.maps.wifi.lps() << " LPs x " << result.maps.wifi.aps()
                  << " WiFi APs, " << result.maps.best.aps() << " mm-w APs\n";
        for (const auto& ap : result.per_ap) {
          std::cout << "  " << ap.id << ": " << ap.groups << " sector groups, " << ap.clusters << " exemplars, "
                    << ap.null_lps << " null LPs\n";
        }
        for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
      }
      return 0;
    }

    if (*sweep) {
      const auto axis = mmwfp::parse_axis(axis_name);
      mmwfp::SweepOptions options;
      options.seed = seed;
      options.trials = trials;
      options.parallelism = parallelism;
      options.keep_records = false;
      const auto points = mmwfp::run_sweep(config, axis, mmwfp::stored_maps(config), options);
      print_points(points);
      if (!out_path.empty()) mmwfp::emit_results(points, mmwfp::parse_format(format_name), out_path);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
