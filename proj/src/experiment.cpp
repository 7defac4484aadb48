#include "mmwfp/experiment.hpp"

#include "mmwfp/error.hpp"
#include "mmwfp/random.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace mmwfp {

std::string to_string(Axis axis) {
  switch (axis) {
    case Axis::Lps: return "lps";
    case Axis::WifiAps: return "wifiAps";
    case Axis::Beams: return "beams";
  }
  return "unknown";
}

Axis parse_axis(const std::string& name) {
  if (name == "lps") return Axis::Lps;
  if (name == "wifiAps") return Axis::WifiAps;
  if (name == "beams") return Axis::Beams;
  throw InvalidInput("unknown sweep axis '" + name + "' (expected lps, wifiAps or beams)");
}

OfflineResult run_offline(const ScenarioConfig& config, std::uint32_t lps, std::uint32_t wifi_aps) {
  const Scene scene = build_scene(config, wifi_aps);
  scene.validate();

  OfflineResult out;
  const auto layout = grid_layout_for(scene.bounds, lps, config.grid.ue_height, config.grid.margin);
  out.grid = make_learning_grid(scene.bounds, layout);
  auto dbs = build_databases(scene, out.grid, survey_settings(config));

  std::vector<SectorGroup> all_groups;
  for (std::size_t m = 0; m < scene.mmw_aps.size(); ++m) {
    auto groups = group_by_sector(dbs.wifi, dbs.best, m);
    ApSummary summary;
    summary.id = scene.mmw_aps[m].id;
    summary.groups = groups.size();
    for (std::size_t l = 0; l < dbs.best.lps(); ++l) summary.null_lps += dbs.best.at(l, m) ? 0 : 1;
    out.per_ap.push_back(summary);
    std::move(groups.begin(), groups.end(), std::back_inserter(all_groups));
  }
  out.maps.exemplars = build_exemplar_set(all_groups, config.clustering.chi, config.clustering.ap);
  for (const auto& [key, entry] : out.maps.exemplars.entries) out.per_ap[key.first].clusters += entry.cluster_count();

  out.maps.wifi = std::move(dbs.wifi);
  out.maps.best = std::move(dbs.best);
  out.maps.codebook_hash = scene_codebook_hash(scene);

  if (lps < 2) out.warnings.push_back("only one learning point: clustering is degenerate");
  for (const auto& s : out.per_ap) {
    if (s.groups == 0) out.warnings.push_back("mm-w AP '" + s.id + "' covers no learning point");
  }
  return out;
}

OfflineResult run_offline(const ScenarioConfig& config) {
  return run_offline(config, config.grid.lps, config.grid.wifi_aps);
}

std::filesystem::path radio_map_path(const ScenarioConfig& config, std::uint32_t lps, std::uint32_t wifi_aps) {
  return std::filesystem::path(config.map_dir) /
         ("radio_map_L" + std::to_string(lps) + "_N" + std::to_string(wifi_aps) + ".bin");
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> required_maps(const ScenarioConfig& config,
                                                                   std::optional<Axis> axis) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  if (axis == Axis::Lps) {
    for (auto v : config.sweep.lps) out.emplace_back(v, config.grid.wifi_aps);
  } else if (axis == Axis::WifiAps) {
    for (auto v : config.sweep.wifi_aps) out.emplace_back(config.grid.lps, v);
  } else {
    out.emplace_back(config.grid.lps, config.grid.wifi_aps);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

MapProvider in_memory_maps(const ScenarioConfig& config) {
  auto cache = std::make_shared<std::map<std::pair<std::uint32_t, std::uint32_t>, StoredRadioMaps>>();
  auto mutex = std::make_shared<std::mutex>();
  return [config, cache, mutex](std::uint32_t lps, std::uint32_t wifi) {
    std::lock_guard lock(*mutex);
    auto it = cache->find({lps, wifi});
    if (it == cache->end()) it = cache->emplace(std::pair{lps, wifi}, run_offline(config, lps, wifi).maps).first;
    return it->second;
  };
}

MapProvider stored_maps(const ScenarioConfig& config) {
  return [config](std::uint32_t lps, std::uint32_t wifi) {
    const auto path = radio_map_path(config, lps, wifi);
    if (!std::filesystem::exists(path)) {
      throw Error("radio map " + path.string() + " not found; run the offline phase first (mmwfp offline --config "
                  "<file> [--axis lps|wifiAps])");
    }
    const Scene scene = build_scene(config, wifi);
    RadioMapExpectation expect;
    expect.codebook_hash = scene_codebook_hash(scene);
    expect.lps = lps;
    expect.wifi_aps = wifi;
    expect.mmw_aps = scene.mmw_aps.size();
    return load_radio_maps(path, expect);
  };
}

std::vector<std::uint32_t> axis_values(const ScenarioConfig& config, Axis axis) {
  switch (axis) {
    case Axis::Lps: return config.sweep.lps;
    case Axis::WifiAps: return config.sweep.wifi_aps;
    case Axis::Beams: {
      auto v = config.sweep.beams;
      if (config.sweep.append_full_codebook && std::find(v.begin(), v.end(), config.codebook.sectors) == v.end()) {
        v.push_back(config.codebook.sectors);
      }
      return v;
    }
  }
  return {};
}

namespace {

struct PointSetup {
  std::uint32_t lps;
  std::uint32_t wifi;
  std::uint32_t beams;
};

PointSetup setup_for(const ScenarioConfig& c, Axis axis, std::uint32_t value) {
  switch (axis) {
    case Axis::Lps: return {value, c.grid.wifi_aps, c.online.beams};
    case Axis::WifiAps: return {c.grid.lps, value, c.online.beams};
    case Axis::Beams: return {c.grid.lps, c.grid.wifi_aps, value};
  }
  return {};
}

// Uniform over the UE plane, redrawn until every WiFi AP is reachable.
Vec3 draw_ue_position(const ScenarioConfig& config, const Scene& scene, std::uint64_t seed, int order) {
  constexpr int kMaxDraws = 10000;
  Rng rng(seed);
  const Box& b = scene.bounds;
  const double margin = config.grid.margin;
  for (int i = 0; i < kMaxDraws; ++i) {
    const Vec3 ue{rng.uniform(b.lo.x + margin, b.hi.x - margin), rng.uniform(b.lo.y + margin, b.hi.y - margin),
                  b.lo.z + config.grid.ue_height};
    if (wifi_covered(scene, ue, order)) return ue;
  }
  throw CoverageError("no UE position covered by every WiFi AP after " + std::to_string(kMaxDraws) + " draws");
}

std::vector<TrialRecord> run_trial(const ScenarioConfig& config, const Scene& scene, const StoredRadioMaps& maps,
                                   const SurveySettings& settings, std::uint32_t beams, std::uint64_t trial_seed,
                                   std::uint32_t trial) {
  const Vec3 ue = draw_ue_position(config, scene, derive_seed(trial_seed, {0}), settings.max_reflection_order);
  const BlockageState blockage = sample_blockage(scene, std::span<const Vec3>(&ue, 1), derive_seed(trial_seed, {1}),
                                                 config.online.p_max, config.online.blockage_db);
  const OnlineRss rss = measure_online_rss(scene, ue, config.online.noise_sigma_db, derive_seed(trial_seed, {2}),
                                           settings);

  std::vector<TrialRecord> out;
  out.reserve(scene.mmw_aps.size());
  for (std::size_t m = 0; m < scene.mmw_aps.size(); ++m) {
    TrialRecord rec;
    rec.trial = trial;
    rec.ap = static_cast<std::uint32_t>(m);
    const Link link = make_link(scene, m, ue, blockage, 0, settings.max_reflection_order);
    const BeamDecision exhaustive = exhaustive_search(link);
    rec.exhaustive_dbm = exhaustive.best_power_dbm;
    rec.exhaustive_sector = exhaustive.best_sector;
    rec.covered = !exhaustive.outage(settings.sensitivity_dbm);
    if (rec.covered) {
      const std::uint32_t codebook_size = link.codebook->size();
      std::vector<SectorId> candidates;
      if (beams >= codebook_size) {
        candidates = training_candidates(BeamEstimate{}, beams, codebook_size);
      } else if (maps.exemplars.sector_count(m) > 0) {
        candidates = training_candidates(estimate_best_beams(rss, maps.exemplars, m, beams), beams, codebook_size);
      }
      if (!candidates.empty()) {
        const BeamDecision proposed = beam_combining(link, candidates);
        rec.proposed_dbm = proposed.best_power_dbm;
        rec.proposed_sector = proposed.best_sector;
      }
      if (const auto nn = nearest_neighbor_baseline(rss.values, maps.wifi, maps.best, m)) {
        rec.nn_sector = *nn;
        rec.nn_dbm = link.power_dbm(*nn);
      }
    }
    out.push_back(rec);
  }
  return out;
}

double mean_or_nan(double sum, std::size_t n) { return n == 0 ? std::nan("") : sum / static_cast<double>(n); }

} // namespace

std::vector<SweepPoint> run_sweep(const ScenarioConfig& config, Axis axis, const MapProvider& maps,
                                  const SweepOptions& options) {
  if (const auto errs = validation_errors(config); !errs.empty()) throw ConfigError("invalid config: " + errs.front());
  const std::uint32_t trials = options.trials.value_or(config.sweep.trials);
  const std::uint64_t master = options.seed.value_or(config.sweep.seed);
  if (trials < 1) throw InvalidInput("trial count must be >= 1");
  const SurveySettings settings = survey_settings(config);

  std::vector<SweepPoint> points;
  for (std::uint32_t value : axis_values(config, axis)) {
    const PointSetup setup = setup_for(config, axis, value);
    const Scene scene = build_scene(config, setup.wifi);
    const StoredRadioMaps stored = maps(setup.lps, setup.wifi);
    if (stored.wifi.aps() != scene.wifi_aps.size() || stored.best.aps() != scene.mmw_aps.size()) {
      throw StaleMapError("radio map AP counts do not match the scenario");
    }
    if (stored.codebook_hash != scene_codebook_hash(scene)) {
      throw StaleMapError("radio map was built for a different codebook; rerun the offline phase");
    }

    SweepPoint point;
    point.axis = axis;
    point.value = value;
    point.lps = setup.lps;
    point.wifi_aps = setup.wifi;
    point.beams = setup.beams;
    point.trials = trials;
    point.seed = master;

    std::vector<std::vector<TrialRecord>> per_trial(trials);
    std::atomic<std::uint32_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&]() {
      for (std::uint32_t t = next++; t < trials; t = next++) {
        try {
          const std::uint64_t seed = derive_seed(master, {static_cast<std::uint64_t>(axis), value, t});
          per_trial[t] = run_trial(config, scene, stored, settings, setup.beams, seed, t);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = trials;
        }
      }
    };
    const unsigned threads = std::max(1u, std::min<unsigned>(options.parallelism, trials));
    if (threads == 1) {
      worker();
    } else {
      std::vector<std::jthread> pool;
      for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    const std::size_t ap_count = scene.mmw_aps.size();
    std::vector<double> ap_sum(ap_count, 0.0), ap_nn_sum(ap_count, 0.0);
    std::vector<std::size_t> ap_n(ap_count, 0), ap_nn_n(ap_count, 0);
    double sum = 0.0, nn_sum = 0.0;
    std::size_t n = 0, nn_n = 0, covered = 0, total = 0, outages = 0, nn_outages = 0;
    for (const auto& recs : per_trial) {
      for (const auto& r : recs) {
        ++total;
        if (!r.covered) continue;
        ++covered;
        if (!r.proposed_valid() || r.proposed_dbm < config.online.sensitivity_dbm) ++outages;
        if (!r.nn_valid() || r.nn_dbm < config.online.sensitivity_dbm) ++nn_outages;
        if (r.proposed_valid()) {
          const double v = r.proposed_dbm - r.exhaustive_dbm;
          sum += v;
          ++n;
          ap_sum[r.ap] += v;
          ++ap_n[r.ap];
        }
        if (r.nn_valid()) {
          const double v = r.nn_dbm - r.exhaustive_dbm;
          nn_sum += v;
          ++nn_n;
          ap_nn_sum[r.ap] += v;
          ++ap_nn_n[r.ap];
        }
      }
    }
    point.avg_rpr_db = mean_or_nan(sum, n);
    point.nn_rpr_db = mean_or_nan(nn_sum, nn_n);
    point.outage_rate = covered == 0 ? 0.0 : static_cast<double>(outages) / static_cast<double>(covered);
    point.nn_outage_rate = covered == 0 ? 0.0 : static_cast<double>(nn_outages) / static_cast<double>(covered);
    point.coverage_rate = total == 0 ? 0.0 : static_cast<double>(covered) / static_cast<double>(total);
    for (std::size_t m = 0; m < ap_count; ++m) {
      point.per_ap.push_back({scene.mmw_aps[m].id, mean_or_nan(ap_sum[m], ap_n[m]),
                              mean_or_nan(ap_nn_sum[m], ap_nn_n[m]), ap_n[m]});
    }
    if (options.keep_records) {
      for (auto& recs : per_trial) point.records.insert(point.records.end(), recs.begin(), recs.end());
    }
    points.push_back(std::move(point));
  }
  return points;
}

ResultFormat parse_format(const std::string& name) {
  if (name == "csv") return ResultFormat::Csv;
  if (name == "json") return ResultFormat::Json;
  throw InvalidInput("unknown result format '" + name + "' (expected csv or json)");
}

namespace {

std::string full(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

} // namespace

std::string format_results(const std::vector<SweepPoint>& points, ResultFormat format) {
  if (format == ResultFormat::Csv) {
    std::ostringstream out;
    out << "axis,value,avg_rpr_db,nn_rpr_db,outage_rate,trials,seed\n";
    for (const auto& p : points) {
      out << to_string(p.axis) << ',' << p.value << ',' << full(p.avg_rpr_db) << ',' << full(p.nn_rpr_db) << ','
          << full(p.outage_rate) << ',' << p.trials << ',' << p.seed << '\n';
    }
    return out.str();
  }
  auto num = [](double v) { return std::isnan(v) ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(v); };
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& p : points) {
    nlohmann::ordered_json row;
    row["axis"] = to_string(p.axis);
    row["value"] = p.value;
    row["avg_rpr_db"] = num(p.avg_rpr_db);
    row["nn_rpr_db"] = num(p.nn_rpr_db);
    row["outage_rate"] = num(p.outage_rate);
    row["trials"] = p.trials;
    row["seed"] = p.seed;
    row["nn_outage_rate"] = num(p.nn_outage_rate);
    row["coverage_rate"] = num(p.coverage_rate);
    row["lps"] = p.lps;
    row["wifi_aps"] = p.wifi_aps;
    row["beams"] = p.beams;
    nlohmann::ordered_json per_ap = nlohmann::ordered_json::array();
    for (const auto& a : p.per_ap) {
      per_ap.push_back({{"ap", a.id}, {"avg_rpr_db", num(a.avg_rpr_db)}, {"nn_rpr_db", num(a.nn_rpr_db)},
                        {"samples", a.samples}});
    }
    row["per_ap"] = std::move(per_ap);
    rows.push_back(std::move(row));
  }
  return rows.dump(2) + "\n";
}

void emit_results(const std::vector<SweepPoint>& points, ResultFormat format, const std::filesystem::path& path) {
  const std::string text = format_results(points, format);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open results file for writing: " + path.string());
  out << text;
  if (!out) throw Error("failed writing results file: " + path.string());
}

std::vector<TimingRow> report_timing(const ScenarioConfig& config, std::optional<std::uint32_t> aps) {
  const TimingModel model = config.timing.model();
  const std::uint32_t sectors = config.codebook.sectors;
  const std::uint32_t beams = config.online.beams;
  const std::uint32_t many = aps.value_or(static_cast<std::uint32_t>(config.scene.mmw_aps.size()));
  std::vector<std::uint32_t> counts{1};
  if (many != 1) counts.push_back(many);

  std::vector<TimingRow> rows;
  for (std::uint32_t n : counts) {
    const SetupTime midc = setup_time(model, Scheme::Midc, sectors, beams, n);
    for (Scheme scheme : {Scheme::Midc, Scheme::Proposed, Scheme::ProposedWithMid}) {
      TimingRow row;
      row.scheme = to_string(scheme);
      row.sectors = sectors;
      row.beams = beams;
      row.aps = n;
      row.time = setup_time(model, scheme, sectors, beams, n);
      row.reduction = 1.0 - row.time.total_s / midc.total_s;
      rows.push_back(row);
    }
  }
  return rows;
}

std::string format_timing(const std::vector<TimingRow>& rows) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-14s %7s %5s %4s %10s %9s %10s\n", "scheme", "sectors", "beams", "aps",
                "total_ms", "sls_share", "reduction");
  out << line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof(line), "%-14s %7u %5u %4u %10.4f %8.1f%% %9.1f%%\n", r.scheme.c_str(), r.sectors,
                  r.beams, r.aps, r.time.total_s * 1e3, 100.0 * r.time.sls_share(), 100.0 * r.reduction);
    out << line;
  }
  return out.str();
}

} // namespace mmwfp
