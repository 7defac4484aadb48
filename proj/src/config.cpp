#include "mmwfp/config.hpp"

#include "mmwfp/error.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace mmwfp {

CodebookLayout CodebookConfig::layout() const {
  CodebookLayout l;
  l.sectors = sectors;
  l.azimuth_steps = azimuth_steps;
  l.elevation_steps = elevation_steps;
  l.azimuth_hpbw = deg_to_rad(azimuth_hpbw_deg);
  l.elevation_hpbw = deg_to_rad(elevation_hpbw_deg);
  l.tilt_min = deg_to_rad(tilt_min_deg);
  l.tilt_max = deg_to_rad(tilt_max_deg);
  return l;
}

TimingModel TimingConfig::model() const {
  TimingModel m;
  m.sls_per_sector_s = sls_per_sector_us * 1e-6;
  m.mid_per_sector_s = mid_per_sector_us * 1e-6;
  m.brp_per_beam_s = brp_per_beam_us * 1e-6;
  m.rss_probe_s = rss_probe_us * 1e-6;
  m.processing_s = processing_us * 1e-6;
  m.pipelined = pipelined;
  m.ue_sectors = ue_sectors;
  return m;
}

SceneConfig default_scene() {
  SceneConfig s;
  s.materials["concrete"] = {5.0, 10.0};
  s.materials["wood"] = {3.0, 6.0};
  s.wall_material = "concrete";

  // Partition walls, 2 m high office dividers.
  s.surfaces.push_back({0, 10.2, 0.0, 3.5, 0.0, 2.0, "concrete"});
  s.surfaces.push_back({1, 6.6, 3.4, 6.6, 0.0, 2.0, "concrete"});
  s.surfaces.push_back({0, 15.7, 6.6, 8.4, 0.0, 2.0, "concrete"});
  // Desk tops at 0.75 m.
  for (double x : {2.0, 5.0, 12.5, 16.0}) {
    for (double y : {2.0, 8.0}) s.surfaces.push_back({2, 0.75, x, x + 1.6, y - 0.4, y + 0.4, "wood"});
  }

  s.wifi_aps = {{"wifi1", {0.5, 0.5, 2.5}, 20.0},
                {"wifi2", {19.5, 9.5, 2.5}, 20.0},
                {"wifi3", {10.0, 5.0, 2.5}, 20.0},
                {"wifi4", {19.5, 0.5, 2.5}, 20.0}};

  const Vec3 mmw[] = {{3.0, 2.5, 3.0}, {8.0, 2.5, 3.0}, {14.0, 3.5, 3.0}, {18.0, 2.5, 3.0},
                      {3.0, 7.5, 3.0}, {8.0, 7.5, 3.0}, {12.0, 7.5, 3.0}, {17.5, 8.0, 3.0}};
  int i = 1;
  for (const auto& p : mmw) s.mmw_aps.push_back({"mmw" + std::to_string(i++), p, 10.0, 0});
  return s;
}

ScenarioConfig default_config() {
  ScenarioConfig c;
  c.scene = default_scene();
  return c;
}

Scene build_scene(const ScenarioConfig& config, std::optional<std::uint32_t> wifi_aps) {
  Scene scene;
  scene.bounds = config.scene.bounds;
  scene.materials = config.scene.materials;
  add_room_walls(scene, config.scene.wall_material);
  scene.surfaces.insert(scene.surfaces.end(), config.scene.surfaces.begin(), config.scene.surfaces.end());
  const std::size_t wifi = std::min<std::size_t>(wifi_aps.value_or(config.grid.wifi_aps), config.scene.wifi_aps.size());
  scene.wifi_aps.assign(config.scene.wifi_aps.begin(), config.scene.wifi_aps.begin() + wifi);
  scene.mmw_aps = config.scene.mmw_aps;
  for (auto& ap : scene.mmw_aps) ap.codebook = 0;
  scene.codebooks.push_back(build_codebook(config.codebook.layout()));
  return scene;
}

SurveySettings survey_settings(const ScenarioConfig& config) {
  SurveySettings s;
  s.sensitivity_dbm = config.online.sensitivity_dbm;
  s.max_reflection_order = config.max_reflection_order;
  s.ue_wifi_tx_power_dbm = config.online.ue_wifi_tx_power_dbm;
  return s;
}

std::vector<std::string> validation_errors(const ScenarioConfig& c) {
  std::vector<std::string> errs;
  auto need = [&errs](bool ok, const std::string& msg) {
    if (!ok) errs.push_back(msg);
  };

  need(c.version == kConfigVersion, "version must be " + std::to_string(kConfigVersion));

  const auto& cb = c.codebook;
  need(cb.azimuth_steps >= 1 && cb.elevation_steps >= 1, "codebook steps must be >= 1");
  need(static_cast<std::uint64_t>(cb.azimuth_steps) * cb.elevation_steps == cb.sectors,
       "codebook.azimuthSteps * codebook.elevationSteps must equal codebook.sectors");
  need(cb.azimuth_hpbw_deg > 0.0 && cb.azimuth_hpbw_deg < 180.0, "codebook.azimuthHpbwDeg must lie in (0, 180)");
  need(cb.elevation_hpbw_deg > 0.0 && cb.elevation_hpbw_deg < 180.0,
       "codebook.elevationHpbwDeg must lie in (0, 180)");
  need(cb.tilt_min_deg >= 0.0 && cb.tilt_min_deg <= cb.tilt_max_deg && cb.tilt_max_deg <= 180.0,
       "codebook tilt range must satisfy 0 <= tiltMinDeg <= tiltMaxDeg <= 180");

  need(c.max_reflection_order >= 0 && c.max_reflection_order <= 2, "propagation.maxReflectionOrder must be 0, 1 or 2");

  const auto wifi_count = c.scene.wifi_aps.size();
  const double height = c.scene.bounds.hi.z - c.scene.bounds.lo.z;
  const double min_span = std::min(c.scene.bounds.hi.x - c.scene.bounds.lo.x, c.scene.bounds.hi.y - c.scene.bounds.lo.y);
  need(c.grid.lps >= 1, "grid.lps must be >= 1");
  need(c.grid.wifi_aps >= 1 && c.grid.wifi_aps <= wifi_count,
       "grid.wifiAps must lie in [1, number of scene WiFi APs]");
  need(c.grid.ue_height > 0.0 && c.grid.ue_height < height, "grid.ueHeight must lie inside the room height");
  need(c.grid.margin >= 0.0 && 2.0 * c.grid.margin < min_span, "grid.margin must leave floor area");

  need(c.clustering.chi > 0.0, "clustering.chi must be > 0");
  need(c.clustering.ap.damping > 0.0 && c.clustering.ap.damping < 1.0, "clustering.damping must lie in (0, 1)");
  need(c.clustering.ap.max_iterations >= 1, "clustering.maxIterations must be >= 1");
  need(c.clustering.ap.stable_window >= 1, "clustering.stableWindow must be >= 1");

  need(c.online.noise_sigma_db >= 0.0, "online.noiseSigmaDb must be >= 0");
  need(c.online.beams >= 1, "online.beams must be >= 1");
  need(c.online.p_max >= 0.0 && c.online.p_max <= 1.0, "online.pMax must lie in [0, 1]");
  need(c.online.blockage_db >= 0.0, "online.blockageAttenuationDb must be >= 0");
  need(std::isfinite(c.online.sensitivity_dbm), "online.sensitivityDbm must be finite");
  need(std::isfinite(c.online.ue_wifi_tx_power_dbm), "online.ueWifiTxPowerDbm must be finite");

  need(!c.sweep.lps.empty(), "sweep.lps must not be empty");
  need(!c.sweep.wifi_aps.empty(), "sweep.wifiAps must not be empty");
  need(!c.sweep.beams.empty(), "sweep.beams must not be empty");
  for (auto v : c.sweep.lps) need(v >= 1, "sweep.lps values must be >= 1");
  for (auto v : c.sweep.wifi_aps) {
    need(v >= 1 && v <= wifi_count, "sweep.wifiAps value " + std::to_string(v) + " exceeds the scene's WiFi APs");
  }
  for (auto v : c.sweep.beams) need(v >= 1, "sweep.beams values must be >= 1");
  need(c.sweep.trials >= 1, "sweep.trials must be >= 1");

  const auto& t = c.timing;
  need(t.sls_per_sector_us >= 0.0 && t.mid_per_sector_us >= 0.0 && t.brp_per_beam_us >= 0.0 &&
           t.rss_probe_us >= 0.0 && t.processing_us >= 0.0,
       "timing constants must be >= 0");
  need(t.ue_sectors >= 1, "timing.ueSectors must be >= 1");
  need(!c.map_dir.empty(), "output.mapDir must not be empty");

  Scene scene;
  scene.bounds = c.scene.bounds;
  scene.materials = c.scene.materials;
  add_room_walls(scene, c.scene.wall_material);
  scene.surfaces.insert(scene.surfaces.end(), c.scene.surfaces.begin(), c.scene.surfaces.end());
  scene.wifi_aps = c.scene.wifi_aps;
  scene.mmw_aps = c.scene.mmw_aps;
  scene.codebooks.emplace_back();
  for (auto& ap : scene.mmw_aps) ap.codebook = 0;
  for (auto& p : scene.problems()) errs.push_back("scene: " + p);
  std::set<std::string> ids;
  for (const auto& ap : c.scene.wifi_aps) need(ids.insert(ap.id).second, "scene: duplicate AP id '" + ap.id + "'");
  for (const auto& ap : c.scene.mmw_aps) need(ids.insert(ap.id).second, "scene: duplicate AP id '" + ap.id + "'");
  return errs;
}

namespace {

struct Ctx {
  std::vector<std::string> errors;

  void fail(const YAML::Node& node, const std::string& msg) {
    const auto mark = node.Mark();
    if (mark.line >= 0) {
      errors.push_back("line " + std::to_string(mark.line + 1) + ": " + msg);
    } else {
      errors.push_back(msg);
    }
  }
};

std::string join(const std::string& where, const std::string& key) { return where.empty() ? key : where + "." + key; }

bool expect_map(Ctx& ctx, const YAML::Node& node, const std::string& where) {
  if (!node || node.IsNull()) return false;
  if (!node.IsMap()) {
    ctx.fail(node, where + " must be a mapping");
    return false;
  }
  return true;
}

void check_keys(Ctx& ctx, const YAML::Node& node, const std::string& where, std::initializer_list<const char*> allowed) {
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) ctx.fail(kv.first, "unknown key '" + join(where, key) + "'");
  }
}

template <typename T>
void read(Ctx& ctx, const YAML::Node& node, const char* key, const std::string& where, T& out) {
  const YAML::Node v = node[key];
  if (!v) return;
  const std::string name = join(where, key);
  try {
    if constexpr (std::is_same_v<T, bool> || std::is_same_v<T, std::string> || std::is_same_v<T, double>) {
      out = v.as<T>();
    } else {
      const auto raw = v.as<long long>();
      if (raw < static_cast<long long>(std::numeric_limits<T>::min()) ||
          static_cast<unsigned long long>(raw) > static_cast<unsigned long long>(std::numeric_limits<T>::max())) {
        ctx.fail(v, name + " is out of range");
        return;
      }
      out = static_cast<T>(raw);
    }
  } catch (const YAML::Exception&) {
    ctx.fail(v, name + " has the wrong type");
  }
}

template <>
void read<std::uint64_t>(Ctx& ctx, const YAML::Node& node, const char* key, const std::string& where,
                         std::uint64_t& out) {
  const YAML::Node v = node[key];
  if (!v) return;
  try {
    out = v.as<std::uint64_t>();
  } catch (const YAML::Exception&) {
    ctx.fail(v, join(where, key) + " must be a non-negative integer");
  }
}

bool read_vec3(Ctx& ctx, const YAML::Node& v, const std::string& name, Vec3& out) {
  if (!v.IsSequence() || v.size() != 3) {
    ctx.fail(v, name + " must be a list of 3 numbers");
    return false;
  }
  try {
    out = {v[0].as<double>(), v[1].as<double>(), v[2].as<double>()};
    return true;
  } catch (const YAML::Exception&) {
    ctx.fail(v, name + " must be a list of 3 numbers");
    return false;
  }
}

bool read_pair(Ctx& ctx, const YAML::Node& v, const std::string& name, double& a, double& b) {
  if (!v || !v.IsSequence() || v.size() != 2) {
    ctx.fail(v, name + " must be a list of 2 numbers");
    return false;
  }
  try {
    a = v[0].as<double>();
    b = v[1].as<double>();
    return true;
  } catch (const YAML::Exception&) {
    ctx.fail(v, name + " must be a list of 2 numbers");
    return false;
  }
}

void read_list(Ctx& ctx, const YAML::Node& node, const char* key, const std::string& where,
               std::vector<std::uint32_t>& out) {
  const YAML::Node v = node[key];
  if (!v) return;
  const std::string name = join(where, key);
  if (!v.IsSequence()) {
    ctx.fail(v, name + " must be a list");
    return;
  }
  std::vector<std::uint32_t> values;
  for (const auto& item : v) {
    try {
      const auto raw = item.as<long long>();
      if (raw < 0 || raw > std::numeric_limits<std::uint32_t>::max()) {
        ctx.fail(item, name + " entries must be non-negative integers");
        return;
      }
      values.push_back(static_cast<std::uint32_t>(raw));
    } catch (const YAML::Exception&) {
      ctx.fail(item, name + " entries must be integers");
      return;
    }
  }
  out = std::move(values);
}

int axis_from_name(const std::string& s) {
  if (s == "x") return 0;
  if (s == "y") return 1;
  if (s == "z") return 2;
  return -1;
}

void parse_scene(Ctx& ctx, const YAML::Node& node, SceneConfig& scene) {
  const std::string where = "scene";
  check_keys(ctx, node, where, {"bounds", "materials", "wallMaterial", "surfaces", "wifiAps", "mmwAps"});

  if (const auto b = node["bounds"]; b) {
    if (expect_map(ctx, b, "scene.bounds")) {
      check_keys(ctx, b, "scene.bounds", {"min", "max"});
      if (b["min"]) read_vec3(ctx, b["min"], "scene.bounds.min", scene.bounds.lo);
      if (b["max"]) read_vec3(ctx, b["max"], "scene.bounds.max", scene.bounds.hi);
    }
  }
  if (const auto m = node["materials"]; m) {
    if (expect_map(ctx, m, "scene.materials")) {
      scene.materials.clear();
      for (const auto& kv : m) {
        const auto name = kv.first.as<std::string>();
        const std::string w = "scene.materials." + name;
        Material mat;
        if (expect_map(ctx, kv.second, w)) {
          check_keys(ctx, kv.second, w, {"loss5GHzDb", "loss60GHzDb"});
          read(ctx, kv.second, "loss5GHzDb", w, mat.loss_5ghz_db);
          read(ctx, kv.second, "loss60GHzDb", w, mat.loss_60ghz_db);
        }
        scene.materials[name] = mat;
      }
    }
  }
  read(ctx, node, "wallMaterial", where, scene.wall_material);

  if (const auto list = node["surfaces"]; list) {
    scene.surfaces.clear();
    if (!list.IsSequence()) {
      ctx.fail(list, "scene.surfaces must be a list");
    } else {
      for (std::size_t i = 0; i < list.size(); ++i) {
        const auto item = list[i];
        const std::string w = "scene.surfaces[" + std::to_string(i) + "]";
        if (!expect_map(ctx, item, w)) continue;
        check_keys(ctx, item, w, {"normal", "at", "u", "v", "material"});
        Surface s;
        std::string normal = "x";
        read(ctx, item, "normal", w, normal);
        s.normal_axis = axis_from_name(normal);
        if (s.normal_axis < 0) ctx.fail(item["normal"], w + ".normal must be x, y or z");
        read(ctx, item, "at", w, s.offset);
        read_pair(ctx, item["u"], w + ".u", s.u_min, s.u_max);
        read_pair(ctx, item["v"], w + ".v", s.v_min, s.v_max);
        read(ctx, item, "material", w, s.material);
        scene.surfaces.push_back(s);
      }
    }
  }

  auto parse_aps = [&ctx](const YAML::Node& list, const std::string& w0, auto& out, auto make) {
    if (!list) return;
    out.clear();
    if (!list.IsSequence()) {
      ctx.fail(list, w0 + " must be a list");
      return;
    }
    for (std::size_t i = 0; i < list.size(); ++i) {
      const auto item = list[i];
      const std::string w = w0 + "[" + std::to_string(i) + "]";
      if (!expect_map(ctx, item, w)) continue;
      check_keys(ctx, item, w, {"id", "position", "txPowerDbm"});
      auto ap = make(i);
      read(ctx, item, "id", w, ap.id);
      if (item["position"]) {
        read_vec3(ctx, item["position"], w + ".position", ap.position);
      } else {
        ctx.fail(item, w + ".position is required");
      }
      read(ctx, item, "txPowerDbm", w, ap.tx_power_dbm);
      out.push_back(ap);
    }
  };
  parse_aps(node["wifiAps"], "scene.wifiAps", scene.wifi_aps,
            [](std::size_t i) { return WifiAp{"wifi" + std::to_string(i + 1), {}, 20.0}; });
  parse_aps(node["mmwAps"], "scene.mmwAps", scene.mmw_aps,
            [](std::size_t i) { return MmwAp{"mmw" + std::to_string(i + 1), {}, 10.0, 0}; });
}

} // namespace

ScenarioConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ParseError("config line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }

  ScenarioConfig c = default_config();
  Ctx ctx;
  if (root && !root.IsNull()) {
    if (!root.IsMap()) throw ParseError("config must be a YAML mapping at the top level");
    check_keys(ctx, root, "",
               {"version", "scene", "codebook", "propagation", "grid", "clustering", "online", "sweep", "timing",
                "output"});
    read(ctx, root, "version", "", c.version);

    if (const auto n = root["scene"]; expect_map(ctx, n, "scene")) parse_scene(ctx, n, c.scene);

    if (const auto n = root["codebook"]; expect_map(ctx, n, "codebook")) {
      const std::string w = "codebook";
      check_keys(ctx, n, w,
                 {"sectors", "azimuthSteps", "elevationSteps", "azimuthHpbwDeg", "elevationHpbwDeg", "tiltMinDeg",
                  "tiltMaxDeg"});
      read(ctx, n, "sectors", w, c.codebook.sectors);
      read(ctx, n, "azimuthSteps", w, c.codebook.azimuth_steps);
      read(ctx, n, "elevationSteps", w, c.codebook.elevation_steps);
      read(ctx, n, "azimuthHpbwDeg", w, c.codebook.azimuth_hpbw_deg);
      read(ctx, n, "elevationHpbwDeg", w, c.codebook.elevation_hpbw_deg);
      read(ctx, n, "tiltMinDeg", w, c.codebook.tilt_min_deg);
      read(ctx, n, "tiltMaxDeg", w, c.codebook.tilt_max_deg);
    }
    if (const auto n = root["propagation"]; expect_map(ctx, n, "propagation")) {
      check_keys(ctx, n, "propagation", {"maxReflectionOrder"});
      read(ctx, n, "maxReflectionOrder", "propagation", c.max_reflection_order);
    }
    if (const auto n = root["grid"]; expect_map(ctx, n, "grid")) {
      check_keys(ctx, n, "grid", {"lps", "wifiAps", "ueHeight", "margin"});
      read(ctx, n, "lps", "grid", c.grid.lps);
      read(ctx, n, "wifiAps", "grid", c.grid.wifi_aps);
      read(ctx, n, "ueHeight", "grid", c.grid.ue_height);
      read(ctx, n, "margin", "grid", c.grid.margin);
    }
    if (const auto n = root["clustering"]; expect_map(ctx, n, "clustering")) {
      check_keys(ctx, n, "clustering", {"chi", "damping", "maxIterations", "stableWindow"});
      read(ctx, n, "chi", "clustering", c.clustering.chi);
      read(ctx, n, "damping", "clustering", c.clustering.ap.damping);
      read(ctx, n, "maxIterations", "clustering", c.clustering.ap.max_iterations);
      read(ctx, n, "stableWindow", "clustering", c.clustering.ap.stable_window);
    }
    if (const auto n = root["online"]; expect_map(ctx, n, "online")) {
      const std::string w = "online";
      check_keys(ctx, n, w,
                 {"noiseSigmaDb", "beams", "pMax", "blockageAttenuationDb", "sensitivityDbm", "ueWifiTxPowerDbm"});
      read(ctx, n, "noiseSigmaDb", w, c.online.noise_sigma_db);
      read(ctx, n, "beams", w, c.online.beams);
      read(ctx, n, "pMax", w, c.online.p_max);
      read(ctx, n, "blockageAttenuationDb", w, c.online.blockage_db);
      read(ctx, n, "sensitivityDbm", w, c.online.sensitivity_dbm);
      read(ctx, n, "ueWifiTxPowerDbm", w, c.online.ue_wifi_tx_power_dbm);
    }
    if (const auto n = root["sweep"]; expect_map(ctx, n, "sweep")) {
      const std::string w = "sweep";
      check_keys(ctx, n, w, {"lps", "wifiAps", "beams", "appendFullCodebook", "trials", "seed"});
      read_list(ctx, n, "lps", w, c.sweep.lps);
      read_list(ctx, n, "wifiAps", w, c.sweep.wifi_aps);
      read_list(ctx, n, "beams", w, c.sweep.beams);
      read(ctx, n, "appendFullCodebook", w, c.sweep.append_full_codebook);
      read(ctx, n, "trials", w, c.sweep.trials);
      read(ctx, n, "seed", w, c.sweep.seed);
    }
    if (const auto n = root["timing"]; expect_map(ctx, n, "timing")) {
      const std::string w = "timing";
      check_keys(ctx, n, w,
                 {"slsPerSectorUs", "midPerSectorUs", "brpPerBeamUs", "rssProbeUs", "processingUs", "pipelined",
                  "ueSectors"});
      read(ctx, n, "slsPerSectorUs", w, c.timing.sls_per_sector_us);
      read(ctx, n, "midPerSectorUs", w, c.timing.mid_per_sector_us);
      read(ctx, n, "brpPerBeamUs", w, c.timing.brp_per_beam_us);
      read(ctx, n, "rssProbeUs", w, c.timing.rss_probe_us);
      read(ctx, n, "processingUs", w, c.timing.processing_us);
      read(ctx, n, "pipelined", w, c.timing.pipelined);
      read(ctx, n, "ueSectors", w, c.timing.ue_sectors);
    }
    if (const auto n = root["output"]; expect_map(ctx, n, "output")) {
      check_keys(ctx, n, "output", {"mapDir"});
      read(ctx, n, "mapDir", "output", c.map_dir);
    }
  }

  auto errors = std::move(ctx.errors);
  if (errors.empty()) errors = validation_errors(c);
  if (!errors.empty()) {
    std::ostringstream msg;
    msg << "invalid config (" << errors.size() << (errors.size() == 1 ? " problem" : " problems") << "):";
    for (const auto& e : errors) msg << "\n  - " << e;
    throw ConfigError(msg.str());
  }
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

namespace {

// Shortest text that reads back as the same double.
std::string num(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

void emit_vec3(YAML::Emitter& out, const Vec3& v) {
  out << YAML::Flow << YAML::BeginSeq << num(v.x) << num(v.y) << num(v.z) << YAML::EndSeq;
}

void emit_pair(YAML::Emitter& out, double a, double b) {
  out << YAML::Flow << YAML::BeginSeq << num(a) << num(b) << YAML::EndSeq;
}

void emit_list(YAML::Emitter& out, const std::vector<std::uint32_t>& v) {
  out << YAML::Flow << YAML::BeginSeq;
  for (auto x : v) out << x;
  out << YAML::EndSeq;
}

} // namespace

std::string serialize_config(const ScenarioConfig& c) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "version" << YAML::Value << c.version;

  out << YAML::Key << "scene" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "bounds" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "min" << YAML::Value;
  emit_vec3(out, c.scene.bounds.lo);
  out << YAML::Key << "max" << YAML::Value;
  emit_vec3(out, c.scene.bounds.hi);
  out << YAML::EndMap;
  out << YAML::Key << "materials" << YAML::Value << YAML::BeginMap;
  for (const auto& [name, m] : c.scene.materials) {
    out << YAML::Key << name << YAML::Value << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "loss5GHzDb" << YAML::Value << num(m.loss_5ghz_db);
    out << YAML::Key << "loss60GHzDb" << YAML::Value << num(m.loss_60ghz_db);
    out << YAML::EndMap;
  }
  out << YAML::EndMap;
  out << YAML::Key << "wallMaterial" << YAML::Value << c.scene.wall_material;
  out << YAML::Key << "surfaces" << YAML::Value << YAML::BeginSeq;
  static constexpr const char* kAxisName[] = {"x", "y", "z"};
  for (const auto& s : c.scene.surfaces) {
    out << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "normal" << YAML::Value << kAxisName[s.normal_axis];
    out << YAML::Key << "at" << YAML::Value << num(s.offset);
    out << YAML::Key << "u" << YAML::Value;
    emit_pair(out, s.u_min, s.u_max);
    out << YAML::Key << "v" << YAML::Value;
    emit_pair(out, s.v_min, s.v_max);
    out << YAML::Key << "material" << YAML::Value << s.material;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  auto emit_ap = [&out](const std::string& id, const Vec3& pos, double power) {
    out << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "id" << YAML::Value << id;
    out << YAML::Key << "position" << YAML::Value;
    emit_vec3(out, pos);
    out << YAML::Key << "txPowerDbm" << YAML::Value << num(power);
    out << YAML::EndMap;
  };
  out << YAML::Key << "wifiAps" << YAML::Value << YAML::BeginSeq;
  for (const auto& ap : c.scene.wifi_aps) emit_ap(ap.id, ap.position, ap.tx_power_dbm);
  out << YAML::EndSeq;
  out << YAML::Key << "mmwAps" << YAML::Value << YAML::BeginSeq;
  for (const auto& ap : c.scene.mmw_aps) emit_ap(ap.id, ap.position, ap.tx_power_dbm);
  out << YAML::EndSeq;
  out << YAML::EndMap;

  out << YAML::Key << "codebook" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "sectors" << YAML::Value << c.codebook.sectors;
  out << YAML::Key << "azimuthSteps" << YAML::Value << c.codebook.azimuth_steps;
  out << YAML::Key << "elevationSteps" << YAML::Value << c.codebook.elevation_steps;
  out << YAML::Key << "azimuthHpbwDeg" << YAML::Value << num(c.codebook.azimuth_hpbw_deg);
  out << YAML::Key << "elevationHpbwDeg" << YAML::Value << num(c.codebook.elevation_hpbw_deg);
  out << YAML::Key << "tiltMinDeg" << YAML::Value << num(c.codebook.tilt_min_deg);
  out << YAML::Key << "tiltMaxDeg" << YAML::Value << num(c.codebook.tilt_max_deg);
  out << YAML::EndMap;

  out << YAML::Key << "propagation" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "maxReflectionOrder" << YAML::Value << c.max_reflection_order;
  out << YAML::EndMap;

  out << YAML::Key << "grid" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "lps" << YAML::Value << c.grid.lps;
  out << YAML::Key << "wifiAps" << YAML::Value << c.grid.wifi_aps;
  out << YAML::Key << "ueHeight" << YAML::Value << num(c.grid.ue_height);
  out << YAML::Key << "margin" << YAML::Value << num(c.grid.margin);
  out << YAML::EndMap;

  out << YAML::Key << "clustering" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "chi" << YAML::Value << num(c.clustering.chi);
  out << YAML::Key << "damping" << YAML::Value << num(c.clustering.ap.damping);
  out << YAML::Key << "maxIterations" << YAML::Value << c.clustering.ap.max_iterations;
  out << YAML::Key << "stableWindow" << YAML::Value << c.clustering.ap.stable_window;
  out << YAML::EndMap;

  out << YAML::Key << "online" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "noiseSigmaDb" << YAML::Value << num(c.online.noise_sigma_db);
  out << YAML::Key << "beams" << YAML::Value << c.online.beams;
  out << YAML::Key << "pMax" << YAML::Value << num(c.online.p_max);
  out << YAML::Key << "blockageAttenuationDb" << YAML::Value << num(c.online.blockage_db);
  out << YAML::Key << "sensitivityDbm" << YAML::Value << num(c.online.sensitivity_dbm);
  out << YAML::Key << "ueWifiTxPowerDbm" << YAML::Value << num(c.online.ue_wifi_tx_power_dbm);
  out << YAML::EndMap;

  out << YAML::Key << "sweep" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "lps" << YAML::Value;
  emit_list(out, c.sweep.lps);
  out << YAML::Key << "wifiAps" << YAML::Value;
  emit_list(out, c.sweep.wifi_aps);
  out << YAML::Key << "beams" << YAML::Value;
  emit_list(out, c.sweep.beams);
  out << YAML::Key << "appendFullCodebook" << YAML::Value << c.sweep.append_full_codebook;
  out << YAML::Key << "trials" << YAML::Value << c.sweep.trials;
  out << YAML::Key << "seed" << YAML::Value << c.sweep.seed;
  out << YAML::EndMap;

  out << YAML::Key << "timing" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "slsPerSectorUs" << YAML::Value << num(c.timing.sls_per_sector_us);
  out << YAML::Key << "midPerSectorUs" << YAML::Value << num(c.timing.mid_per_sector_us);
  out << YAML::Key << "brpPerBeamUs" << YAML::Value << num(c.timing.brp_per_beam_us);
  out << YAML::Key << "rssProbeUs" << YAML::Value << num(c.timing.rss_probe_us);
  out << YAML::Key << "processingUs" << YAML::Value << num(c.timing.processing_us);
  out << YAML::Key << "pipelined" << YAML::Value << c.timing.pipelined;
  out << YAML::Key << "ueSectors" << YAML::Value << c.timing.ue_sectors;
  out << YAML::EndMap;

  out << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "mapDir" << YAML::Value << c.map_dir;
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

} // namespace mmwfp
