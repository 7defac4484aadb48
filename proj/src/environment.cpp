#include "mmwfp/environment.hpp"

#include "mmwfp/error.hpp"
#include "mmwfp/random.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <cmath>
#include <sstream>

namespace mmwfp {

double carrier_hz(Band band) { return band == Band::Wifi5GHz ? 5.0e9 : 60.0e9; }

double free_space_loss_db(double length_m, Band band) {
  if (!(length_m > 0.0)) throw InvalidInput("path length must be > 0");
  return 20.0 * std::log10(4.0 * kPi * length_m * carrier_hz(band) / kSpeedOfLight);
}

namespace {

constexpr double kGeomEps = 1e-9;

// In-plane axes of a surface with the given normal.
constexpr std::array<std::array<int, 2>, 3> kPlaneAxes{{{1, 2}, {0, 2}, {0, 1}}};

bool in_rectangle(const Surface& s, const Vec3& p) {
  const auto [ua, va] = kPlaneAxes[s.normal_axis];
  return p[ua] >= s.u_min - kGeomEps && p[ua] <= s.u_max + kGeomEps && p[va] >= s.v_min - kGeomEps &&
         p[va] <= s.v_max + kGeomEps;
}

double side_of(const Surface& s, const Vec3& p) { return p[s.normal_axis] - s.offset; }

Vec3 mirror(const Surface& s, Vec3 p) {
  p[s.normal_axis] = 2.0 * s.offset - p[s.normal_axis];
  return p;
}

// Point where segment a->b crosses the surface plane, if it does so strictly
// between its endpoints.
std::optional<Vec3> plane_crossing(const Surface& s, const Vec3& a, const Vec3& b) {
  const int n = s.normal_axis;
  const double denom = b[n] - a[n];
  if (std::abs(denom) < kGeomEps) return std::nullopt;
  const double t = (s.offset - a[n]) / denom;
  if (t <= kGeomEps || t >= 1.0 - kGeomEps) return std::nullopt;
  Vec3 p = a + (b - a) * t;
  p[n] = s.offset;
  return p;
}

double reflection_loss_db(const Scene& scene, const Surface& s, Band band) {
  return scene.materials.at(s.material).loss_db(band);
}

PropagationPath make_path(const Scene& scene, const Vec3& tx, const Vec3& rx, Band band,
                          std::vector<Vec3> bounces, std::vector<std::size_t> surfaces) {
  PropagationPath path;
  path.band = band;
  path.order = static_cast<int>(bounces.size());
  path.kind = bounces.empty() ? PathKind::Los : PathKind::Reflected;

  Vec3 prev = tx;
  double length = 0.0;
  for (const auto& b : bounces) {
    length += distance(prev, b);
    prev = b;
  }
  length += distance(prev, rx);
  path.length = length;

  const Vec3 first = bounces.empty() ? rx : bounces.front();
  const Vec3 dir = first - tx;
  const double dlen = dir.norm();
  path.azimuth = wrap_two_pi(std::atan2(dir.y, dir.x));
  path.elevation = std::acos(std::clamp(dir.z / dlen, -1.0, 1.0));

  double loss = free_space_loss_db(length, band);
  for (std::size_t idx : surfaces) loss += reflection_loss_db(scene, scene.surfaces[idx], band);
  path.path_loss_db = loss;
  path.bounces = std::move(bounces);
  path.surfaces = std::move(surfaces);
  return path;
}

bool endpoint_on_plane(const Surface& s, const Vec3& p) { return std::abs(side_of(s, p)) < kGeomEps; }

} // namespace

bool segment_occluded(const Scene& scene, const Vec3& a, const Vec3& b, std::span<const std::size_t> ignore) {
  for (std::size_t i = 0; i < scene.surfaces.size(); ++i) {
    if (std::find(ignore.begin(), ignore.end(), i) != ignore.end()) continue;
    const Surface& s = scene.surfaces[i];
    if (auto p = plane_crossing(s, a, b); p && in_rectangle(s, *p)) return true;
  }
  return false;
}

std::vector<PropagationPath> trace_paths(const Scene& scene, const Vec3& tx, const Vec3& rx, Band band,
                                         int max_reflection_order) {
  if (max_reflection_order < 0 || max_reflection_order > 2) {
    throw InvalidInput("reflection order must be 0, 1 or 2");
  }
  if (distance(tx, rx) < kGeomEps) throw InvalidInput("transmitter and receiver coincide");
  if (!scene.bounds.contains(tx) || !scene.bounds.contains(rx)) {
    throw InvalidInput("transmitter or receiver outside scene bounds");
  }

  std::vector<PropagationPath> paths;
  if (!segment_occluded(scene, tx, rx)) paths.push_back(make_path(scene, tx, rx, band, {}, {}));
  if (max_reflection_order == 0) return paths;

  const std::size_t count = scene.surfaces.size();
  for (std::size_t i = 0; i < count; ++i) {
    const Surface& s = scene.surfaces[i];
    if (endpoint_on_plane(s, tx) || endpoint_on_plane(s, rx)) continue;
    if (side_of(s, tx) * side_of(s, rx) <= 0.0) continue;
    const Vec3 image = mirror(s, tx);
    const auto hit = plane_crossing(s, image, rx);
    if (!hit || !in_rectangle(s, *hit)) continue;
    const std::array<std::size_t, 1> ignore{i};
    if (segment_occluded(scene, tx, *hit, ignore) || segment_occluded(scene, *hit, rx, ignore)) continue;
    paths.push_back(make_path(scene, tx, rx, band, {*hit}, {i}));
  }
  if (max_reflection_order == 1) return paths;

  for (std::size_t i = 0; i < count; ++i) {
    const Surface& first = scene.surfaces[i];
    if (endpoint_on_plane(first, tx)) continue;
    const Vec3 image1 = mirror(first, tx);
    for (std::size_t j = 0; j < count; ++j) {
      if (j == i) continue;
      const Surface& second = scene.surfaces[j];
      if (first.normal_axis == second.normal_axis && std::abs(first.offset - second.offset) < kGeomEps) continue;
      if (endpoint_on_plane(second, rx)) continue;
      const Vec3 image2 = mirror(second, image1);
      const auto hit2 = plane_crossing(second, image2, rx);
      if (!hit2 || !in_rectangle(second, *hit2)) continue;
      const auto hit1 = plane_crossing(first, image1, *hit2);
      if (!hit1 || !in_rectangle(first, *hit1)) continue;
      // Both bounces must be genuine specular reflections off the facing side.
      if (side_of(first, tx) * side_of(first, *hit2) <= 0.0) continue;
      if (side_of(second, *hit1) * side_of(second, rx) <= 0.0) continue;
      const std::array<std::size_t, 1> ig1{i};
      const std::array<std::size_t, 2> ig12{i, j};
      const std::array<std::size_t, 1> ig2{j};
      if (segment_occluded(scene, tx, *hit1, ig1) || segment_occluded(scene, *hit1, *hit2, ig12) ||
          segment_occluded(scene, *hit2, rx, ig2)) {
        continue;
      }
      paths.push_back(make_path(scene, tx, rx, band, {*hit1, *hit2}, {i, j}));
    }
  }
  return paths;
}

std::vector<std::string> Scene::problems() const {
  std::vector<std::string> out;
  for (int a = 0; a < 3; ++a) {
    if (!(bounds.lo[a] < bounds.hi[a])) out.push_back("scene bounds are empty along axis " + std::to_string(a));
  }
  if (wifi_aps.empty()) out.push_back("scene needs at least one WiFi AP");
  if (mmw_aps.empty()) out.push_back("scene needs at least one mm-w AP");
  for (const auto& ap : wifi_aps) {
    if (!bounds.contains(ap.position)) out.push_back("WiFi AP '" + ap.id + "' lies outside the scene bounds");
  }
  for (const auto& ap : mmw_aps) {
    if (!bounds.contains(ap.position)) out.push_back("mm-w AP '" + ap.id + "' lies outside the scene bounds");
    if (ap.codebook >= codebooks.size()) out.push_back("mm-w AP '" + ap.id + "' references a missing codebook");
  }
  for (const auto& [name, m] : materials) {
    if (m.loss_5ghz_db < 0.0 || m.loss_60ghz_db < 0.0) {
      out.push_back("material '" + name + "' has a negative reflection loss");
    }
  }
  for (std::size_t i = 0; i < surfaces.size(); ++i) {
    const Surface& s = surfaces[i];
    if (s.normal_axis < 0 || s.normal_axis > 2) {
      out.push_back("surface " + std::to_string(i) + " has an invalid normal axis");
      continue;
    }
    if (!materials.contains(s.material)) {
      out.push_back("surface " + std::to_string(i) + " uses unknown material '" + s.material + "'");
    }
    if (s.u_min > s.u_max || s.v_min > s.v_max) {
      out.push_back("surface " + std::to_string(i) + " has an inverted extent");
    }
  }
  return out;
}

void Scene::validate() const {
  const auto issues = problems();
  if (issues.empty()) return;
  std::ostringstream msg;
  msg << "invalid scene:";
  for (const auto& issue : issues) msg << "\n  - " << issue;
  throw ConfigError(msg.str());
}

void add_room_walls(Scene& scene, const std::string& material) {
  const Box& b = scene.bounds;
  scene.surfaces.push_back({0, b.lo.x, b.lo.y, b.hi.y, b.lo.z, b.hi.z, material});
  scene.surfaces.push_back({0, b.hi.x, b.lo.y, b.hi.y, b.lo.z, b.hi.z, material});
  scene.surfaces.push_back({1, b.lo.y, b.lo.x, b.hi.x, b.lo.z, b.hi.z, material});
  scene.surfaces.push_back({1, b.hi.y, b.lo.x, b.hi.x, b.lo.z, b.hi.z, material});
  scene.surfaces.push_back({2, b.lo.z, b.lo.x, b.hi.x, b.lo.y, b.hi.y, material});
  scene.surfaces.push_back({2, b.hi.z, b.lo.x, b.hi.x, b.lo.y, b.hi.y, material});
}

void add_pillar(Scene& scene, double x_min, double x_max, double y_min, double y_max, const std::string& material) {
  const double z0 = scene.bounds.lo.z;
  const double z1 = scene.bounds.hi.z;
  scene.surfaces.push_back({0, x_min, y_min, y_max, z0, z1, material});
  scene.surfaces.push_back({0, x_max, y_min, y_max, z0, z1, material});
  scene.surfaces.push_back({1, y_min, x_min, x_max, z0, z1, material});
  scene.surfaces.push_back({1, y_max, x_min, x_max, z0, z1, material});
}

BlockageState BlockageState::clear(std::size_t aps, std::size_t positions) {
  BlockageState state;
  state.ap_count = aps;
  state.position_count = positions;
  state.blocked.assign(aps * positions, 0);
  return state;
}

bool BlockageState::is_blocked(std::size_t ap, std::size_t pos) const {
  if (ap >= ap_count || pos >= position_count) throw InvalidInput("blockage index out of range");
  return blocked[ap * position_count + pos] != 0;
}

BlockageState sample_blockage(const Scene& scene, std::span<const Vec3> positions, std::uint64_t seed,
                              double p_max, double attenuation_db) {
  if (!(p_max >= 0.0 && p_max <= 1.0)) throw InvalidInput("blockage p_max must lie in [0, 1]");
  if (!(attenuation_db >= 0.0)) throw InvalidInput("blockage attenuation must be >= 0 dB");

  Rng rng(seed);
  BlockageState state = BlockageState::clear(scene.mmw_aps.size(), positions.size());
  state.attenuation_db = attenuation_db;
  state.block_probability = p_max * rng.uniform();
  for (auto& flag : state.blocked) flag = rng.uniform() < state.block_probability ? 1 : 0;
  return state;
}

namespace {

template <typename GainFn>
double power_sum(std::span<const PropagationPath> paths, double tx_power_dbm, GainFn&& gain, double rx_gain_db,
                 double los_penalty_db, std::vector<PathContribution>* contributions) {
  if (paths.empty()) return kNoSignalDbm;
  double linear = 0.0;
  for (const auto& path : paths) {
    const double g = gain(path.azimuth, path.elevation);
    const double penalty = path.kind == PathKind::Los ? los_penalty_db : 0.0;
    const double p = tx_power_dbm + g + rx_gain_db - path.path_loss_db - penalty;
    linear += std::pow(10.0, p / 10.0);
    if (contributions) contributions->push_back({g, penalty, p});
  }
  return 10.0 * std::log10(linear);
}

} // namespace

ChannelGain received_power(std::span<const PropagationPath> paths, double tx_power_dbm, const TxGainFn& tx_gain,
                           double rx_gain_db, double los_penalty_db) {
  if (!std::isfinite(rx_gain_db)) throw InvalidInput("receive gain must be finite");
  ChannelGain out;
  out.contributions.reserve(paths.size());
  out.received_power_dbm = power_sum(paths, tx_power_dbm, tx_gain, rx_gain_db, los_penalty_db, &out.contributions);
  out.total_gain_db = out.has_signal() ? out.received_power_dbm - tx_power_dbm : kNoSignalDbm;
  return out;
}

ChannelGain received_power(std::span<const PropagationPath> paths, double tx_power_dbm, const TxGainFn& tx_gain,
                           double rx_gain_db, const BlockageState& blockage, std::size_t ap, std::size_t pos) {
  return received_power(paths, tx_power_dbm, tx_gain, rx_gain_db, blockage.los_penalty_db(ap, pos));
}

double sector_power_dbm(std::span<const PropagationPath> paths, double tx_power_dbm, const Sector& sector,
                        double los_penalty_db) {
  return power_sum(
      paths, tx_power_dbm, [&sector](double phi, double theta) { return beam_gain(sector, phi, theta); },
      quasi_omni_gain(), los_penalty_db, nullptr);
}

double omni_path_gain_db(std::span<const PropagationPath> paths) {
  return power_sum(paths, 0.0, [](double, double) { return 0.0; }, 0.0, 0.0, nullptr);
}

} // namespace mmwfp
