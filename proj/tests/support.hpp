#pragma once

#include "mmwfp/antenna.hpp"
#include "mmwfp/environment.hpp"

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

namespace mmwfp::test {

// Large room with no surfaces at all: every link is a single LOS path.
inline Scene open_scene(const Codebook& codebook = build_codebook({})) {
  Scene s;
  s.bounds = {{-200.0, -200.0, -200.0}, {200.0, 200.0, 200.0}};
  s.materials["concrete"] = {5.0, 10.0};
  s.codebooks.push_back(codebook);
  return s;
}

// Point at `range` metres from `from` along azimuth `phi` and zenith angle `theta`.
inline Vec3 along(const Vec3& from, double phi, double theta, double range) {
  return from + Vec3{std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)} * range;
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("mmwfp_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

} // namespace mmwfp::test
