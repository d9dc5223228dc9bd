// SPDX-License-Identifier: Apache-2.0
//
// ris-emf: EMF-aware MU-MIMO beamforming simulator for RIS-aided cells
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
#include "risemf/scene.hpp"

#include <cmath>
#include <random>
#include <string>

namespace risemf {

std::string to_string(Scheme scheme) {
  switch (scheme) {
  case Scheme::reference: return "reference";
  case Scheme::reduced: return "reduced";
  case Scheme::enhanced: return "enhanced";
  }
  return "unknown";
}

Scheme scheme_from_string(const std::string &name) {
  if (name == "reference") return Scheme::reference;
  if (name == "reduced") return Scheme::reduced;
  if (name == "enhanced") return Scheme::enhanced;
  throw ConfigError("unknown scheme '" + name + "'");
}

void PhysicalParams::validate() const {
  auto require = [](bool ok, const char *what) {
    if (!ok) throw ConfigError(std::string("invalid physical parameters: ") + what);
  };
  require(std::isfinite(carrier_frequency_hz) && carrier_frequency_hz > 0, "carrier frequency must be > 0");
  require(std::isfinite(bandwidth_hz) && bandwidth_hz > 0, "bandwidth must be > 0");
  require(std::isfinite(noise_power_w) && noise_power_w > 0, "noise power must be > 0");
  require(std::isfinite(max_power_w) && max_power_w > 0, "max power must be > 0");
  require(std::isfinite(emf_threshold_w) && emf_threshold_w > 0, "EMF threshold must be > 0");
  require(std::isfinite(safety_radius_m) && safety_radius_m > 0, "safety radius must be > 0");
  require(n_circle_samples >= 3, "need at least 3 circle samples");
}

std::vector<Vec3> linear_array(const Vec3 &center, int count, double spacing) {
  std::vector<Vec3> elements;
  elements.reserve(static_cast<std::size_t>(count));
  const double mid = 0.5 * (count - 1);
  for (int i = 0; i < count; ++i)
    elements.push_back(center + Vec3((i - mid) * spacing, 0.0, 0.0));
  return elements;
}

Scene build_scene(const SceneConfig &config, const PhysicalParams &params) {
  params.validate();
  if (config.bs_elements <= 0 || config.ue_elements <= 0 || config.num_ues <= 0 ||
      config.ris_elements <= 0)
    throw ConfigError("array sizes and UE count must be positive");
  if (config.num_scatterers < 0 || config.num_ris < 0)
    throw ConfigError("scatterer and RIS counts must be non-negative");
  if (!(config.placement_min_m > params.safety_radius_m))
    throw ConfigError("placement annulus intersects the safety circle (placement_min_m must exceed R)");
  if (!(config.placement_max_m > config.placement_min_m))
    throw ConfigError("placement_max_m must exceed placement_min_m");

  const double lambda = params.wavelength();
  const double spacing = 0.5 * lambda;

  Scene scene;
  scene.wavelength = lambda;
  scene.seed = config.seed;
  scene.bs_center = config.bs_center;
  scene.bs_elements = linear_array(config.bs_center, config.bs_elements, spacing);

  // Uniform by area in the annulus, uniform in angle.
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> r2(config.placement_min_m * config.placement_min_m,
                                            config.placement_max_m * config.placement_max_m);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
  auto place = [&] {
    const double r = std::sqrt(r2(rng));
    const double a = angle(rng);
    return Vec3(config.bs_center.x() + r * std::cos(a), config.bs_center.y() + r * std::sin(a),
                config.bs_center.z());
  };

  for (int l = 0; l < config.num_ues; ++l) {
    scene.ue_centers.push_back(place());
    scene.ue_elements.push_back(linear_array(scene.ue_centers.back(), config.ue_elements, spacing));
  }
  for (int z = 0; z < config.num_ris; ++z) {
    scene.ris_centers.push_back(place());
    scene.ris_elements.push_back(linear_array(scene.ris_centers.back(), config.ris_elements, spacing));
  }
  for (int s = 0; s < config.num_scatterers; ++s) scene.scatterers.push_back(place());
  return scene;
}

CirclePointSet sample_circle(const Vec3 &center, double radius, int count) {
  if (count < 3) throw ConfigError("circle sampling needs at least 3 points");
  if (!(radius > 0)) throw ConfigError("circle radius must be positive");
  CirclePointSet set;
  set.center = center;
  set.radius = radius;
  set.points.reserve(static_cast<std::size_t>(count));
  for (int q = 0; q < count; ++q) {
    const double a = 2.0 * kPi * q / count;
    set.points.push_back(center + Vec3(radius * std::cos(a), radius * std::sin(a), 0.0));
  }
  return set;
}

CirclePointSet sample_safety_circle(const Scene &scene, const PhysicalParams &params) {
  return sample_circle(scene.bs_center, params.safety_radius_m, params.n_circle_samples);
}

double dbm_to_watts(double dbm) {
  if (!std::isfinite(dbm)) throw ConfigError("dBm value must be finite");
  return std::pow(10.0, (dbm - 30.0) / 10.0);
}

double watts_to_dbm(double watts) {
  if (!std::isfinite(watts) || watts <= 0) throw ConfigError("watts must be finite and positive for dBm conversion");
  return 10.0 * std::log10(watts) + 30.0;
}

} // namespace risemf
