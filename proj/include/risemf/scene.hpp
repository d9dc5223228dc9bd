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
#pragma once

#include <cstdint>
#include <vector>

#include "risemf/types.hpp"

namespace risemf {

/// Physical constants of one experiment. All quantities are SI; the EMF
/// threshold is stored in watts (configuration files give it in dBm).
struct PhysicalParams {
  double carrier_frequency_hz = 3.5e9;
  double bandwidth_hz = 100e6;
  double noise_power_w = 3.981071705534973e-13; // -94 dBm
  double max_power_w = 200.0;
  double emf_threshold_w = 3.1622776601683794e-4; // -5 dBm
  double safety_radius_m = 50.0;
  int n_circle_samples = 360;

  double wavelength() const { return kSpeedOfLight / carrier_frequency_hz; }

  /// Throws ConfigError when any invariant is violated.
  void validate() const;
};

struct SceneConfig {
  int bs_elements = 64;  // M
  int ue_elements = 4;   // N per UE
  int num_ues = 5;       // L
  int ris_elements = 4;  // K per RIS
  int num_scatterers = 3;
  int num_ris = 3;
  double placement_min_m = 60.0;
  double placement_max_m = 200.0;
  Vec3 bs_center = Vec3::Zero();
  std::uint64_t seed = 1;
};

/// Immutable deployment geometry. Every array is linear along the x-axis
/// with half-wavelength spacing; everything lives in the z = 0 plane.
struct Scene {
  double wavelength = 0.0;
  Vec3 bs_center = Vec3::Zero();
  std::vector<Vec3> bs_elements;
  std::vector<Vec3> ue_centers;
  std::vector<std::vector<Vec3>> ue_elements;
  std::vector<Vec3> ris_centers;
  std::vector<std::vector<Vec3>> ris_elements;
  std::vector<Vec3> scatterers;
  std::uint64_t seed = 0;

  int num_bs_elements() const { return static_cast<int>(bs_elements.size()); }
  int num_ues() const { return static_cast<int>(ue_centers.size()); }
  int num_ue_elements() const {
    return ue_elements.empty() ? 0 : static_cast<int>(ue_elements.front().size());
  }
  int num_ris() const { return static_cast<int>(ris_centers.size()); }
  int num_ris_elements() const {
    return ris_elements.empty() ? 0 : static_cast<int>(ris_elements.front().size());
  }
  int num_scatterers() const { return static_cast<int>(scatterers.size()); }
};

/// Equispaced points on the safety circle.
struct CirclePointSet {
  Vec3 center = Vec3::Zero();
  double radius = 0.0;
  std::vector<Vec3> points;
};

/// `count` elements along +x, centred on `center`, `spacing` apart.
std::vector<Vec3> linear_array(const Vec3 &center, int count, double spacing);

/// Draws a random scene; a pure function of (config, params).
Scene build_scene(const SceneConfig &config, const PhysicalParams &params);

/// N_Q points at angles 2*pi*q/N_Q on the circle of radius R around the BS.
CirclePointSet sample_safety_circle(const Scene &scene, const PhysicalParams &params);

/// Same construction with an explicit point count (used for audit grids).
CirclePointSet sample_circle(const Vec3 &center, double radius, int count);

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

} // namespace risemf
