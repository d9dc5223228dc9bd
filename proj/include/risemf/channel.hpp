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

#include "risemf/scene.hpp"
#include "risemf/types.hpp"

namespace risemf {

/// Small-scale fading: one coefficient per scatterer and per RIS, drawn as
/// zero-mean circularly-symmetric complex Gaussians with E|x|^2 = 1.
struct FadingDraw {
  std::vector<cdouble> scatterer;
  std::vector<cdouble> ris;

  static FadingDraw draw(int num_scatterers, int num_ris, std::uint64_t seed);
};

/// Frozen RIS reflection state.
struct RisConfiguration {
  std::vector<CVector> weights; ///< per RIS, K unit-modulus entries
  double amplitude = 0.0;       ///< r_ris = 1/K
  std::vector<int> target_ue;   ///< per RIS
};

/// Per-UE channels H_l (N x M) and the stacked (L*N) x M matrix.
struct ChannelSet {
  std::vector<CMatrix> per_ue;
  CMatrix stacked;
};

/// Projected far-field path-length offsets (metres) on both hops of a path.
struct PathOffsets {
  double first_hop = 0.0;
  double second_hop = 0.0;
};

enum class RisAssignment { round_robin, nearest_ue };

/// BS side: offset of BS element m projected on the BS->scatterer direction.
/// UE side: offset of UE element n projected on the scatterer->UE direction.
PathOffsets path_phase_scatterer(const Scene &scene, int m, int s, int l, int n);

/// BS side: (BS offset + RIS offset) on the BS->RIS direction.
/// UE side: (RIS offset + UE offset) on the RIS->UE direction.
PathOffsets path_phase_ris(const Scene &scene, int m, int z, int k, int l, int n);

/// beta * exp(-j 2pi/lambda (d1 + d2))
cdouble gain_scatterer_path(cdouble beta, double first_hop, double second_hop, double wavelength);

/// r_ris * eps * exp(-j 2pi/lambda e1) * w * exp(-j 2pi/lambda e2)
cdouble gain_ris_path(cdouble eps, double amplitude, cdouble weight, double first_hop,
                      double second_hop, double wavelength);

/// Target UE for each RIS under the given policy.
std::vector<int> assign_ris(const Scene &scene, RisAssignment policy);

/// Phase-conjugate weights that co-phase the K element paths between the BS
/// array centre and the target UE's array centre.
RisConfiguration configure_ris(const Scene &scene, const std::vector<int> &target_ue);

/// Multipath channel for every UE: sum of scatterer and RIS-element path gains.
ChannelSet build_channel(const Scene &scene, const FadingDraw &fading, const RisConfiguration &ris);

/// Free-space 1 x M channel from the BS array to an observation point.
CRowVector probe_channel(const Scene &scene, const Vec3 &point);

/// Probe channels for a set of points, one row per point.
CMatrix probe_matrix(const Scene &scene, const std::vector<Vec3> &points);

} // namespace risemf
