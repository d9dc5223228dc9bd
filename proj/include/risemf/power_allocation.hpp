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

#include <vector>

#include "risemf/precoding.hpp"
#include "risemf/scene.hpp"

namespace risemf {

struct WaterFillingSolution {
  RVector power;           ///< P_i, watts
  double water_level = 0;  ///< 1/mu, in transmit-power-cost units (watts)
  std::vector<int> active; ///< layers with P_i > 0
  int iterations = 0;
};

enum class LogBase { two, natural };

/// Maximises sum_i log(1 + gain_i P_i / N0) subject to sum_i cost_i P_i = P_max
/// and P_i >= 0. Active-set iteration over the closed-form multiplier.
WaterFillingSolution waterfill(const RVector &gains, const RVector &costs, double max_power,
                               double noise_power);

/// B0 * sum_i log(1 + gain_i P_i / N0), in bit/s for LogBase::two.
double capacity(const RVector &power, const RVector &gains, double bandwidth_hz, double noise_power,
                LogBase base = LogBase::two);

/// ZF precoder with water-filled layer powers at full transmit power.
BeamformingMatrix reference_bf(const Precoder &precoder, const PhysicalParams &params);

} // namespace risemf
