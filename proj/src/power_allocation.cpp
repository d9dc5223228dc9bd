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
#include "risemf/power_allocation.hpp"

#include <cassert>
#include <cmath>

namespace risemf {

WaterFillingSolution waterfill(const RVector &gains, const RVector &costs, double max_power,
                               double noise_power) {
  const Eigen::Index nu = gains.size();
  if (costs.size() != nu) throw ConfigError("gains and costs must have the same length");
  if (nu == 0) throw ConfigError("water-filling needs at least one layer");
  if (!std::isfinite(max_power) || max_power <= 0) throw ConfigError("max power must be finite and positive");
  if (!std::isfinite(noise_power) || noise_power <= 0) throw ConfigError("noise power must be finite and positive");
  for (Eigen::Index i = 0; i < nu; ++i) {
    if (!std::isfinite(gains(i)) || gains(i) <= 0) throw ConfigError("layer gains must be finite and positive");
    if (!std::isfinite(costs(i)) || costs(i) <= 0) throw ConfigError("layer costs must be finite and positive");
  }

  // In cost units x_i = c_i P_i the problem is textbook water-filling with
  // floors f_i = N0 c_i / lambda_i:  x_i = max(1/mu - f_i, 0), sum x_i = P_max.
  const RVector floor = (noise_power * costs.array() / gains.array()).matrix();
  std::vector<bool> on(static_cast<std::size_t>(nu), true);

  WaterFillingSolution sol;
  sol.power = RVector::Zero(nu);
  for (;;) {
    ++sol.iterations;
    int count = 0;
    double floor_sum = 0.0;
    for (Eigen::Index i = 0; i < nu; ++i)
      if (on[i]) {
        ++count;
        floor_sum += floor(i);
      }
    assert(count > 0);
    const double level = (max_power + floor_sum) / count;

    bool dropped = false;
    for (Eigen::Index i = 0; i < nu; ++i)
      if (on[i] && level - floor(i) < 0.0) {
        on[i] = false;
        dropped = true;
      }
    if (dropped) continue;

    sol.water_level = level;
    for (Eigen::Index i = 0; i < nu; ++i) {
      if (!on[i]) continue;
      sol.power(i) = (level - floor(i)) / costs(i);
      if (sol.power(i) > 0.0) sol.active.push_back(static_cast<int>(i));
    }
    return sol;
  }
}

double capacity(const RVector &power, const RVector &gains, double bandwidth_hz, double noise_power,
                LogBase base) {
  if (power.size() != gains.size()) throw ConfigError("power and gain vectors differ in length");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < power.size(); ++i) {
    if (power(i) < 0.0) throw ConfigError("layer powers must be non-negative");
    const double snr = gains(i) * power(i) / noise_power;
    sum += base == LogBase::two ? std::log2(1.0 + snr) : std::log1p(snr);
  }
  return bandwidth_hz * sum;
}

BeamformingMatrix reference_bf(const Precoder &precoder, const PhysicalParams &params) {
  const auto sol = waterfill(precoder.layers.gains(), precoder.coupling, params.max_power_w,
                             params.noise_power_w);
  return assemble_bf(precoder, sol.power, Scheme::reference);
}

} // namespace risemf
