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

// Reference computations used by unit tests and the acceptance binary. They
// are written directly from the model equations and share no code with the
// library paths they check.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "risemf/channel.hpp"
#include "risemf/power_allocation.hpp"

namespace risemf::oracle {

inline Vec3 unit(const Vec3 &from, const Vec3 &to) { return (to - from).normalized(); }

/// One complex exponential per (n, m, path) triple.
inline CMatrix naive_channel(const Scene &sc, const FadingDraw &f, const RisConfiguration &ris, int l) {
  const int M = sc.num_bs_elements(), N = sc.num_ue_elements();
  const double k = 2.0 * kPi / sc.wavelength;
  CMatrix h = CMatrix::Zero(N, M);
  for (int n = 0; n < N; ++n) {
    for (int m = 0; m < M; ++m) {
      const Vec3 bs_off = sc.bs_elements[m] - sc.bs_center;
      const Vec3 ue_off = sc.ue_elements[l][n] - sc.ue_centers[l];
      cdouble sum = 0.0;
      for (int s = 0; s < sc.num_scatterers(); ++s) {
        const double d1 = unit(sc.bs_center, sc.scatterers[s]).dot(bs_off);
        const double d2 = unit(sc.scatterers[s], sc.ue_centers[l]).dot(ue_off);
        sum += f.scatterer[s] * std::exp(cdouble(0.0, -k * (d1 + d2)));
      }
      for (int z = 0; z < sc.num_ris(); ++z) {
        for (int e = 0; e < sc.num_ris_elements(); ++e) {
          const Vec3 ris_off = sc.ris_elements[z][e] - sc.ris_centers[z];
          const double e1 = unit(sc.bs_center, sc.ris_centers[z]).dot(bs_off + ris_off);
          const double e2 = unit(sc.ris_centers[z], sc.ue_centers[l]).dot(ris_off + ue_off);
          sum += (1.0 / sc.num_ris_elements()) * f.ris[z] * std::exp(cdouble(0.0, -k * e1)) * ris.weights[z](e) *
                 std::exp(cdouble(0.0, -k * e2));
        }
      }
      h(n, m) = sum;
    }
  }
  return h;
}

/// sum_i log2(1 + gain_i P_i / N0)
inline double rate_sum(const RVector &power, const RVector &gains, double noise) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < power.size(); ++i) s += std::log2(1.0 + gains(i) * power(i) / noise);
  return s;
}

/// Best objective over the lattice x_i = c_i P_i in {0, h, 2h, ...}, sum x_i = P_max,
/// h = step * P_max. Exhaustive, evaluated as a max-plus convolution over layers.
inline double grid_search_objective(const RVector &gains, const RVector &costs, double max_power, double noise,
                                    double step = 1e-3) {
  const int cells = static_cast<int>(std::lround(1.0 / step));
  const double h = step * max_power;
  const double neg_inf = -std::numeric_limits<double>::infinity();
  std::vector<double> best(cells + 1, neg_inf), next(cells + 1);
  best[0] = 0.0;
  for (Eigen::Index i = 0; i < gains.size(); ++i) {
    std::vector<double> f(cells + 1);
    for (int j = 0; j <= cells; ++j) f[j] = std::log2(1.0 + gains(i) * (j * h / costs(i)) / noise);
    std::fill(next.begin(), next.end(), neg_inf);
    for (int t = 0; t <= cells; ++t)
      for (int j = 0; j <= t; ++j)
        if (best[t - j] > neg_inf) next[t] = std::max(next[t], best[t - j] + f[j]);
    best.swap(next);
  }
  return best[cells];
}

struct KktResiduals {
  double stationarity = 0.0; ///< max over active |mu c_i (P_i + N0/lambda_i) - 1|
  double dual = 0.0;         ///< max over inactive relative excess of 1/(mu c_i) above N0/lambda_i
  double slackness = 0.0;    ///< max |P_i * dual_i| normalised
  double feasibility = 0.0;  ///< |sum P_i c_i - P_max| / P_max and negativity of P_i
};

inline KktResiduals kkt(const WaterFillingSolution &s, const RVector &gains, const RVector &costs, double max_power,
                        double noise) {
  KktResiduals r;
  const double mu = 1.0 / s.water_level;
  for (Eigen::Index i = 0; i < gains.size(); ++i) {
    const double floor = noise / gains(i);
    const double p = s.power(i);
    // dual_i >= 0 is the multiplier of P_i >= 0: 1/(P_i + N0/lambda_i) + dual_i = mu c_i (natural-log scale).
    const double dual = mu * costs(i) - 1.0 / (p + floor);
    if (p > 0.0) {
      r.stationarity = std::max(r.stationarity, std::abs(mu * costs(i) * (p + floor) - 1.0));
      r.slackness = std::max(r.slackness, std::abs(p * dual));
    } else {
      r.dual = std::max(r.dual, std::max(0.0, 1.0 / (mu * costs(i)) - floor) / floor);
    }
    r.feasibility = std::max(r.feasibility, std::max(0.0, -p) / max_power);
  }
  r.feasibility = std::max(r.feasibility, std::abs(s.power.dot(costs) - max_power) / max_power);
  return r;
}

} // namespace risemf::oracle
