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

#include <span>
#include <string>
#include <vector>

#include "risemf/types.hpp"

namespace risemf {

/// Singular values below this fraction of the largest are treated as zero.
inline constexpr double kRankTolerance = 1e-10;
inline constexpr double kDefaultMaxGramCondition = 1e12;

/// Thin SVD H_l = U diag(sigma) V^H of one UE channel (N <= M).
struct UeDecomposition {
  CMatrix u;              ///< N x N
  RVector singular_values; ///< descending, length N
  CMatrix v;              ///< M x N, orthonormal columns

  /// Number of singular values above kRankTolerance * sigma_max.
  int numerical_rank() const;
};

struct Layer {
  int ue = 0;        ///< owning UE
  int index = 0;     ///< singular index inside that UE
  double gain = 0.0; ///< lambda_i = sigma^2
};

/// Which singular directions carry data, in stacking order.
struct LayerMap {
  std::vector<int> per_ue;
  std::vector<Layer> layers;

  int total() const { return static_cast<int>(layers.size()); }
  RVector gains() const;
};

/// ZF precoder over the selected layers.
struct Precoder {
  CMatrix v_tilde;     ///< nu x M, selected rows of [V_1 ... V_L]^H
  CMatrix pinv;        ///< M x nu, right inverse of v_tilde
  RVector coupling;    ///< c_i = [(V V^H)^{-1}]_ii
  LayerMap layers;
  double gram_condition = 1.0;
};

struct BeamformingMatrix {
  CMatrix b;       ///< M x nu
  RVector power;   ///< per-layer P_i in watts
  Scheme scheme = Scheme::reference;

  /// tr[B B^H]
  double transmit_power() const { return b.squaredNorm(); }
};

/// Raised when more layers are requested than a UE channel supports.
class RankError : public ConfigError {
public:
  RankError(int ue, int requested, int rank);
  int ue;
  int requested;
  int rank;
};

/// Raised when the selected layers are (nearly) linearly dependent.
class ConditioningError : public NumericalError {
public:
  explicit ConditioningError(double condition);
  double condition;
};

UeDecomposition decompose_ue(const CMatrix &h);

/// Fixed policy: the `requested[l]` strongest directions of every UE.
LayerMap select_layers(std::span<const UeDecomposition> decomps, std::span<const int> requested);

inline constexpr double kDefaultAdmissionCondition = 1e10;

/// Rank-aware policy. Candidates are visited round-robin (strongest
/// direction of every UE first, then the second, ...), up to `max_per_ue`
/// and the UE's numerical rank. A candidate is admitted only if the Gram
/// condition number of the admitted rows stays at or below
/// `max_condition`. Some UEs may end up with zero layers.
LayerMap select_layers_joint(std::span<const UeDecomposition> decomps, int max_per_ue,
                             double max_condition = kDefaultAdmissionCondition);

/// (sigma_max / sigma_min)^2 of the rows; infinity when rank deficient.
double gram_condition(const CMatrix &rows);

Precoder build_precoder(std::span<const UeDecomposition> decomps, const LayerMap &layers,
                        double max_condition = kDefaultMaxGramCondition);

/// B = pinv * diag(sqrt(P)).
BeamformingMatrix assemble_bf(const Precoder &precoder, const RVector &power,
                              Scheme scheme = Scheme::reference);

} // namespace risemf
