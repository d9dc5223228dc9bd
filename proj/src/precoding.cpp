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
#include "risemf/precoding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace risemf {

RankError::RankError(int ue_, int requested_, int rank_)
    : ConfigError("UE " + std::to_string(ue_) + ": requested " + std::to_string(requested_) +
                  " layers but numerical rank is " + std::to_string(rank_)),
      ue(ue_), requested(requested_), rank(rank_) {}

namespace {
std::string condition_message(double condition) {
  std::ostringstream os;
  os << "selected layers are nearly colinear: Gram condition estimate " << condition;
  return os.str();
}
} // namespace

ConditioningError::ConditioningError(double condition_)
    : NumericalError(condition_message(condition_)), condition(condition_) {}

int UeDecomposition::numerical_rank() const {
  if (singular_values.size() == 0) return 0;
  const double cut = kRankTolerance * singular_values(0);
  int rank = 0;
  for (Eigen::Index i = 0; i < singular_values.size(); ++i)
    if (singular_values(i) > cut) ++rank;
  return rank;
}

RVector LayerMap::gains() const {
  RVector g(total());
  for (int i = 0; i < total(); ++i) g(i) = layers[i].gain;
  return g;
}

UeDecomposition decompose_ue(const CMatrix &h) {
  if (h.rows() > h.cols()) throw ConfigError("decompose_ue requires N <= M");
  if (!h.allFinite()) throw NumericalError("channel matrix has non-finite entries");

  Eigen::JacobiSVD<CMatrix> svd(h, Eigen::ComputeThinU | Eigen::ComputeThinV);
  UeDecomposition d{svd.matrixU(), svd.singularValues(), svd.matrixV()};

  // Pin the phase: largest-magnitude entry of each right singular vector is real-positive.
  for (Eigen::Index j = 0; j < d.v.cols(); ++j) {
    Eigen::Index pivot = 0;
    d.v.col(j).cwiseAbs().maxCoeff(&pivot);
    const double phase = std::arg(d.v(pivot, j));
    const cdouble rot = std::polar(1.0, -phase);
    d.v.col(j) *= rot;
    d.u.col(j) *= rot;
    d.v(pivot, j) = cdouble(std::abs(d.v(pivot, j)), 0.0);
  }
  return d;
}

LayerMap select_layers(std::span<const UeDecomposition> decomps, std::span<const int> requested) {
  if (decomps.size() != requested.size())
    throw ConfigError("one layer request per UE is required");
  LayerMap map;
  for (std::size_t l = 0; l < decomps.size(); ++l) {
    const int rank = decomps[l].numerical_rank();
    const int want = requested[l];
    if (want < 1 || want > rank) throw RankError(static_cast<int>(l), want, rank);
    map.per_ue.push_back(want);
    for (int n = 0; n < want; ++n) {
      const double sigma = decomps[l].singular_values(n);
      map.layers.push_back({static_cast<int>(l), n, sigma * sigma});
    }
  }
  return map;
}

double gram_condition(const CMatrix &rows) {
  const RVector sv = Eigen::JacobiSVD<CMatrix>(rows).singularValues();
  if (sv.size() == 0) return 1.0;
  const double smin = sv(sv.size() - 1);
  if (!(smin > 0.0)) return std::numeric_limits<double>::infinity();
  const double ratio = sv(0) / smin;
  return ratio * ratio;
}

LayerMap select_layers_joint(std::span<const UeDecomposition> decomps, int max_per_ue,
                             double max_condition) {
  if (max_per_ue < 1) throw ConfigError("max_per_ue must be at least 1");
  if (!(max_condition >= 1.0)) throw ConfigError("admission condition cap must be >= 1");

  const std::size_t L = decomps.size();
  std::vector<int> limit(L);
  int rounds = 0;
  for (std::size_t l = 0; l < L; ++l) {
    limit[l] = std::min(max_per_ue, decomps[l].numerical_rank());
    rounds = std::max(rounds, limit[l]);
  }

  const Eigen::Index M = L ? decomps.front().v.rows() : 0;
  CMatrix admitted(0, M);
  std::vector<std::vector<int>> chosen(L);
  for (int n = 0; n < rounds; ++n) {
    for (std::size_t l = 0; l < L; ++l) {
      if (n >= limit[l] || admitted.rows() == M) continue;
      CMatrix trial(admitted.rows() + 1, M);
      trial << admitted, decomps[l].v.col(n).adjoint();
      if (!(gram_condition(trial) <= max_condition)) continue;
      admitted.swap(trial);
      chosen[l].push_back(n);
    }
  }

  LayerMap map;
  for (std::size_t l = 0; l < L; ++l) {
    map.per_ue.push_back(static_cast<int>(chosen[l].size()));
    for (int n : chosen[l]) {
      const double sigma = decomps[l].singular_values(n);
      map.layers.push_back({static_cast<int>(l), n, sigma * sigma});
    }
  }
  return map;
}

Precoder build_precoder(std::span<const UeDecomposition> decomps, const LayerMap &layers,
                        double max_condition) {
  const int nu = layers.total();
  if (nu == 0) throw ConfigError("no layers selected");
  const Eigen::Index M = decomps.empty() ? 0 : decomps.front().v.rows();
  if (nu > M) throw ConfigError("more layers than BS antennas");

  Precoder p;
  p.layers = layers;
  p.v_tilde.resize(nu, M);
  for (int i = 0; i < nu; ++i) {
    const Layer &layer = layers.layers[i];
    if (layer.ue < 0 || static_cast<std::size_t>(layer.ue) >= decomps.size() || layer.index < 0 ||
        layer.index >= decomps[layer.ue].v.cols())
      throw ConfigError("layer map refers to a non-existent singular direction");
    if (decomps[layer.ue].v.rows() != M) throw ConfigError("UE decompositions disagree on M");
    p.v_tilde.row(i) = decomps[layer.ue].v.col(layer.index).adjoint();
  }

  p.gram_condition = gram_condition(p.v_tilde);
  if (!(p.gram_condition <= max_condition)) throw ConditioningError(p.gram_condition);

  // V~^H = Q R  =>  V~+ = Q R^{-H}.
  const CMatrix vh = p.v_tilde.adjoint();
  Eigen::HouseholderQR<CMatrix> qr(vh);
  const CMatrix q = qr.householderQ() * CMatrix::Identity(M, nu);
  const CMatrix r = qr.matrixQR().topLeftCorner(nu, nu).triangularView<Eigen::Upper>();
  const CMatrix r_inv_h =
      r.adjoint().triangularView<Eigen::Lower>().solve(CMatrix::Identity(nu, nu));
  p.pinv = q * r_inv_h;
  p.coupling = p.pinv.colwise().squaredNorm().transpose();
  return p;
}

BeamformingMatrix assemble_bf(const Precoder &precoder, const RVector &power, Scheme scheme) {
  if (power.size() != precoder.pinv.cols()) throw ConfigError("one power per layer is required");
  for (Eigen::Index i = 0; i < power.size(); ++i)
    if (!std::isfinite(power(i)) || power(i) < 0.0) throw ConfigError("layer powers must be finite and non-negative");
  BeamformingMatrix bf;
  bf.power = power;
  bf.scheme = scheme;
  bf.b = precoder.pinv * power.cwiseSqrt().asDiagonal();
  return bf;
}

} // namespace risemf
