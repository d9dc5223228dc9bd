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
#include "risemf/channel.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace risemf {

namespace {

Vec3 unit_direction(const Vec3 &from, const Vec3 &to, const char *what) {
  const Vec3 d = to - from;
  const double norm = d.norm();
  if (!(norm > 0.0)) throw NumericalError(std::string("coincident points on ") + what + " path");
  return d / norm;
}

void check_index(int value, int count, const char *what) {
  if (value < 0 || value >= count)
    throw ConfigError(std::string(what) + " index " + std::to_string(value) + " out of range [0, " +
                      std::to_string(count) + ")");
}

cdouble phasor(double phase) { return std::polar(1.0, phase); }

} // namespace

FadingDraw FadingDraw::draw(int num_scatterers, int num_ris, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> half(0.0, std::sqrt(0.5));
  FadingDraw f;
  f.scatterer.reserve(static_cast<std::size_t>(num_scatterers));
  f.ris.reserve(static_cast<std::size_t>(num_ris));
  for (int s = 0; s < num_scatterers; ++s) {
    const double re = half(rng);
    f.scatterer.emplace_back(re, half(rng));
  }
  for (int z = 0; z < num_ris; ++z) {
    const double re = half(rng);
    f.ris.emplace_back(re, half(rng));
  }
  return f;
}

PathOffsets path_phase_scatterer(const Scene &scene, int m, int s, int l, int n) {
  check_index(m, scene.num_bs_elements(), "BS element");
  check_index(s, scene.num_scatterers(), "scatterer");
  check_index(l, scene.num_ues(), "UE");
  check_index(n, scene.num_ue_elements(), "UE element");
  const Vec3 &sca = scene.scatterers[s];
  const Vec3 &ue0 = scene.ue_centers[l];
  const Vec3 to_sca = unit_direction(scene.bs_center, sca, "BS->scatterer");
  const Vec3 to_ue = unit_direction(sca, ue0, "scatterer->UE");
  return {to_sca.dot(scene.bs_elements[m] - scene.bs_center),
          to_ue.dot(scene.ue_elements[l][n] - ue0)};
}

PathOffsets path_phase_ris(const Scene &scene, int m, int z, int k, int l, int n) {
  check_index(m, scene.num_bs_elements(), "BS element");
  check_index(z, scene.num_ris(), "RIS");
  check_index(k, scene.num_ris_elements(), "RIS element");
  check_index(l, scene.num_ues(), "UE");
  check_index(n, scene.num_ue_elements(), "UE element");
  const Vec3 &ris0 = scene.ris_centers[z];
  const Vec3 &ue0 = scene.ue_centers[l];
  const Vec3 ris_offset = scene.ris_elements[z][k] - ris0;
  const Vec3 to_ris = unit_direction(scene.bs_center, ris0, "BS->RIS");
  const Vec3 to_ue = unit_direction(ris0, ue0, "RIS->UE");
  return {to_ris.dot(scene.bs_elements[m] - scene.bs_center + ris_offset),
          to_ue.dot(ris_offset + scene.ue_elements[l][n] - ue0)};
}

cdouble gain_scatterer_path(cdouble beta, double first_hop, double second_hop, double wavelength) {
  const double k = 2.0 * kPi / wavelength;
  return beta * phasor(-k * (first_hop + second_hop));
}

cdouble gain_ris_path(cdouble eps, double amplitude, cdouble weight, double first_hop,
                      double second_hop, double wavelength) {
  const double k = 2.0 * kPi / wavelength;
  return amplitude * eps * phasor(-k * first_hop) * weight * phasor(-k * second_hop);
}

std::vector<int> assign_ris(const Scene &scene, RisAssignment policy) {
  const int L = scene.num_ues();
  if (L <= 0) throw ConfigError("scene has no UEs");
  std::vector<int> target(static_cast<std::size_t>(scene.num_ris()));
  for (int z = 0; z < scene.num_ris(); ++z) {
    if (policy == RisAssignment::round_robin) {
      target[z] = z % L;
      continue;
    }
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int l = 0; l < L; ++l) {
      const double d = (scene.ue_centers[l] - scene.ris_centers[z]).norm();
      if (d < best_d) {
        best_d = d;
        best = l;
      }
    }
    target[z] = best;
  }
  return target;
}

RisConfiguration configure_ris(const Scene &scene, const std::vector<int> &target_ue) {
  if (static_cast<int>(target_ue.size()) != scene.num_ris())
    throw ConfigError("RIS assignment must name one UE per RIS");
  const int K = scene.num_ris_elements();
  const double k = 2.0 * kPi / scene.wavelength;
  RisConfiguration cfg;
  cfg.amplitude = K > 0 ? 1.0 / K : 0.0;
  cfg.target_ue = target_ue;
  for (int z = 0; z < scene.num_ris(); ++z) {
    check_index(target_ue[z], scene.num_ues(), "RIS target UE");
    const Vec3 &ris0 = scene.ris_centers[z];
    const Vec3 to_ris = unit_direction(scene.bs_center, ris0, "BS->RIS");
    const Vec3 to_ue = unit_direction(ris0, scene.ue_centers[target_ue[z]], "RIS->UE");
    CVector w(K);
    for (int e = 0; e < K; ++e) {
      // With both array centres as end points only the RIS offset survives.
      const Vec3 offset = scene.ris_elements[z][e] - ris0;
      w(e) = phasor(k * (to_ris.dot(offset) + to_ue.dot(offset)));
    }
    cfg.weights.push_back(std::move(w));
  }
  return cfg;
}

ChannelSet build_channel(const Scene &scene, const FadingDraw &fading, const RisConfiguration &ris) {
  const int M = scene.num_bs_elements();
  const int N = scene.num_ue_elements();
  const int L = scene.num_ues();
  const int S = scene.num_scatterers();
  const int Z = scene.num_ris();
  const int K = scene.num_ris_elements();
  if (static_cast<int>(fading.scatterer.size()) != S || static_cast<int>(fading.ris.size()) != Z)
    throw ConfigError("fading draw does not match scene dimensions");
  if (static_cast<int>(ris.weights.size()) != Z)
    throw ConfigError("RIS configuration does not match scene dimensions");
  for (const auto &w : ris.weights)
    if (w.size() != K) throw ConfigError("RIS weight vector length must equal K");

  const double k = 2.0 * kPi / scene.wavelength;

  // Every path factorises into (UE-side steering) x (BS-side steering)^T.
  auto steering = [k](const std::vector<Vec3> &elements, const Vec3 &center, const Vec3 &dir) {
    CVector a(static_cast<Eigen::Index>(elements.size()));
    for (std::size_t i = 0; i < elements.size(); ++i)
      a(static_cast<Eigen::Index>(i)) = std::polar(1.0, -k * dir.dot(elements[i] - center));
    return a;
  };

  ChannelSet out;
  out.per_ue.assign(static_cast<std::size_t>(L), CMatrix::Zero(N, M));

  for (int s = 0; s < S; ++s) {
    const Vec3 &sca = scene.scatterers[s];
    const CVector bs = steering(scene.bs_elements, scene.bs_center,
                                unit_direction(scene.bs_center, sca, "BS->scatterer"));
    for (int l = 0; l < L; ++l) {
      const CVector ue = steering(scene.ue_elements[l], scene.ue_centers[l],
                                  unit_direction(sca, scene.ue_centers[l], "scatterer->UE"));
      out.per_ue[l].noalias() += fading.scatterer[s] * ue * bs.transpose();
    }
  }

  for (int z = 0; z < Z; ++z) {
    const Vec3 &ris0 = scene.ris_centers[z];
    const Vec3 to_ris = unit_direction(scene.bs_center, ris0, "BS->RIS");
    const CVector bs = steering(scene.bs_elements, scene.bs_center, to_ris);
    for (int l = 0; l < L; ++l) {
      const Vec3 to_ue = unit_direction(ris0, scene.ue_centers[l], "RIS->UE");
      const CVector ue = steering(scene.ue_elements[l], scene.ue_centers[l], to_ue);
      cdouble surface(0.0, 0.0);
      for (int e = 0; e < K; ++e)
        surface += ris.weights[z](e) * std::polar(1.0, -k * (to_ris + to_ue).dot(scene.ris_elements[z][e] - ris0));
      out.per_ue[l].noalias() += (ris.amplitude * fading.ris[z] * surface) * ue * bs.transpose();
    }
  }

  out.stacked.resize(static_cast<Eigen::Index>(L) * N, M);
  for (int l = 0; l < L; ++l) out.stacked.middleRows(static_cast<Eigen::Index>(l) * N, N) = out.per_ue[l];
  return out;
}

CRowVector probe_channel(const Scene &scene, const Vec3 &point) {
  const int M = scene.num_bs_elements();
  const double lambda = scene.wavelength;
  const double k = 2.0 * kPi / lambda;
  CRowVector h(M);
  for (int m = 0; m < M; ++m) {
    const double d = (point - scene.bs_elements[m]).norm();
    if (!(d > 0.0)) throw NumericalError("probe point coincides with a BS element");
    h(m) = std::polar(lambda / (4.0 * kPi * d), k * d);
  }
  return h;
}

CMatrix probe_matrix(const Scene &scene, const std::vector<Vec3> &points) {
  CMatrix rows(static_cast<Eigen::Index>(points.size()), scene.num_bs_elements());
  for (std::size_t q = 0; q < points.size(); ++q)
    rows.row(static_cast<Eigen::Index>(q)) = probe_channel(scene, points[q]);
  return rows;
}

} // namespace risemf
