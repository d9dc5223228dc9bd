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

#include <optional>
#include <vector>

#include "json.hpp"

#include "risemf/precoding.hpp"
#include "risemf/scene.hpp"

namespace risemf {

/// Probe channels for a fixed set of observation points.
struct ProbeSet {
  std::vector<Vec3> points;
  CMatrix rows; ///< one 1 x M probe channel per point

  static ProbeSet on_circle(const Scene &scene, const CirclePointSet &circle);
};

struct ExposureProfile {
  std::vector<double> point_power; ///< P_Q = ||H^Q B||^2, watts
  int argmax = 0;                  ///< lowest index on ties
  double max_power = 0.0;
  Vec3 argmax_point = Vec3::Zero();
  RVector per_layer_at_max; ///< |H^Qmax B|_i^2
  /// tr[Sigma^2 (H^Q V+)^H (H^Q V+)] at the argmax point, computed independently.
  double trace_form_at_max = 0.0;
};

struct ReducedResult {
  BeamformingMatrix bf;
  double alpha = 1.0;
};

struct EnhancedLimits {
  int max_iterations = 0; ///< 0 selects 10 * nu * N_Q
  double margin = 1e-9;   ///< compliant when P_Qmax <= EMF_th (1 + margin)
};

struct EnhancedStep {
  int point = 0;
  Vec3 q_max = Vec3::Zero();
  double p_qmax = 0.0;
  int layer = 0;
  double factor = 1.0;
};

struct EnhancedTrace {
  std::vector<EnhancedStep> steps;
  RVector final_power;
  double final_max_power = 0.0;
  bool degenerate = false; ///< every layer driven to (near) zero power
};

struct EnhancedResult {
  BeamformingMatrix bf;
  EnhancedTrace trace;
};

class IterationCapError : public NumericalError {
public:
  explicit IterationCapError(EnhancedTrace trace);
  EnhancedTrace trace;
};

/// Residuals of the constrained problem; all three are >= 0 when feasible.
struct ComplianceReport {
  Scheme scheme = Scheme::reference;
  double power_slack = 0.0;    ///< P_max - sum_i P_i c_i
  double exposure_slack = 0.0; ///< EMF_th - max_Q P_Q
  double min_layer_power = 0.0;
  double max_circle_power = 0.0;
  double transmit_power = 0.0;

  bool feasible(double relative_tolerance, const PhysicalParams &params) const;
};

/// Received power on every probe point for the given beamformer.
ExposureProfile exposure(const Precoder &precoder, const BeamformingMatrix &bf, const ProbeSet &probes);

/// Global scaling by alpha = min(EMF_th / max_Q P_Q, 1).
ReducedResult reduced_bf(const Precoder &precoder, const BeamformingMatrix &reference,
                         const ExposureProfile &profile, double emf_threshold);

/// Iterative per-layer power reduction at the worst circle point.
/// Throws IterationCapError (carrying the trace) if the cap is reached.
EnhancedResult enhanced_bf(const Precoder &precoder, const BeamformingMatrix &reference,
                           const ProbeSet &probes, double emf_threshold, EnhancedLimits limits = {});

ComplianceReport constrained_problem_check(const Precoder &precoder, const BeamformingMatrix &bf,
                                           const ProbeSet &probes, const PhysicalParams &params);

/// Compliance report document:
/// {scheme, alpha?, iterations?, max_circle_power_dbm, emf_threshold_dbm,
///  audit_max_dbm, per_layer_power_w[]}
nlohmann::json compliance_json(const BeamformingMatrix &bf, double max_circle_power_w,
                               double emf_threshold_w, double audit_max_w,
                               std::optional<double> alpha, std::optional<int> iterations);

} // namespace risemf
