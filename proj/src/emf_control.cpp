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
#include "risemf/emf_control.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "risemf/channel.hpp"
#include "risemf/evaluation.hpp"

namespace risemf {

namespace {

// Lowest index wins ties.
Eigen::Index first_argmax(const RVector &values) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < values.size(); ++i)
    if (values(i) > values(best)) best = i;
  return best;
}

std::string cap_message(const EnhancedTrace &trace) {
  std::ostringstream os;
  os << "enhanced beamforming hit the iteration cap after " << trace.steps.size()
     << " steps; max circle power still " << trace.final_max_power << " W";
  return os.str();
}

} // namespace

IterationCapError::IterationCapError(EnhancedTrace trace_)
    : NumericalError(cap_message(trace_)), trace(std::move(trace_)) {}

ProbeSet ProbeSet::on_circle(const Scene &scene, const CirclePointSet &circle) {
  return {circle.points, probe_matrix(scene, circle.points)};
}

ExposureProfile exposure(const Precoder &precoder, const BeamformingMatrix &bf, const ProbeSet &probes) {
  if (probes.rows.rows() == 0) throw ConfigError("exposure needs at least one probe point");
  const CMatrix field = probes.rows * bf.b; // N_Q x nu
  const RVector power = field.rowwise().squaredNorm();

  ExposureProfile prof;
  prof.point_power.assign(power.data(), power.data() + power.size());
  prof.argmax = static_cast<int>(first_argmax(power));
  prof.max_power = power(prof.argmax);
  prof.argmax_point = probes.points[static_cast<std::size_t>(prof.argmax)];
  prof.per_layer_at_max = field.row(prof.argmax).cwiseAbs2().transpose();

  // Same quantity through the unscaled layer responses H^Q V+.
  const CRowVector response = probes.rows.row(prof.argmax) * precoder.pinv;
  const CMatrix gram = response.adjoint() * response;
  prof.trace_form_at_max = (bf.power.asDiagonal() * gram).trace().real();

  const double scale = std::max(prof.max_power, prof.trace_form_at_max);
  if (std::abs(prof.max_power - prof.trace_form_at_max) > 1e-10 * scale)
    throw NumericalError("norm-form and trace-form exposure disagree");
  return prof;
}

ReducedResult reduced_bf(const Precoder &precoder, const BeamformingMatrix &reference,
                         const ExposureProfile &profile, double emf_threshold) {
  (void)precoder;
  ReducedResult out{reference, 1.0};
  out.bf.scheme = Scheme::reduced;
  if (!(profile.max_power > emf_threshold)) return out;
  out.alpha = emf_threshold / profile.max_power;
  out.bf.b = std::sqrt(out.alpha) * reference.b;
  out.bf.power = out.alpha * reference.power;
  return out;
}

EnhancedResult enhanced_bf(const Precoder &precoder, const BeamformingMatrix &reference,
                           const ProbeSet &probes, double emf_threshold, EnhancedLimits limits) {
  const Eigen::Index nu = reference.power.size();
  const Eigen::Index nq = probes.rows.rows();
  if (nq == 0) throw ConfigError("enhanced beamforming needs probe points");
  const long cap = limits.max_iterations > 0 ? limits.max_iterations : 10L * nu * nq;
  const double stop = emf_threshold * (1.0 + limits.margin);

  // P_Q is linear in the layer powers: P_Q = sum_i |H^Q V+|_qi^2 P_i.
  const Eigen::MatrixXd response = (probes.rows * precoder.pinv).cwiseAbs2();

  EnhancedTrace trace;
  RVector power = reference.power;
  RVector point_power = response * power;
  Eigen::Index q = first_argmax(point_power);

  while (point_power(q) > stop) {
    if (static_cast<long>(trace.steps.size()) >= cap) {
      trace.final_power = power;
      trace.final_max_power = point_power(q);
      throw IterationCapError(std::move(trace));
    }
    const RVector contribution = response.row(q).transpose().cwiseProduct(power);
    const Eigen::Index layer = first_argmax(contribution);
    const double factor = emf_threshold / point_power(q);
    trace.steps.push_back({static_cast<int>(q), probes.points[static_cast<std::size_t>(q)],
                           point_power(q), static_cast<int>(layer), factor});
    power(layer) *= factor;
    point_power = response * power;
    q = first_argmax(point_power);
  }

  EnhancedResult out{assemble_bf(precoder, power, Scheme::enhanced), {}};
  trace.final_power = power;
  trace.final_max_power = point_power(q);
  const double ref_cost = reference.power.dot(precoder.coupling);
  trace.degenerate = ref_cost > 0.0 && power.dot(precoder.coupling) <= 1e-9 * ref_cost;
  out.trace = std::move(trace);
  return out;
}

bool ComplianceReport::feasible(double relative_tolerance, const PhysicalParams &params) const {
  return power_slack >= -relative_tolerance * params.max_power_w &&
         exposure_slack >= -relative_tolerance * params.emf_threshold_w &&
         min_layer_power >= -relative_tolerance * params.max_power_w;
}

ComplianceReport constrained_problem_check(const Precoder &precoder, const BeamformingMatrix &bf,
                                           const ProbeSet &probes, const PhysicalParams &params) {
  const auto prof = exposure(precoder, bf, probes);
  ComplianceReport r;
  r.scheme = bf.scheme;
  r.transmit_power = bf.power.dot(precoder.coupling);
  r.power_slack = params.max_power_w - r.transmit_power;
  r.max_circle_power = prof.max_power;
  r.exposure_slack = params.emf_threshold_w - prof.max_power;
  r.min_layer_power = bf.power.size() ? bf.power.minCoeff() : 0.0;
  return r;
}

nlohmann::json compliance_json(const BeamformingMatrix &bf, double max_circle_power_w,
                               double emf_threshold_w, double audit_max_w,
                               std::optional<double> alpha, std::optional<int> iterations) {
  nlohmann::json doc;
  doc["scheme"] = to_string(bf.scheme);
  if (alpha) doc["alpha"] = *alpha;
  if (iterations) doc["iterations"] = *iterations;
  doc["max_circle_power_dbm"] = to_dbm_floored(max_circle_power_w);
  doc["emf_threshold_dbm"] = watts_to_dbm(emf_threshold_w);
  doc["audit_max_dbm"] = to_dbm_floored(audit_max_w);
  doc["per_layer_power_w"] = std::vector<double>(bf.power.data(), bf.power.data() + bf.power.size());
  return doc;
}

} // namespace risemf
