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
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "risemf/precoding.hpp"
#include "risemf/scene.hpp"

namespace risemf {

inline constexpr double kDbmFloor = -150.0;

/// watts -> dBm, clamped below at `floor_dbm` (zero power maps to the floor).
double to_dbm_floored(double watts, double floor_dbm = kDbmFloor);

/// Axis-aligned observation rectangle in the deployment plane.
struct GridRegion {
  double x_min = -200.0;
  double y_min = -200.0;
  double x_max = 200.0;
  double y_max = 200.0;
  double resolution = 1.0; ///< metres per cell

  static GridRegion centered(const Vec3 &center, double half_extent, double resolution);
};

/// Received power in dBm at cell centres. Row-major, iy = 0 is y_min.
/// Cells that contain a BS element are masked (NaN).
struct HeatmapGrid {
  double x0 = 0.0;
  double y0 = 0.0;
  double resolution = 1.0;
  int nx = 0;
  int ny = 0;
  std::vector<double> dbm;
  Scheme scheme = Scheme::reference;

  Vec3 cell_center(int ix, int iy) const;
  double at(int ix, int iy) const { return dbm[static_cast<std::size_t>(iy) * nx + ix]; }
  bool masked(int ix, int iy) const;
};

enum class CellState : std::uint8_t { not_applicable, compliant, exceeds };

struct ExceedanceMap {
  double x0 = 0.0;
  double y0 = 0.0;
  double resolution = 1.0;
  int nx = 0;
  int ny = 0;
  std::vector<CellState> cells;
  Scheme scheme = Scheme::reference;

  CellState at(int ix, int iy) const { return cells[static_cast<std::size_t>(iy) * nx + ix]; }
  int exceed_count() const;
};

HeatmapGrid render_heatmap(const BeamformingMatrix &bf, const Scene &scene, const GridRegion &region,
                           double floor_dbm = kDbmFloor);

/// Cells outside radius R whose power exceeds the threshold; cells inside
/// the circle are not applicable.
ExceedanceMap exceedance_map(const HeatmapGrid &heatmap, double emf_threshold_w, const Vec3 &center,
                             double radius);

struct SchemeMetrics {
  double transmit_power_w = 0.0;
  double capacity_mbps = 0.0;
  double max_circle_power_w = 0.0;
  double audit_max_power_w = 0.0;
};

/// Outcome of one Monte Carlo draw; all schemes share one channel.
struct DrawRecord {
  int num_ues = 0;
  int draw_index = 0;
  std::uint64_t seed = 0;
  bool failed = false;
  std::string failure;
  int layers = 0;
  double alpha = 1.0;
  int enhanced_iterations = 0;
  SchemeMetrics reference;
  SchemeMetrics reduced;
  SchemeMetrics enhanced;

  const SchemeMetrics &metrics(Scheme scheme) const;
};

struct SweepRow {
  int num_ues = 0;
  Scheme scheme = Scheme::reference;
  double mean_capacity_mbps = 0.0;
  double se_capacity = 0.0;
  double mean_power_w = 0.0;
  double se_power = 0.0;
  double power_pct_vs_ref = 0.0;
  double capacity_pct_vs_ref = 0.0;
  int n_draws = 0;
};

struct SweepSummary {
  std::vector<SweepRow> rows;
  int total_draws = 0;
  int failed_draws = 0;

  const SweepRow *find(int num_ues, Scheme scheme) const;
};

/// Streaming mean/variance (Welford) with an exact merge.
class RunningStats {
public:
  void add(double x);
  void merge(const RunningStats &other);
  long count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const; ///< sample variance
  double standard_error() const;

private:
  long n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

inline constexpr Scheme kAllSchemes[] = {Scheme::reference, Scheme::reduced, Scheme::enhanced};

/// Means and standard errors per (L, scheme). Failed draws are counted but
/// excluded. The result does not depend on the order of `records`.
SweepSummary summarize_sweep(std::span<const DrawRecord> records,
                             std::span<const Scheme> schemes = kAllSchemes);

void write_summary_csv(const SweepSummary &summary, std::ostream &os);
void write_draws_csv(std::span<const DrawRecord> records, std::ostream &os);
void write_heatmap_csv(const HeatmapGrid &heatmap, std::ostream &os);
void write_exceedance_csv(const ExceedanceMap &map, std::ostream &os);
void write_heatmap_svg(const HeatmapGrid &heatmap, std::ostream &os, double lo_dbm = kDbmFloor,
                       double hi_dbm = 40.0);
void write_exceedance_svg(const ExceedanceMap &map, std::ostream &os);

} // namespace risemf
