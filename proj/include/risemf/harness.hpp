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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "risemf/channel.hpp"
#include "risemf/emf_control.hpp"
#include "risemf/evaluation.hpp"
#include "risemf/power_allocation.hpp"
#include "risemf/precoding.hpp"
#include "risemf/scene.hpp"

namespace risemf {

enum class LayerPolicy { fixed, joint };

struct LayerConfig {
  LayerPolicy policy = LayerPolicy::joint;
  int per_ue = 4;                    ///< requested nu_l (fixed) or cap (joint)
  double admission_condition = kDefaultAdmissionCondition; ///< joint policy
  double max_condition = kDefaultMaxGramCondition;           ///< hard cap in build_precoder
};

struct HeatmapConfig {
  bool enabled = true;
  double half_extent_m = 200.0;
  double resolution_m = 1.0;
  double floor_dbm = kDbmFloor;
  int showcase_ues = 5;
  int showcase_draw = 0;
};

struct ExperimentConfig {
  PhysicalParams physical;
  SceneConfig scene; ///< num_ues and seed are set per draw
  RisAssignment ris_assignment = RisAssignment::round_robin;
  LayerConfig layers;
  EnhancedLimits enhanced;
  int audit_factor = 4;
  LogBase log_base = LogBase::two;
  std::vector<int> sweep_ues{2, 3, 4, 5, 6, 7};
  int n_draws = 1000;
  bool freeze_geometry = false;
  std::vector<Scheme> schemes{Scheme::reference, Scheme::reduced, Scheme::enhanced};
  std::uint64_t seed = 20221;
  std::string output_dir = "out";
  HeatmapConfig heatmap;
};

/// Parses and validates a configuration document. Unknown keys are rejected.
ExperimentConfig config_from_json(const nlohmann::json &doc);
nlohmann::json config_to_json(const ExperimentConfig &config);
ExperimentConfig load_config(const std::filesystem::path &path);

/// Master-seed resolution: flag, then RIS_EMF_SEED, then the config value.
std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, std::uint64_t config_seed);

struct DrawSeeds {
  std::uint64_t draw = 0;
  std::uint64_t geometry = 0;
  std::uint64_t fading = 0;
};

DrawSeeds draw_seeds(const ExperimentConfig &config, int num_ues, int draw_index);

/// Every intermediate of one draw.
struct DrawResult {
  Scene scene;
  FadingDraw fading;
  RisConfiguration ris;
  ChannelSet channel;
  std::vector<UeDecomposition> decomps;
  Precoder precoder;
  ProbeSet circle;
  ProbeSet audit;
  BeamformingMatrix reference;
  ExposureProfile reference_profile;
  ReducedResult reduced;
  EnhancedResult enhanced;
  DrawRecord record;
};

/// Full pipeline for one draw; component errors propagate.
DrawResult simulate_draw(const ExperimentConfig &config, int num_ues, int draw_index);

/// Same pipeline, but failures are captured in the record.
DrawRecord run_draw(const ExperimentConfig &config, int num_ues, int draw_index);

struct SweepResult {
  std::vector<DrawRecord> records; ///< ordered by (L, draw index)
  SweepSummary summary;
};

SweepResult run_sweep(const ExperimentConfig &config, int workers = 1);

/// Creates `dir` and checks that it is writable; throws otherwise.
void prepare_output_dir(const std::filesystem::path &dir);

/// Writes summary.csv, draws.csv and manifest.json.
void write_sweep_artifacts(const ExperimentConfig &config, const SweepResult &result,
                           const std::filesystem::path &dir);

/// Heatmaps, exceedance maps (CSV + SVG) and compliance.json for one draw.
void write_draw_artifacts(const ExperimentConfig &config, const DrawResult &draw,
                          const std::filesystem::path &dir);

/// Run manifest: configuration, seeds, version and documented caveats.
nlohmann::json sweep_manifest(const ExperimentConfig &config, const SweepResult &result);

/// Upper bound on received power anywhere on the safety circle at full
/// transmit power: sum_m (lambda / 4 pi d_m,min)^2 * P_max.
double circle_exposure_bound(const ExperimentConfig &config);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Invariant and compliance checks on a few fixed-seed draws.
std::vector<CheckResult> run_validation(const ExperimentConfig &config);

std::string version_string();

} // namespace risemf
