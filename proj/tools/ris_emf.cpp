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
// Command-line front end: simulate one draw, run a sweep, or validate.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

#include "CLI11.hpp"

#include "risemf/harness.hpp"

namespace fs = std::filesystem;
using namespace risemf;

namespace {

ExperimentConfig load_with_seed(const std::string &path, const std::optional<std::uint64_t> &seed) {
  auto cfg = load_config(path);
  cfg.seed = resolve_seed(seed, cfg.seed);
  return cfg;
}

int cmd_simulate(const std::string &config_path, std::optional<std::uint64_t> seed, int draw,
                 std::optional<int> ues, const std::string &heatmap_out) {
  auto cfg = load_with_seed(config_path, seed);
  if (!heatmap_out.empty()) prepare_output_dir(heatmap_out);
  const int num_ues = ues.value_or(cfg.heatmap.showcase_ues);
  const auto d = simulate_draw(cfg, num_ues, draw);
  const auto &r = d.record;

  std::printf("draw %d  L=%d  layers=%d  seed=%llu\n", draw, num_ues, r.layers,
              static_cast<unsigned long long>(r.seed));
  std::printf("EMF threshold %.3f dBm, alpha=%.6g, enhanced iterations=%d\n",
              watts_to_dbm(cfg.physical.emf_threshold_w), r.alpha, r.enhanced_iterations);
  std::printf("%-10s %14s %16s %16s %16s\n", "scheme", "tx power [W]", "capacity [Mb/s]", "circle max [dBm]",
              "audit max [dBm]");
  for (Scheme s : kAllSchemes) {
    const auto &m = r.metrics(s);
    std::printf("%-10s %14.6g %16.6g %16.4f %16.4f\n", to_string(s).c_str(), m.transmit_power_w, m.capacity_mbps,
                to_dbm_floored(m.max_circle_power_w), to_dbm_floored(m.audit_max_power_w));
  }
  if (!heatmap_out.empty()) {
    write_draw_artifacts(cfg, d, heatmap_out);
    std::printf("artifacts written to %s\n", heatmap_out.c_str());
  }
  return 0;
}

int cmd_sweep(const std::string &config_path, std::optional<std::uint64_t> seed, int workers,
              const std::string &out_flag) {
  auto cfg = load_with_seed(config_path, seed);
  const fs::path out = out_flag.empty() ? fs::path(cfg.output_dir) : fs::path(out_flag);
  prepare_output_dir(out);

  const auto result = run_sweep(cfg, workers);
  write_sweep_artifacts(cfg, result, out);

  const auto &showcase = cfg.heatmap;
  if (showcase.enabled && std::find(cfg.sweep_ues.begin(), cfg.sweep_ues.end(), showcase.showcase_ues) != cfg.sweep_ues.end()) {
    try {
      write_draw_artifacts(cfg, simulate_draw(cfg, showcase.showcase_ues, showcase.showcase_draw), out / "showcase");
    } catch (const std::exception &e) {
      std::fprintf(stderr, "showcase draw failed: %s\n", e.what());
    }
  }

  std::printf("%d draws (%d failed) -> %s\n", result.summary.total_draws, result.summary.failed_draws,
              out.string().c_str());
  std::printf("%3s %-10s %16s %12s %10s %10s\n", "L", "scheme", "capacity [Mb/s]", "power [W]", "power %", "cap %");
  for (const auto &row : result.summary.rows)
    std::printf("%3d %-10s %16.6g %12.6g %10.3f %10.3f\n", row.num_ues, to_string(row.scheme).c_str(),
                row.mean_capacity_mbps, row.mean_power_w, row.power_pct_vs_ref, row.capacity_pct_vs_ref);
  return 0;
}

int cmd_validate(const std::string &config_path, std::optional<std::uint64_t> seed) {
  const auto cfg = load_with_seed(config_path, seed);
  const auto checks = run_validation(cfg);
  int failed = 0;
  for (const auto &c : checks) {
    std::printf("[%s] %-40s %s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
    failed += c.passed ? 0 : 1;
  }
  std::printf("%zu checks, %d failed\n", checks.size(), failed);
  return failed == 0 ? 0 : 4;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"EMF-aware MU-MIMO beamforming simulator for RIS-aided cells"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version_string());

  std::string config_path;
  std::optional<std::uint64_t> seed;

  auto *simulate = app.add_subcommand("simulate", "run one draw and emit heatmaps and compliance JSON");
  int draw = 0;
  std::optional<int> ues;
  std::string heatmap_out;
  simulate->add_option("--config", config_path, "JSON configuration file")->required();
  simulate->add_option("--draw", draw, "draw index")->check(CLI::NonNegativeNumber);
  simulate->add_option("--ues", ues, "number of UEs (default: heatmap.showcase_ues)");
  simulate->add_option("--heatmap-out", heatmap_out, "directory for heatmaps and compliance.json");
  simulate->add_option("--seed", seed, "master seed (overrides RIS_EMF_SEED and the config)");

  auto *sweep = app.add_subcommand("sweep", "Monte Carlo sweep over the number of UEs");
  int workers = 1;
  std::string out;
  sweep->add_option("--config", config_path, "JSON configuration file")->required();
  sweep->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
  sweep->add_option("--out", out, "output directory (default: output_dir from the config)");
  sweep->add_option("--seed", seed, "master seed (overrides RIS_EMF_SEED and the config)");

  auto *validate = app.add_subcommand("validate", "run invariant and compliance checks on fixed seeds");
  validate->add_option("--config", config_path, "JSON configuration file")->required();
  validate->add_option("--seed", seed, "master seed (overrides RIS_EMF_SEED and the config)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) return cmd_simulate(config_path, seed, draw, ues, heatmap_out);
    if (*sweep) return cmd_sweep(config_path, seed, workers, out);
    if (*validate) return cmd_validate(config_path, seed);
  } catch (const ConfigError &e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const std::exception &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
