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
// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "risemf/harness.hpp"
#include "test_support.hpp"

using namespace risemf;
namespace fs = std::filesystem;

namespace {

const fs::path kSourceDir = RISEMF_SOURCE_DIR;

struct Outcome {
  bool passed = true;
  std::string detail;

  void require(bool ok, const std::string &what) {
    if (!ok && passed) detail = "first failure: " + what + "; " + detail;
    passed = passed && ok;
  }
};

std::string fmt(const char *f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

ExperimentConfig published() { return load_config(kSourceDir / "configs/published.json"); }
ExperimentConfig binding() { return load_config(kSourceDir / "configs/exposure_binding.json"); }

double circle_max(const DrawResult &d, const BeamformingMatrix &bf) {
  return (d.circle.rows * bf.b).rowwise().squaredNorm().maxCoeff();
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Outcome emf_compliance() {
  Outcome o;
  for (const auto &[label, cfg] : {std::pair{"published", published()}, std::pair{"binding", binding()}}) {
    const double th = cfg.physical.emf_threshold_w;
    int ok = 0, exceeding = 0;
    double worst = 0.0;
    for (int draw = 0; draw < 200; ++draw) {
      try {
        const auto d = simulate_draw(cfg, 5, draw);
        const double red = circle_max(d, d.reduced.bf), enh = circle_max(d, d.enhanced.bf);
        exceeding += d.reference_profile.max_power > th;
        worst = std::max({worst, red / th, enh / th});
        const bool pass = red <= th * (1 + 1e-9) && enh <= th * (1 + 1e-9) && d.circle.points.size() == 360;
        ok += pass;
        o.require(pass, fmt("%s draw %d exceeds the threshold", label, draw));
      } catch (const std::exception &e) {
        o.require(false, fmt("%s draw %d: %s", label, draw, e.what()));
      }
    }
    o.detail += fmt("%s %d/200 compliant, %d reference exceedances, worst %.9f of threshold; ", label, ok, exceeding,
                    worst);
  }
  return o;
}

Outcome reduced_tightness() {
  Outcome o;
  for (const auto &[label, cfg] : {std::pair{"published", published()}, std::pair{"binding", binding()}}) {
    const double th = cfg.physical.emf_threshold_w;
    int scaled = 0;
    double worst = 0.0;
    for (int draw = 0; draw < 200; ++draw) {
      const auto d = simulate_draw(cfg, 2 + draw % 6, draw);
      if (d.reduced.alpha >= 1.0) continue;
      ++scaled;
      const double err = std::abs(circle_max(d, d.reduced.bf) - th) / th;
      worst = std::max(worst, err);
      o.require(err <= 1e-9, fmt("%s draw %d relative error %.3e", label, draw, err));
    }
    o.detail += fmt("%s %d draws with alpha < 1, worst relative error %.2e; ", label, scaled, worst);
  }
  return o;
}

Outcome waterfill_optimality() {
  Outcome o;
  std::mt19937_64 rng(31337);
  std::uniform_int_distribution<int> size(1, 4);
  std::uniform_real_distribution<double> log_gain(-3.0, 1.0), log_noise(-2.0, 0.0);
  double worst_gap = 0.0, worst_kkt = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int nu = size(rng);
    RVector gains(nu);
    for (int i = 0; i < nu; ++i) gains(i) = std::pow(10.0, log_gain(rng));
    const RVector costs = test::random_positive(rng, nu, 0.5, 4.0);
    const double pmax = test::random_positive(rng, 1, 0.5, 200.0)(0);
    const double noise = std::pow(10.0, log_noise(rng));
    const auto s = waterfill(gains, costs, pmax, noise);
    const auto k = oracle::kkt(s, gains, costs, pmax, noise);
    const double wf = oracle::rate_sum(s.power, gains, noise);
    const double grid = oracle::grid_search_objective(gains, costs, pmax, noise, 1e-3);
    const double gap = std::abs(wf - grid) / wf;
    const double kmax = std::max({k.stationarity, k.dual, k.slackness, k.feasibility});
    worst_gap = std::max(worst_gap, gap);
    worst_kkt = std::max(worst_kkt, kmax);
    o.require(gap <= 1e-4, fmt("instance %d objective gap %.3e", trial, gap));
    o.require(wf >= grid * (1 - 1e-12), fmt("instance %d grid beats water-filling", trial));
    o.require(kmax <= 1e-8, fmt("instance %d KKT residual %.3e", trial, kmax));
  }
  o.detail += fmt("100 instances, worst objective gap %.2e, worst KKT residual %.2e", worst_gap, worst_kkt);
  return o;
}

Outcome zf_correctness() {
  Outcome o;
  const auto cfg = published();
  double worst_leak = 0.0, worst_gain = 0.0;
  for (int draw = 0; draw < 100; ++draw) {
    const auto d = simulate_draw(cfg, 2 + draw % 6, 1000 + draw);
    const auto &layers = d.precoder.layers.layers;
    const CMatrix &b = d.reference.b;
    const double max_expected = (d.precoder.layers.gains().cwiseSqrt().cwiseProduct(d.reference.power.cwiseSqrt()))
                                    .maxCoeff();
    for (int l = 0; l < static_cast<int>(d.decomps.size()); ++l) {
      const CMatrix eff = d.decomps[l].u.adjoint() * d.channel.per_ue[l] * b;
      double signal = 0.0, leak = 0.0;
      for (int i = 0; i < static_cast<int>(layers.size()); ++i) {
        if (layers[i].ue != l) continue;
        const CRowVector row = eff.row(layers[i].index);
        for (int j = 0; j < static_cast<int>(layers.size()); ++j) {
          const double mag2 = std::norm(row(j));
          if (layers[j].ue == l) signal += mag2;
          else leak += mag2;
        }
        const double expected = std::sqrt(layers[i].gain) * std::sqrt(d.reference.power(i));
        const double err = std::abs(row(i) - expected) / (expected > 0.0 ? expected : max_expected);
        worst_gain = std::max(worst_gain, err);
        o.require(err <= 1e-8, fmt("draw %d layer %d gain error %.3e", draw, i, err));
      }
      if (signal == 0.0) continue;
      const double rel = std::sqrt(leak / signal);
      worst_leak = std::max(worst_leak, rel);
      o.require(rel <= 1e-8, fmt("draw %d UE %d interference %.3e", draw, l, rel));
    }
  }
  o.detail += fmt("100 draws, worst interference %.2e, worst gain error %.2e", worst_leak, worst_gain);
  return o;
}

Outcome channel_oracle() {
  Outcome o;
  std::mt19937_64 rng(8080);
  std::uniform_int_distribution<int> pos(1, 4), nonneg(0, 4);
  const PhysicalParams p;
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    SceneConfig c;
    c.bs_elements = pos(rng);
    c.ue_elements = pos(rng);
    c.num_ues = pos(rng);
    c.ris_elements = pos(rng);
    c.num_scatterers = nonneg(rng);
    c.num_ris = nonneg(rng);
    c.seed = rng();
    const Scene sc = build_scene(c, p);
    const auto fading = FadingDraw::draw(c.num_scatterers, c.num_ris, rng());
    const auto ris = configure_ris(sc, assign_ris(sc, RisAssignment::round_robin));
    const auto ch = build_channel(sc, fading, ris);
    for (int l = 0; l < c.num_ues; ++l) {
      const CMatrix naive = oracle::naive_channel(sc, fading, ris, l);
      const double err = (ch.per_ue[l] - naive).norm() / std::max(naive.norm(), 1e-300);
      worst = std::max(worst, err);
      o.require(err <= 1e-12, fmt("instance %d UE %d error %.3e", trial, l, err));
    }
  }
  o.detail += fmt("50 instances, worst relative error %.2e", worst);
  return o;
}

Outcome trace_identities() {
  Outcome o;
  std::mt19937_64 rng(6060);
  std::uniform_int_distribution<int> ues(1, 4), elems(1, 4), ant(8, 64);
  double worst_tx = 0.0, worst_probe = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int m = ant(rng), l_count = ues(rng), n = elems(rng);
    std::vector<UeDecomposition> decomps;
    for (int l = 0; l < l_count; ++l) decomps.push_back(decompose_ue(test::random_cmatrix(rng, n, m)));
    std::vector<int> req(l_count);
    for (int &r : req) r = std::uniform_int_distribution<int>(1, std::min(n, m / l_count))(rng);
    const auto p = build_precoder(decomps, select_layers(decomps, req));
    const RVector power = test::random_positive(rng, p.layers.total(), 0.0, 50.0);
    const auto bf = assemble_bf(p, power);

    const CMatrix gram_inv = (p.v_tilde * p.v_tilde.adjoint()).inverse();
    const double tx_trace = (power.asDiagonal() * gram_inv).trace().real();
    const double tx_err = std::abs(bf.transmit_power() - tx_trace) / tx_trace;
    worst_tx = std::max(worst_tx, tx_err);
    o.require(tx_err <= 1e-10, fmt("instance %d transmit trace error %.3e", trial, tx_err));

    Scene sc;
    sc.wavelength = PhysicalParams{}.wavelength();
    sc.bs_elements = linear_array(Vec3::Zero(), m, 0.5 * sc.wavelength);
    const auto probes = ProbeSet::on_circle(sc, sample_circle(Vec3::Zero(), 50.0, 36));
    const CMatrix pinv = p.v_tilde.adjoint() * gram_inv;
    for (Eigen::Index q = 0; q < probes.rows.rows(); ++q) {
      const double norm_form = (probes.rows.row(q) * bf.b).squaredNorm();
      const CRowVector hv = probes.rows.row(q) * pinv;
      const double trace_form = (power.asDiagonal() * (hv.adjoint() * hv)).trace().real();
      const double err = std::abs(norm_form - trace_form) / trace_form;
      worst_probe = std::max(worst_probe, err);
      o.require(err <= 1e-10, fmt("instance %d probe %d trace error %.3e", trial, static_cast<int>(q), err));
    }
  }
  o.detail += fmt("100 instances, worst transmit-power error %.2e, worst probe error %.2e", worst_tx, worst_probe);
  return o;
}

Outcome trend_reproduction() {
  Outcome o;
  for (const auto &[label, base] : {std::pair{"published", published()}, std::pair{"binding", binding()}}) {
    auto cfg = base;
    cfg.sweep_ues = {2, 3, 4, 5, 6, 7};
    cfg.n_draws = 300;
    const auto result = run_sweep(cfg);
    const auto manifest = sweep_manifest(cfg, result);
    o.require(result.summary.failed_draws == 0, fmt("%s: %d failed draws", label, result.summary.failed_draws));
    o.require(!manifest["discrepancy_notes"].empty(), fmt("%s: manifest lacks discrepancy notes", label));
    double min_pct = 100.0, min_red_pct = 100.0;
    for (int l : cfg.sweep_ues) {
      const auto *red = result.summary.find(l, Scheme::reduced);
      const auto *enh = result.summary.find(l, Scheme::enhanced);
      if (red == nullptr || enh == nullptr) {
        o.require(false, fmt("%s L=%d missing rows", label, l));
        continue;
      }
      o.require(enh->mean_power_w >= red->mean_power_w, fmt("%s L=%d enhanced power below reduced", label, l));
      o.require(enh->mean_capacity_mbps >= red->mean_capacity_mbps,
                fmt("%s L=%d enhanced capacity below reduced", label, l));
      o.require(enh->capacity_pct_vs_ref >= 60.0,
                fmt("%s L=%d enhanced capacity %.2f%% of reference", label, l, enh->capacity_pct_vs_ref));
      min_pct = std::min(min_pct, enh->capacity_pct_vs_ref);
      min_red_pct = std::min(min_red_pct, red->capacity_pct_vs_ref);
      std::printf("    %-9s L=%d  power W ref/red/enh %.2f/%.2f/%.2f  capacity %% red/enh %.2f/%.2f\n", label, l,
                  result.summary.find(l, Scheme::reference)->mean_power_w, red->mean_power_w, enh->mean_power_w,
                  red->capacity_pct_vs_ref, enh->capacity_pct_vs_ref);
    }
    o.detail += fmt("%s min enhanced capacity %.2f%% (reduced %.2f%%) vs published >70%%, target >=60%%; ", label,
                    min_pct, min_red_pct);
  }
  return o;
}

Outcome determinism() {
  Outcome o;
  auto cfg = binding();
  cfg.sweep_ues = {2, 3, 4, 5, 6, 7};
  cfg.n_draws = 40;
  const auto root = fs::temp_directory_path() / "risemf_acceptance_determinism";
  fs::remove_all(root);
  std::vector<std::string> summaries;
  for (const auto &[name, workers] : {std::pair{"a", 1}, std::pair{"b", 1}, std::pair{"c", 4}}) {
    write_sweep_artifacts(cfg, run_sweep(cfg, workers), root / name);
    summaries.push_back(slurp(root / name / "summary.csv"));
  }
  o.require(!summaries[0].empty(), "empty summary");
  o.require(summaries[0] == summaries[1], "repeat run differs");
  o.require(summaries[0] == summaries[2], "4 workers differ from 1");
  o.require(slurp(root / "a" / "draws.csv") == slurp(root / "c" / "draws.csv"), "draw records differ");
  o.detail += fmt("summary.csv of %zu bytes identical across 2 serial runs and 4 workers", summaries[0].size());
  fs::remove_all(root);
  return o;
}

Outcome enhanced_behavior() {
  Outcome o;
  const auto cfg = binding();
  const double th = cfg.physical.emf_threshold_w;
  int exceeding = 0, max_steps = 0, draw = 0;
  for (; exceeding < 200 && draw < 2000; ++draw) {
    const int ues = 2 + draw % 6;
    DrawResult d;
    try {
      d = simulate_draw(cfg, ues, 5000 + draw);
    } catch (const std::exception &e) {
      o.require(false, fmt("draw %d: %s", draw, e.what()));
      continue;
    }
    if (d.reference_profile.max_power <= th * (1 + cfg.enhanced.margin)) continue;
    ++exceeding;
    const auto &steps = d.enhanced.trace.steps;
    const int cap = 10 * d.precoder.layers.total() * static_cast<int>(d.circle.points.size());
    max_steps = std::max(max_steps, static_cast<int>(steps.size()));
    o.require(static_cast<int>(steps.size()) < cap, fmt("draw %d hit the iteration cap", draw));
    o.require(circle_max(d, d.enhanced.bf) <= th * (1 + 1e-9), fmt("draw %d not compliant", draw));
    for (Eigen::Index i = 0; i < d.reference.power.size(); ++i)
      o.require(d.enhanced.bf.power(i) <= d.reference.power(i), fmt("draw %d layer %d power grew", draw, (int)i));
    for (std::size_t s = 1; s < steps.size(); ++s)
      o.require(steps[s].p_qmax <= steps[s - 1].p_qmax, fmt("draw %d step %zu P_Qmax increased", draw, s));
  }
  o.require(exceeding == 200, fmt("only %d exceeding draws found", exceeding));
  o.detail += fmt("%d exceeding draws, longest trace %d steps", exceeding, max_steps);
  return o;
}

} // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 EMF compliance on the safety circle", emf_compliance},
      {"2 reduced scheme is tight at the threshold", reduced_tightness},
      {"3 water-filling optimality", waterfill_optimality},
      {"4 zero-forcing correctness", zf_correctness},
      {"5 channel model matches per-path summation", channel_oracle},
      {"6 trace identities", trace_identities},
      {"7 capacity and power trends", trend_reproduction},
      {"8 deterministic sweep output", determinism},
      {"9 enhanced algorithm behavior", enhanced_behavior},
  };
  int failures = 0;
  for (const auto &[name, run] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception &e) {
      o.passed = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s  [%s] %s (%.1f s)\n", o.passed ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += !o.passed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
