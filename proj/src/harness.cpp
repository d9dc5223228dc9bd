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
#include "risemf/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "risemf/random.hpp"

#ifndef RISEMF_VERSION
#define RISEMF_VERSION "0.0.0"
#endif

namespace risemf {

using nlohmann::json;

std::string version_string() { return RISEMF_VERSION; }

namespace {

void reject_unknown(const json &obj, const std::set<std::string> &allowed, const std::string &where) {
  if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto &[key, _] : obj.items())
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

template <typename T>
void read(const json &obj, const char *key, T &out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception &e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

std::string policy_name(LayerPolicy p) { return p == LayerPolicy::fixed ? "fixed" : "joint"; }
std::string assignment_name(RisAssignment a) {
  return a == RisAssignment::round_robin ? "round_robin" : "nearest_ue";
}

} // namespace

ExperimentConfig config_from_json(const json &doc) {
  ExperimentConfig cfg;
  reject_unknown(doc, {"physical", "scene", "layers", "enhanced", "sweep", "heatmap", "seed", "output_dir"},
                 "config");

  if (doc.contains("physical")) {
    const auto &p = doc["physical"];
    reject_unknown(p, {"carrier_frequency_hz", "bandwidth_hz", "noise_power_dbm", "max_power_w",
                       "emf_threshold_dbm", "safety_radius_m", "n_circle_samples", "audit_factor", "log_base"},
                   "physical");
    read(p, "carrier_frequency_hz", cfg.physical.carrier_frequency_hz);
    read(p, "bandwidth_hz", cfg.physical.bandwidth_hz);
    read(p, "max_power_w", cfg.physical.max_power_w);
    read(p, "safety_radius_m", cfg.physical.safety_radius_m);
    read(p, "n_circle_samples", cfg.physical.n_circle_samples);
    read(p, "audit_factor", cfg.audit_factor);
    if (p.contains("noise_power_dbm")) cfg.physical.noise_power_w = dbm_to_watts(p["noise_power_dbm"].get<double>());
    if (p.contains("emf_threshold_dbm"))
      cfg.physical.emf_threshold_w = dbm_to_watts(p["emf_threshold_dbm"].get<double>());
    if (p.contains("log_base")) {
      const auto base = p["log_base"].get<std::string>();
      if (base == "2") cfg.log_base = LogBase::two;
      else if (base == "e") cfg.log_base = LogBase::natural;
      else throw ConfigError("log_base must be \"2\" or \"e\"");
    }
  }

  if (doc.contains("scene")) {
    const auto &s = doc["scene"];
    reject_unknown(s, {"bs_elements", "ue_elements", "ris_elements", "scatterers", "ris", "placement_min_m",
                       "placement_max_m", "ris_assignment"},
                   "scene");
    read(s, "bs_elements", cfg.scene.bs_elements);
    read(s, "ue_elements", cfg.scene.ue_elements);
    read(s, "ris_elements", cfg.scene.ris_elements);
    read(s, "scatterers", cfg.scene.num_scatterers);
    read(s, "ris", cfg.scene.num_ris);
    read(s, "placement_min_m", cfg.scene.placement_min_m);
    read(s, "placement_max_m", cfg.scene.placement_max_m);
    if (s.contains("ris_assignment")) {
      const auto a = s["ris_assignment"].get<std::string>();
      if (a == "round_robin") cfg.ris_assignment = RisAssignment::round_robin;
      else if (a == "nearest_ue") cfg.ris_assignment = RisAssignment::nearest_ue;
      else throw ConfigError("ris_assignment must be round_robin or nearest_ue");
    }
  }

  if (doc.contains("layers")) {
    const auto &l = doc["layers"];
    reject_unknown(l, {"policy", "per_ue", "admission_condition", "max_condition"}, "layers");
    if (l.contains("policy")) {
      const auto p = l["policy"].get<std::string>();
      if (p == "fixed") cfg.layers.policy = LayerPolicy::fixed;
      else if (p == "joint") cfg.layers.policy = LayerPolicy::joint;
      else throw ConfigError("layers.policy must be fixed or joint");
    }
    read(l, "per_ue", cfg.layers.per_ue);
    read(l, "admission_condition", cfg.layers.admission_condition);
    read(l, "max_condition", cfg.layers.max_condition);
  }

  if (doc.contains("enhanced")) {
    const auto &e = doc["enhanced"];
    reject_unknown(e, {"max_iterations", "margin"}, "enhanced");
    read(e, "max_iterations", cfg.enhanced.max_iterations);
    read(e, "margin", cfg.enhanced.margin);
  }

  if (doc.contains("sweep")) {
    const auto &w = doc["sweep"];
    reject_unknown(w, {"ues", "draws", "freeze_geometry", "schemes"}, "sweep");
    read(w, "ues", cfg.sweep_ues);
    read(w, "draws", cfg.n_draws);
    read(w, "freeze_geometry", cfg.freeze_geometry);
    if (w.contains("schemes")) {
      cfg.schemes.clear();
      for (const auto &name : w["schemes"]) cfg.schemes.push_back(scheme_from_string(name.get<std::string>()));
    }
  }

  if (doc.contains("heatmap")) {
    const auto &h = doc["heatmap"];
    reject_unknown(h, {"enabled", "half_extent_m", "resolution_m", "floor_dbm", "showcase_ues", "showcase_draw"},
                   "heatmap");
    read(h, "enabled", cfg.heatmap.enabled);
    read(h, "half_extent_m", cfg.heatmap.half_extent_m);
    read(h, "resolution_m", cfg.heatmap.resolution_m);
    read(h, "floor_dbm", cfg.heatmap.floor_dbm);
    read(h, "showcase_ues", cfg.heatmap.showcase_ues);
    read(h, "showcase_draw", cfg.heatmap.showcase_draw);
  }

  read(doc, "seed", cfg.seed);
  read(doc, "output_dir", cfg.output_dir);

  cfg.physical.validate();
  if (cfg.audit_factor < 1) throw ConfigError("audit_factor must be >= 1");
  if (cfg.n_draws < 1) throw ConfigError("sweep.draws must be >= 1");
  if (cfg.sweep_ues.empty()) throw ConfigError("sweep.ues must not be empty");
  for (int l : cfg.sweep_ues)
    if (l < 1) throw ConfigError("sweep.ues entries must be >= 1");
  if (cfg.schemes.empty()) throw ConfigError("sweep.schemes must not be empty");
  if (cfg.layers.per_ue < 1) throw ConfigError("layers.per_ue must be >= 1");
  if (!(cfg.enhanced.margin >= 0.0)) throw ConfigError("enhanced.margin must be >= 0");
  if (!(cfg.heatmap.resolution_m > 0.0) || !(cfg.heatmap.half_extent_m > 0.0))
    throw ConfigError("heatmap extent and resolution must be positive");
  return cfg;
}

json config_to_json(const ExperimentConfig &c) {
  json doc;
  doc["physical"] = {{"carrier_frequency_hz", c.physical.carrier_frequency_hz},
                     {"bandwidth_hz", c.physical.bandwidth_hz},
                     {"noise_power_dbm", watts_to_dbm(c.physical.noise_power_w)},
                     {"max_power_w", c.physical.max_power_w},
                     {"emf_threshold_dbm", watts_to_dbm(c.physical.emf_threshold_w)},
                     {"safety_radius_m", c.physical.safety_radius_m},
                     {"n_circle_samples", c.physical.n_circle_samples},
                     {"audit_factor", c.audit_factor},
                     {"log_base", c.log_base == LogBase::two ? "2" : "e"}};
  doc["scene"] = {{"bs_elements", c.scene.bs_elements},
                  {"ue_elements", c.scene.ue_elements},
                  {"ris_elements", c.scene.ris_elements},
                  {"scatterers", c.scene.num_scatterers},
                  {"ris", c.scene.num_ris},
                  {"placement_min_m", c.scene.placement_min_m},
                  {"placement_max_m", c.scene.placement_max_m},
                  {"ris_assignment", assignment_name(c.ris_assignment)}};
  doc["layers"] = {{"policy", policy_name(c.layers.policy)},
                   {"per_ue", c.layers.per_ue},
                   {"admission_condition", c.layers.admission_condition},
                   {"max_condition", c.layers.max_condition}};
  doc["enhanced"] = {{"max_iterations", c.enhanced.max_iterations}, {"margin", c.enhanced.margin}};
  json schemes = json::array();
  for (Scheme s : c.schemes) schemes.push_back(to_string(s));
  doc["sweep"] = {{"ues", c.sweep_ues},
                  {"draws", c.n_draws},
                  {"freeze_geometry", c.freeze_geometry},
                  {"schemes", schemes}};
  doc["heatmap"] = {{"enabled", c.heatmap.enabled},
                    {"half_extent_m", c.heatmap.half_extent_m},
                    {"resolution_m", c.heatmap.resolution_m},
                    {"floor_dbm", c.heatmap.floor_dbm},
                    {"showcase_ues", c.heatmap.showcase_ues},
                    {"showcase_draw", c.heatmap.showcase_draw}};
  doc["seed"] = c.seed;
  doc["output_dir"] = c.output_dir;
  return doc;
}

ExperimentConfig load_config(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception &e) {
    throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
  }
  return config_from_json(doc);
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, std::uint64_t config_seed) {
  if (flag) return *flag;
  if (const char *env = std::getenv("RIS_EMF_SEED"); env && *env) {
    char *end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0') throw ConfigError("RIS_EMF_SEED must be an unsigned integer");
    return v;
  }
  return config_seed;
}

DrawSeeds draw_seeds(const ExperimentConfig &config, int num_ues, int draw_index) {
  DrawSeeds s;
  s.draw = derive_seed({config.seed, static_cast<std::uint64_t>(num_ues), static_cast<std::uint64_t>(draw_index)});
  s.geometry = config.freeze_geometry
                   ? derive_seed({config.seed, static_cast<std::uint64_t>(num_ues), kGeometryStream})
                   : derive_seed({s.draw, kGeometryStream});
  s.fading = derive_seed({s.draw, kFadingStream});
  return s;
}

DrawResult simulate_draw(const ExperimentConfig &config, int num_ues, int draw_index) {
  const auto seeds = draw_seeds(config, num_ues, draw_index);
  const auto &phys = config.physical;

  SceneConfig sc = config.scene;
  sc.num_ues = num_ues;
  sc.seed = seeds.geometry;

  DrawResult d;
  d.scene = build_scene(sc, phys);
  d.fading = FadingDraw::draw(sc.num_scatterers, sc.num_ris, seeds.fading);
  d.ris = configure_ris(d.scene, assign_ris(d.scene, config.ris_assignment));
  d.channel = build_channel(d.scene, d.fading, d.ris);

  for (const auto &h : d.channel.per_ue) d.decomps.push_back(decompose_ue(h));
  LayerMap layers;
  if (config.layers.policy == LayerPolicy::fixed) {
    const std::vector<int> requested(static_cast<std::size_t>(num_ues), config.layers.per_ue);
    layers = select_layers(d.decomps, requested);
  } else {
    layers = select_layers_joint(d.decomps, config.layers.per_ue, config.layers.admission_condition);
  }
  d.precoder = build_precoder(d.decomps, layers, config.layers.max_condition);

  d.circle = ProbeSet::on_circle(d.scene, sample_safety_circle(d.scene, phys));
  d.audit = ProbeSet::on_circle(
      d.scene, sample_circle(d.scene.bs_center, phys.safety_radius_m, config.audit_factor * phys.n_circle_samples));

  d.reference = reference_bf(d.precoder, phys);
  d.reference_profile = exposure(d.precoder, d.reference, d.circle);
  d.reduced = reduced_bf(d.precoder, d.reference, d.reference_profile, phys.emf_threshold_w);
  d.enhanced = enhanced_bf(d.precoder, d.reference, d.circle, phys.emf_threshold_w, config.enhanced);

  DrawRecord &r = d.record;
  r.num_ues = num_ues;
  r.draw_index = draw_index;
  r.seed = seeds.draw;
  r.layers = d.precoder.layers.total();
  r.alpha = d.reduced.alpha;
  r.enhanced_iterations = static_cast<int>(d.enhanced.trace.steps.size());
  const RVector gains = d.precoder.layers.gains();
  auto fill = [&](SchemeMetrics &m, const BeamformingMatrix &bf) {
    m.transmit_power_w = bf.transmit_power();
    m.capacity_mbps = capacity(bf.power, gains, phys.bandwidth_hz, phys.noise_power_w, config.log_base) / 1e6;
    m.max_circle_power_w = (d.circle.rows * bf.b).rowwise().squaredNorm().maxCoeff();
    m.audit_max_power_w = (d.audit.rows * bf.b).rowwise().squaredNorm().maxCoeff();
  };
  fill(r.reference, d.reference);
  fill(r.reduced, d.reduced.bf);
  fill(r.enhanced, d.enhanced.bf);
  return d;
}

DrawRecord run_draw(const ExperimentConfig &config, int num_ues, int draw_index) {
  try {
    return simulate_draw(config, num_ues, draw_index).record;
  } catch (const std::exception &e) {
    DrawRecord r;
    r.num_ues = num_ues;
    r.draw_index = draw_index;
    r.seed = draw_seeds(config, num_ues, draw_index).draw;
    r.failed = true;
    r.failure = e.what();
    return r;
  }
}

SweepResult run_sweep(const ExperimentConfig &config, int workers) {
  struct Job {
    int num_ues;
    int draw;
  };
  std::vector<Job> jobs;
  for (int l : config.sweep_ues)
    for (int i = 0; i < config.n_draws; ++i) jobs.push_back({l, i});

  SweepResult result;
  result.records.resize(jobs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++)
      result.records[j] = run_draw(config, jobs[j].num_ues, jobs[j].draw);
  };

  const int n = std::max(1, workers);
  if (n == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < n; ++w) pool.emplace_back(work);
  }
  result.summary = summarize_sweep(result.records, config.schemes);
  return result;
}

void prepare_output_dir(const std::filesystem::path &dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
  const auto probe = dir / ".write_probe";
  {
    std::ofstream out(probe);
    if (!out || !(out << "ok")) throw ConfigError("output directory " + dir.string() + " is not writable");
  }
  std::filesystem::remove(probe, ec);
}

double circle_exposure_bound(const ExperimentConfig &config) {
  const auto &p = config.physical;
  const double lambda = p.wavelength();
  const auto elements = linear_array(Vec3::Zero(), config.scene.bs_elements, 0.5 * lambda);
  double gain = 0.0;
  for (const auto &e : elements) {
    const double d = p.safety_radius_m - e.norm();
    if (d <= 0.0) return std::numeric_limits<double>::infinity();
    const double a = lambda / (4.0 * kPi * d);
    gain += a * a;
  }
  return gain * p.max_power_w;
}

json sweep_manifest(const ExperimentConfig &config, const SweepResult &result) {
  json m;
  m["version"] = version_string();
  m["config"] = config_to_json(config);
  m["master_seed"] = config.seed;
  m["total_draws"] = result.summary.total_draws;
  m["failed_draws"] = result.summary.failed_draws;

  const double bound = circle_exposure_bound(config);
  m["circle_exposure_bound_dbm"] = watts_to_dbm(bound);
  m["emf_threshold_dbm"] = watts_to_dbm(config.physical.emf_threshold_w);
  m["threshold_can_bind"] = bound > config.physical.emf_threshold_w;

  json notes = json::array();
  notes.push_back("Absolute values are not comparable with published figures: UE, scatterer and RIS placement "
                  "laws, the noise power, the per-UE layer count and the circle sampling density are "
                  "configuration defaults, not published values.");
  notes.push_back("Scatterer and RIS path gains carry no distance-dependent loss, so post-combining SNRs are "
                  "very high and capacity ratios between schemes stay close to 100%.");
  notes.push_back("All UEs share the BS-side steering vectors of the S scatterers and Z RISs, so the stacked "
                  "channel has rank at most S+Z; the joint layer policy admits at most that many layers.");
  if (!(bound > config.physical.emf_threshold_w))
    notes.push_back("The free-space exposure bound on the safety circle lies below the EMF threshold, so the "
                    "reference beamformer is always compliant and the reduced and enhanced schemes coincide "
                    "with it in this configuration.");
  m["discrepancy_notes"] = notes;

  json ratios = json::array();
  for (const auto &row : result.summary.rows)
    if (row.scheme == Scheme::enhanced)
      ratios.push_back({{"L", row.num_ues},
                        {"enhanced_capacity_pct_vs_ref", row.capacity_pct_vs_ref},
                        {"enhanced_power_pct_vs_ref", row.power_pct_vs_ref}});
  m["enhanced_vs_reference"] = ratios;
  m["published_enhanced_capacity_pct_min"] = 70.0;
  m["acceptance_enhanced_capacity_pct_min"] = 60.0;
  return m;
}

void write_sweep_artifacts(const ExperimentConfig &config, const SweepResult &result,
                           const std::filesystem::path &dir) {
  prepare_output_dir(dir);
  {
    std::ofstream out(dir / "summary.csv");
    write_summary_csv(result.summary, out);
  }
  {
    std::ofstream out(dir / "draws.csv");
    write_draws_csv(result.records, out);
  }
  std::ofstream out(dir / "manifest.json");
  out << sweep_manifest(config, result).dump(2) << '\n';
}

void write_draw_artifacts(const ExperimentConfig &config, const DrawResult &draw,
                          const std::filesystem::path &dir) {
  prepare_output_dir(dir);
  const auto &phys = config.physical;
  const auto region =
      GridRegion::centered(draw.scene.bs_center, config.heatmap.half_extent_m, config.heatmap.resolution_m);

  json compliance = json::array();
  const BeamformingMatrix *schemes[] = {&draw.reference, &draw.reduced.bf, &draw.enhanced.bf};
  for (const auto *bf : schemes) {
    const auto name = to_string(bf->scheme);
    if (config.heatmap.enabled) {
      const auto heat = render_heatmap(*bf, draw.scene, region, config.heatmap.floor_dbm);
      const auto exceed = exceedance_map(heat, phys.emf_threshold_w, draw.scene.bs_center, phys.safety_radius_m);
      std::ofstream csv(dir / ("heatmap_" + name + ".csv"));
      write_heatmap_csv(heat, csv);
      std::ofstream svg(dir / ("heatmap_" + name + ".svg"));
      write_heatmap_svg(heat, svg);
      std::ofstream ecsv(dir / ("exceedance_" + name + ".csv"));
      write_exceedance_csv(exceed, ecsv);
      std::ofstream esvg(dir / ("exceedance_" + name + ".svg"));
      write_exceedance_svg(exceed, esvg);
    }
    const auto &m = draw.record.metrics(bf->scheme);
    std::optional<double> alpha;
    std::optional<int> iterations;
    if (bf->scheme == Scheme::reduced) alpha = draw.reduced.alpha;
    if (bf->scheme == Scheme::enhanced) iterations = draw.record.enhanced_iterations;
    compliance.push_back(
        compliance_json(*bf, m.max_circle_power_w, phys.emf_threshold_w, m.audit_max_power_w, alpha, iterations));
  }
  std::ofstream out(dir / "compliance.json");
  out << compliance.dump(2) << '\n';
}

namespace {

// U_l^H H_l B restricted to the rows of the layers each UE decodes.
// Returns {worst interference / signal ratio, worst relative gain error}.
std::pair<double, double> zf_residuals(const DrawResult &d, const BeamformingMatrix &bf) {
  const auto &layers = d.precoder.layers.layers;
  double interference = 0.0;
  double gain_error = 0.0;
  for (std::size_t l = 0; l < d.decomps.size(); ++l) {
    const CMatrix eff = d.decomps[l].u.adjoint() * d.channel.per_ue[l] * bf.b;
    double signal = 0.0;
    for (std::size_t i = 0; i < layers.size(); ++i)
      if (layers[i].ue == static_cast<int>(l)) signal = std::max(signal, std::abs(eff(layers[i].index, i)));
    for (std::size_t i = 0; i < layers.size(); ++i) {
      if (layers[i].ue != static_cast<int>(l)) {
        for (std::size_t j = 0; j < layers.size(); ++j)
          if (layers[j].ue == static_cast<int>(l) && signal > 0)
            interference = std::max(interference, std::abs(eff(layers[j].index, i)) / signal);
        continue;
      }
      const double expected = std::sqrt(layers[i].gain * bf.power(i));
      if (expected > 0)
        gain_error = std::max(gain_error, std::abs(std::abs(eff(layers[i].index, i)) - expected) / expected);
    }
  }
  return {interference, gain_error};
}

std::string num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

} // namespace

std::vector<CheckResult> run_validation(const ExperimentConfig &config) {
  std::vector<CheckResult> checks;
  auto add = [&](std::string name, bool ok, std::string detail) {
    checks.push_back({std::move(name), ok, std::move(detail)});
  };
  const auto &phys = config.physical;

  for (int num_ues : config.sweep_ues) {
    const std::string tag = "L=" + std::to_string(num_ues) + " ";
    DrawResult d;
    try {
      d = simulate_draw(config, num_ues, 0);
    } catch (const std::exception &e) {
      add(tag + "pipeline", false, e.what());
      continue;
    }
    add(tag + "pipeline", true, std::to_string(d.precoder.layers.total()) + " layers");

    double recon = 0.0;
    for (std::size_t l = 0; l < d.decomps.size(); ++l) {
      const auto &u = d.decomps[l];
      const CMatrix h = u.u * u.singular_values.cast<cdouble>().asDiagonal() * u.v.adjoint();
      recon = std::max(recon, (h - d.channel.per_ue[l]).norm() / d.channel.per_ue[l].norm());
    }
    add(tag + "svd reconstruction", recon <= 1e-10, num(recon));

    const double tx = d.reference.transmit_power();
    add(tag + "reference power = Pmax", std::abs(tx - phys.max_power_w) <= 1e-9 * phys.max_power_w,
        num(tx) + " W");

    const double trace_cost = d.reference.power.dot(d.precoder.coupling);
    add(tag + "trace identity tr[BB^H]", std::abs(trace_cost - tx) <= 1e-10 * tx, num(trace_cost - tx));

    const auto [interference, gain_error] = zf_residuals(d, d.reference);
    add(tag + "zf interference", interference <= 1e-8, num(interference));
    add(tag + "zf per-layer gain", gain_error <= 1e-8, num(gain_error));

    const auto wf = waterfill(d.precoder.layers.gains(), d.precoder.coupling, phys.max_power_w, phys.noise_power_w);
    double kkt = 0.0;
    const RVector gains = d.precoder.layers.gains();
    for (Eigen::Index i = 0; i < gains.size(); ++i) {
      const double floor = phys.noise_power_w / gains(i);
      const double mu_c = d.precoder.coupling(i) / wf.water_level;
      if (wf.power(i) > 0) kkt = std::max(kkt, std::abs(mu_c * (wf.power(i) + floor) - 1.0));
      else kkt = std::max(kkt, std::max(0.0, 1.0 - mu_c * floor));
    }
    add(tag + "water-filling KKT", kkt <= 1e-8, num(kkt));

    const auto red = constrained_problem_check(d.precoder, d.reduced.bf, d.circle, phys);
    add(tag + "reduced compliance", red.feasible(1e-9, phys), "alpha=" + num(d.reduced.alpha));
    if (d.reduced.alpha < 1.0)
      add(tag + "reduced tightness",
          std::abs(red.max_circle_power - phys.emf_threshold_w) <= 1e-9 * phys.emf_threshold_w,
          num(red.max_circle_power / phys.emf_threshold_w - 1.0));

    const auto enh = constrained_problem_check(d.precoder, d.enhanced.bf, d.circle, phys);
    add(tag + "enhanced compliance", enh.feasible(1e-9, phys),
        std::to_string(d.enhanced.trace.steps.size()) + " iterations");
    bool monotone = true;
    for (Eigen::Index i = 0; i < d.reference.power.size(); ++i)
      monotone = monotone && d.enhanced.bf.power(i) <= d.reference.power(i);
    add(tag + "enhanced powers <= reference", monotone, "");
  }
  return checks;
}

} // namespace risemf
