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
#include "risemf/evaluation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>

#include "risemf/channel.hpp"

namespace risemf {

namespace {

std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Rows per leaf of the pairwise reduction tree.
constexpr std::size_t kLeafSize = 32;

RunningStats reduce_pairwise(const std::vector<double> &values) {
  std::vector<RunningStats> level;
  for (std::size_t i = 0; i < values.size(); i += kLeafSize) {
    RunningStats leaf;
    for (std::size_t j = i; j < std::min(values.size(), i + kLeafSize); ++j) leaf.add(values[j]);
    level.push_back(leaf);
  }
  while (level.size() > 1) {
    std::vector<RunningStats> next;
    for (std::size_t i = 0; i < level.size(); i += 2) {
      RunningStats s = level[i];
      if (i + 1 < level.size()) s.merge(level[i + 1]);
      next.push_back(s);
    }
    level.swap(next);
  }
  return level.empty() ? RunningStats{} : level.front();
}

} // namespace

double to_dbm_floored(double watts, double floor_dbm) {
  if (!(watts > 0.0)) return floor_dbm;
  return std::max(floor_dbm, 10.0 * std::log10(watts) + 30.0);
}

GridRegion GridRegion::centered(const Vec3 &center, double half_extent, double resolution) {
  return {center.x() - half_extent, center.y() - half_extent, center.x() + half_extent,
          center.y() + half_extent, resolution};
}

Vec3 HeatmapGrid::cell_center(int ix, int iy) const {
  return {x0 + (ix + 0.5) * resolution, y0 + (iy + 0.5) * resolution, 0.0};
}

bool HeatmapGrid::masked(int ix, int iy) const { return std::isnan(at(ix, iy)); }

int ExceedanceMap::exceed_count() const {
  return static_cast<int>(std::count(cells.begin(), cells.end(), CellState::exceeds));
}

HeatmapGrid render_heatmap(const BeamformingMatrix &bf, const Scene &scene, const GridRegion &region,
                           double floor_dbm) {
  if (!(region.resolution > 0.0)) throw ConfigError("heatmap resolution must be positive");
  if (!(region.x_max > region.x_min && region.y_max > region.y_min))
    throw ConfigError("heatmap region is empty");

  HeatmapGrid grid;
  grid.x0 = region.x_min;
  grid.y0 = region.y_min;
  grid.resolution = region.resolution;
  grid.nx = static_cast<int>(std::lround((region.x_max - region.x_min) / region.resolution));
  grid.ny = static_cast<int>(std::lround((region.y_max - region.y_min) / region.resolution));
  grid.scheme = bf.scheme;
  grid.dbm.assign(static_cast<std::size_t>(grid.nx) * grid.ny, 0.0);

  const double half = 0.5 * region.resolution;
  for (int iy = 0; iy < grid.ny; ++iy) {
    for (int ix = 0; ix < grid.nx; ++ix) {
      const Vec3 q = grid.cell_center(ix, iy);
      double &cell = grid.dbm[static_cast<std::size_t>(iy) * grid.nx + ix];
      const bool holds_element = std::any_of(scene.bs_elements.begin(), scene.bs_elements.end(), [&](const Vec3 &e) {
        return std::abs(e.x() - q.x()) <= half && std::abs(e.y() - q.y()) <= half;
      });
      if (holds_element) {
        cell = std::numeric_limits<double>::quiet_NaN();
        continue;
      }
      cell = to_dbm_floored((probe_channel(scene, q) * bf.b).squaredNorm(), floor_dbm);
    }
  }
  return grid;
}

ExceedanceMap exceedance_map(const HeatmapGrid &heatmap, double emf_threshold_w, const Vec3 &center,
                             double radius) {
  ExceedanceMap map;
  map.x0 = heatmap.x0;
  map.y0 = heatmap.y0;
  map.resolution = heatmap.resolution;
  map.nx = heatmap.nx;
  map.ny = heatmap.ny;
  map.scheme = heatmap.scheme;
  map.cells.resize(heatmap.dbm.size());
  const double threshold_dbm = watts_to_dbm(emf_threshold_w);
  for (int iy = 0; iy < heatmap.ny; ++iy)
    for (int ix = 0; ix < heatmap.nx; ++ix) {
      const Vec3 q = heatmap.cell_center(ix, iy);
      auto &cell = map.cells[static_cast<std::size_t>(iy) * heatmap.nx + ix];
      if ((q - center).head<2>().norm() <= radius || heatmap.masked(ix, iy))
        cell = CellState::not_applicable;
      else
        cell = heatmap.at(ix, iy) > threshold_dbm ? CellState::exceeds : CellState::compliant;
    }
  return map;
}

const SchemeMetrics &DrawRecord::metrics(Scheme scheme) const {
  switch (scheme) {
  case Scheme::reduced: return reduced;
  case Scheme::enhanced: return enhanced;
  case Scheme::reference: break;
  }
  return reference;
}

void RunningStats::add(double x) {
  ++n_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

void RunningStats::merge(const RunningStats &other) {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double n = static_cast<double>(n_ + other.n_);
  const double delta = other.mean_ - mean_;
  mean_ += delta * static_cast<double>(other.n_) / n;
  m2_ += other.m2_ + delta * delta * static_cast<double>(n_) * static_cast<double>(other.n_) / n;
  n_ += other.n_;
}

double RunningStats::variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }

double RunningStats::standard_error() const {
  return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
}

const SweepRow *SweepSummary::find(int num_ues, Scheme scheme) const {
  for (const auto &row : rows)
    if (row.num_ues == num_ues && row.scheme == scheme) return &row;
  return nullptr;
}

SweepSummary summarize_sweep(std::span<const DrawRecord> records, std::span<const Scheme> schemes) {
  if (records.empty()) throw ConfigError("cannot summarise an empty sweep");

  std::vector<const DrawRecord *> sorted;
  sorted.reserve(records.size());
  for (const auto &r : records) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(), [](const DrawRecord *a, const DrawRecord *b) {
    return a->num_ues != b->num_ues ? a->num_ues < b->num_ues : a->draw_index < b->draw_index;
  });

  SweepSummary summary;
  summary.total_draws = static_cast<int>(records.size());
  std::map<int, std::vector<const DrawRecord *>> by_l;
  for (const auto *r : sorted) {
    if (r->failed) {
      ++summary.failed_draws;
      continue;
    }
    by_l[r->num_ues].push_back(r);
  }

  for (const auto &[num_ues, group] : by_l) {
    auto stats_of = [&](Scheme scheme, auto field) {
      std::vector<double> values;
      values.reserve(group.size());
      for (const auto *r : group) values.push_back(r->metrics(scheme).*field);
      return reduce_pairwise(values);
    };
    const auto ref_power = stats_of(Scheme::reference, &SchemeMetrics::transmit_power_w);
    const auto ref_cap = stats_of(Scheme::reference, &SchemeMetrics::capacity_mbps);
    for (Scheme scheme : schemes) {
      const auto power = stats_of(scheme, &SchemeMetrics::transmit_power_w);
      const auto cap = stats_of(scheme, &SchemeMetrics::capacity_mbps);
      SweepRow row;
      row.num_ues = num_ues;
      row.scheme = scheme;
      row.mean_capacity_mbps = cap.mean();
      row.se_capacity = cap.standard_error();
      row.mean_power_w = power.mean();
      row.se_power = power.standard_error();
      row.power_pct_vs_ref = ref_power.mean() > 0 ? 100.0 * power.mean() / ref_power.mean() : 0.0;
      row.capacity_pct_vs_ref = ref_cap.mean() > 0 ? 100.0 * cap.mean() / ref_cap.mean() : 0.0;
      row.n_draws = static_cast<int>(group.size());
      summary.rows.push_back(row);
    }
  }
  return summary;
}

void write_summary_csv(const SweepSummary &summary, std::ostream &os) {
  os << "L,scheme,mean_capacity_mbps,se_capacity,mean_power_w,se_power,power_pct_vs_ref,"
        "capacity_pct_vs_ref,n_draws\n";
  for (const auto &r : summary.rows)
    os << r.num_ues << ',' << to_string(r.scheme) << ',' << fmt_double(r.mean_capacity_mbps) << ','
       << fmt_double(r.se_capacity) << ',' << fmt_double(r.mean_power_w) << ',' << fmt_double(r.se_power)
       << ',' << fmt_double(r.power_pct_vs_ref) << ',' << fmt_double(r.capacity_pct_vs_ref) << ','
       << r.n_draws << '\n';
}

void write_draws_csv(std::span<const DrawRecord> records, std::ostream &os) {
  os << "L,draw,seed,failed,layers,alpha,enhanced_iterations";
  for (Scheme s : kAllSchemes) {
    const auto name = to_string(s);
    os << ',' << name << "_power_w," << name << "_capacity_mbps," << name << "_max_circle_w," << name
       << "_audit_max_w";
  }
  os << ",failure\n";
  for (const auto &r : records) {
    os << r.num_ues << ',' << r.draw_index << ',' << r.seed << ',' << (r.failed ? 1 : 0) << ',' << r.layers
       << ',' << fmt_double(r.alpha) << ',' << r.enhanced_iterations;
    for (Scheme s : kAllSchemes) {
      const auto &m = r.metrics(s);
      os << ',' << fmt_double(m.transmit_power_w) << ',' << fmt_double(m.capacity_mbps) << ','
         << fmt_double(m.max_circle_power_w) << ',' << fmt_double(m.audit_max_power_w);
    }
    std::string reason = r.failure;
    std::replace(reason.begin(), reason.end(), ',', ';');
    std::replace(reason.begin(), reason.end(), '\n', ' ');
    os << ',' << reason << '\n';
  }
}

namespace {

template <typename Grid>
void write_grid_header(const Grid &g, std::ostream &os) {
  os << "origin_x,origin_y,extent_x,extent_y,resolution,nx,ny,scheme\n"
     << fmt_double(g.x0) << ',' << fmt_double(g.y0) << ',' << fmt_double(g.nx * g.resolution) << ','
     << fmt_double(g.ny * g.resolution) << ',' << fmt_double(g.resolution) << ',' << g.nx << ',' << g.ny
     << ',' << to_string(g.scheme) << '\n';
}

struct Rgb {
  int r, g, b;
};

// Dark blue -> cyan -> green -> yellow -> red.
Rgb color_scale(double t) {
  static constexpr std::array<Rgb, 5> anchors{{{20, 20, 90}, {0, 160, 200}, {40, 180, 60}, {240, 220, 30}, {200, 20, 20}}};
  t = std::clamp(t, 0.0, 1.0) * (anchors.size() - 1);
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(t), anchors.size() - 2);
  const double f = t - static_cast<double>(i);
  auto lerp = [f](int a, int b) { return static_cast<int>(std::lround(a + f * (b - a))); };
  return {lerp(anchors[i].r, anchors[i + 1].r), lerp(anchors[i].g, anchors[i + 1].g),
          lerp(anchors[i].b, anchors[i + 1].b)};
}

std::string hex(const Rgb &c) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c.r, c.g, c.b);
  return buf;
}

// Row-run-length encoded raster; y grows upwards in the output image.
template <typename ColorOf>
void write_svg_raster(int nx, int ny, std::ostream &os, ColorOf color_of) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << nx << "\" height=\"" << ny
     << "\" viewBox=\"0 0 " << nx << ' ' << ny << "\" shape-rendering=\"crispEdges\">\n";
  for (int iy = 0; iy < ny; ++iy) {
    const int row = ny - 1 - iy;
    int start = 0;
    std::string current = color_of(0, iy);
    for (int ix = 1; ix <= nx; ++ix) {
      const std::string next = ix < nx ? color_of(ix, iy) : std::string();
      if (ix < nx && next == current) continue;
      os << "<rect x=\"" << start << "\" y=\"" << row << "\" width=\"" << ix - start
         << "\" height=\"1\" fill=\"" << current << "\"/>\n";
      start = ix;
      current = next;
    }
  }
  os << "</svg>\n";
}

} // namespace

void write_heatmap_csv(const HeatmapGrid &heatmap, std::ostream &os) {
  write_grid_header(heatmap, os);
  for (int iy = 0; iy < heatmap.ny; ++iy) {
    for (int ix = 0; ix < heatmap.nx; ++ix) os << (ix ? "," : "") << fmt_double(heatmap.at(ix, iy));
    os << '\n';
  }
}

void write_exceedance_csv(const ExceedanceMap &map, std::ostream &os) {
  write_grid_header(map, os);
  for (int iy = 0; iy < map.ny; ++iy) {
    for (int ix = 0; ix < map.nx; ++ix) {
      const auto c = map.at(ix, iy);
      os << (ix ? "," : "") << (c == CellState::not_applicable ? "na" : c == CellState::exceeds ? "1" : "0");
    }
    os << '\n';
  }
}

void write_heatmap_svg(const HeatmapGrid &heatmap, std::ostream &os, double lo_dbm, double hi_dbm) {
  // 64 colour bins keep the run-length encoding compact.
  write_svg_raster(heatmap.nx, heatmap.ny, os, [&](int ix, int iy) {
    if (heatmap.masked(ix, iy)) return std::string("#ffffff");
    const double t = (heatmap.at(ix, iy) - lo_dbm) / (hi_dbm - lo_dbm);
    return hex(color_scale(std::floor(std::clamp(t, 0.0, 1.0) * 63.0) / 63.0));
  });
}

void write_exceedance_svg(const ExceedanceMap &map, std::ostream &os) {
  write_svg_raster(map.nx, map.ny, os, [&](int ix, int iy) {
    switch (map.at(ix, iy)) {
    case CellState::exceeds: return std::string("#d01c1c");
    case CellState::compliant: return std::string("#f4f4f4");
    case CellState::not_applicable: break;
    }
    return std::string("#9a9a9a");
  });
}

} // namespace risemf
