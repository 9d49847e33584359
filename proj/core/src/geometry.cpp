// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The itsbf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "itsbf/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "itsbf/error.hpp"
#include "itsbf/units.hpp"

namespace itsbf {

std::string_view to_string(IlluminationMode mode) {
  switch (mode) {
    case IlluminationMode::kFull: return "full";
    case IlluminationMode::kPartial: return "partial";
    case IlluminationMode::kSeparate: return "separate";
  }
  return "full";
}

IlluminationMode parse_illumination(std::string_view text) {
  if (text == "full" || text == "FI") return IlluminationMode::kFull;
  if (text == "partial" || text == "PI") return IlluminationMode::kPartial;
  if (text == "separate" || text == "SI") return IlluminationMode::kSeparate;
  throw Error(ErrorCode::kInvalidArgument, "unknown illumination mode '" + std::string(text) + "'");
}

void GeometryConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::kInvalidConfig, msg); };
  if (n_active < 1) fail("n_active must be >= 1");
  if (m_elements < n_active) fail("m_elements must be >= n_active");
  if (!(wavelength > 0.0)) fail("wavelength must be positive");
  if (!(separation > 0.0)) fail("separation must be positive");
  if (!(active_radius >= 0.0)) fail("active_radius must be non-negative");
  if (!(kappa >= 0.0)) fail("kappa must be non-negative");
  if (!(surface_loss > 0.0 && surface_loss <= 1.0)) fail("surface_loss must lie in (0, 1]");
  if (grid_rows < 1 || grid_cols < 1 || grid_rows * grid_cols != m_elements)
    fail("grid_rows * grid_cols must equal m_elements");
}

double characteristic_distance(int m_elements, int n_active, double wavelength) {
  return 0.5 * wavelength * std::sqrt(static_cast<double>(m_elements) / (kPi * n_active));
}

double antenna_gain(double theta, double kappa) {
  const double c = std::cos(theta);
  if (std::abs(theta) >= 0.5 * kPi || c <= 0.0) return 0.0;
  return 2.0 * (1.0 + kappa) * std::pow(c, kappa);
}

double angle_between(const Vec3& a, const Vec3& b) {
  // atan2 form stays accurate near 0 and pi
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

Vec3 ArrayLayout::sector_centroid(int sector) const {
  Vec3 sum = Vec3::Zero();
  int count = 0;
  for (std::size_t m = 0; m < element_positions.size(); ++m) {
    if (sector_of_element[m] == sector) {
      sum += element_positions[m];
      ++count;
    }
  }
  return count > 0 ? Vec3(sum / count) : Vec3(Vec3::Zero());
}

double ArrayLayout::aperture_diagonal() const {
  const double h = grid_rows * 0.5 * wavelength;
  const double w = grid_cols * 0.5 * wavelength;
  return std::hypot(h, w);
}

namespace {

struct SectorGrid {
  int rows;
  int cols;
};

// Factor N into a sector grid that divides the element grid, preferring
// near-square sectors, then a near-square sector grid.
SectorGrid choose_sector_grid(int n, int grid_rows, int grid_cols) {
  SectorGrid best{0, 0};
  double best_aspect = std::numeric_limits<double>::infinity();
  int best_balance = std::numeric_limits<int>::max();
  for (int sr = 1; sr <= n; ++sr) {
    if (n % sr != 0) continue;
    const int sc = n / sr;
    if (grid_rows % sr != 0 || grid_cols % sc != 0) continue;
    const double aspect = std::abs(std::log(static_cast<double>(grid_rows / sr) / (grid_cols / sc)));
    const int balance = std::abs(sr - sc);
    if (aspect < best_aspect - 1e-12 || (std::abs(aspect - best_aspect) <= 1e-12 && balance < best_balance)) {
      best = {sr, sc};
      best_aspect = aspect;
      best_balance = balance;
    }
  }
  if (best.rows == 0)
    throw Error(ErrorCode::kInvalidConfig,
                "cannot split a " + std::to_string(grid_rows) + "x" + std::to_string(grid_cols) +
                    " grid into " + std::to_string(n) + " equal rectangular sectors");
  return best;
}

}  // namespace

ArrayLayout build_layout(const GeometryConfig& cfg) {
  cfg.validate();

  ArrayLayout layout;
  layout.wavelength = cfg.wavelength;
  layout.kappa = cfg.kappa;
  layout.illumination = cfg.illumination;
  layout.grid_rows = cfg.grid_rows;
  layout.grid_cols = cfg.grid_cols;

  const double pitch = 0.5 * cfg.wavelength;
  const int m_total = cfg.m_elements;
  layout.element_positions.reserve(m_total);
  for (int m = 0; m < m_total; ++m) {
    const int r = m / cfg.grid_cols;
    const int c = m % cfg.grid_cols;
    layout.element_positions.emplace_back((c - 0.5 * (cfg.grid_cols - 1)) * pitch,
                                          (r - 0.5 * (cfg.grid_rows - 1)) * pitch, 0.0);
  }

  const int n = cfg.n_active;
  const SectorGrid sectors = choose_sector_grid(n, cfg.grid_rows, cfg.grid_cols);
  layout.sector_rows = sectors.rows;
  layout.sector_cols = sectors.cols;
  const int rows_per_sector = cfg.grid_rows / sectors.rows;
  const int cols_per_sector = cfg.grid_cols / sectors.cols;
  layout.sector_of_element.resize(m_total);
  for (int m = 0; m < m_total; ++m) {
    const int r = m / cfg.grid_cols;
    const int c = m % cfg.grid_cols;
    layout.sector_of_element[m] = (r / rows_per_sector) * sectors.cols + c / cols_per_sector;
  }

  // Antennas go round the circle in the same angular order as the sector
  // centroids, so each antenna sits behind its own sector.
  std::vector<double> centroid_angle(n);
  for (int s = 0; s < n; ++s) {
    const Vec3 c = layout.sector_centroid(s);
    centroid_angle[s] = std::atan2(c.y(), c.x());
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return centroid_angle[a] < centroid_angle[b]; });
  const double base_angle = n > 1 ? centroid_angle[order.front()] : 0.0;

  layout.axis_center = Vec3(0.0, 0.0, -cfg.separation);
  layout.antenna_of_sector.assign(n, 0);
  for (int i = 0; i < n; ++i) {
    const double a = base_angle + kTwoPi * i / n;
    layout.active_positions.push_back(layout.axis_center +
                                      Vec3(cfg.active_radius * std::cos(a), cfg.active_radius * std::sin(a), 0.0));
    layout.antenna_of_sector[order[i]] = i;
  }

  layout.sector_assignment.resize(m_total);
  for (int m = 0; m < m_total; ++m)
    layout.sector_assignment[m] = layout.antenna_of_sector[layout.sector_of_element[m]];

  std::vector<Vec3> sector_target(n, Vec3::Zero());
  for (int s = 0; s < n; ++s) sector_target[layout.antenna_of_sector[s]] = layout.sector_centroid(s);

  for (int i = 0; i < n; ++i) {
    const Vec3 target = cfg.illumination == IlluminationMode::kFull ? Vec3(Vec3::Zero()) : sector_target[i];
    const Vec3 dir = target - layout.active_positions[i];
    layout.active_boresights.push_back(dir.normalized());
  }
  return layout;
}

CMatrix build_transfer_matrix(const ArrayLayout& layout, const GeometryConfig& cfg) {
  const int m_total = layout.m_elements();
  const int n_total = layout.n_active();
  const double lambda = layout.wavelength;
  if (m_total == 0 || n_total == 0) throw Error(ErrorCode::kInvalidArgument, "empty layout");
  if (!(cfg.surface_loss > 0.0 && cfg.surface_loss <= 1.0))
    throw Error(ErrorCode::kInvalidConfig, "surface_loss must lie in (0, 1]");

  CMatrix t(m_total, n_total);
  for (int n = 0; n < n_total; ++n) {
    for (int m = 0; m < m_total; ++m) {
      const Vec3 v = layout.element_positions[m] - layout.active_positions[n];
      const double r = v.norm();
      if (!(r > 1e-12 * lambda))
        throw Error(ErrorCode::kCoincidentPositions,
                    "antenna " + std::to_string(n) + " coincides with element " + std::to_string(m));
      if (layout.illumination == IlluminationMode::kSeparate && layout.sector_assignment[m] != n) {
        t(m, n) = 0.0;
        continue;
      }
      const double theta = angle_between(layout.active_boresights[n], v);
      const double magnitude =
          lambda / (4.0 * kPi * r) * std::sqrt(cfg.surface_loss * antenna_gain(theta, cfg.kappa));
      t(m, n) = std::polar(magnitude, -kTwoPi * r / lambda);
    }
  }
  return t;
}

}  // namespace itsbf
