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
#pragma once

#include <Eigen/Dense>

#include <string_view>
#include <vector>

#include "itsbf/model.hpp"

namespace itsbf {

using Vec3 = Eigen::Vector3d;

enum class IlluminationMode { kFull, kPartial, kSeparate };

std::string_view to_string(IlluminationMode mode);
IlluminationMode parse_illumination(std::string_view text);

struct GeometryConfig {
  int n_active = 4;             // N
  int m_elements = 128;         // M
  double wavelength = 0.0;      // meters
  double active_radius = 0.0;   // R_a, meters
  double separation = 0.0;      // d, meters
  double kappa = 49.0;          // Lambertian directivity exponent
  double surface_loss = 1.0;    // linear transmission factor in (0, 1]
  IlluminationMode illumination = IlluminationMode::kFull;
  int grid_rows = 16;
  int grid_cols = 8;

  // Throws Error(kInvalidConfig) when a field is out of range.
  void validate() const;
};

// Geometry of the active array and the surface grid.
//
// The surface lies in the z = 0 plane, centered at the origin, with its
// normal along +z towards the users. Element m sits at row m / cols and
// column m % cols; rows run along y and columns along x, both at lambda/2
// spacing. Active antennas sit on a circle of radius R_a in the plane
// z = -d, centered on the z axis.
struct ArrayLayout {
  double wavelength = 0.0;
  double kappa = 0.0;
  IlluminationMode illumination = IlluminationMode::kFull;
  int grid_rows = 0;
  int grid_cols = 0;
  int sector_rows = 1;  // sector grid, sector_rows * sector_cols == N
  int sector_cols = 1;
  Vec3 axis_center = Vec3::Zero();  // center of the antenna circle
  std::vector<Vec3> active_positions;
  std::vector<Vec3> active_boresights;
  std::vector<Vec3> element_positions;
  std::vector<int> sector_of_element;    // row-major sector index per element
  std::vector<int> antenna_of_sector;    // which antenna serves each sector
  std::vector<int> sector_assignment;    // element -> antenna

  int n_active() const { return static_cast<int>(active_positions.size()); }
  int m_elements() const { return static_cast<int>(element_positions.size()); }
  Vec3 sector_centroid(int sector) const;
  // Diagonal of the surface aperture, meters.
  double aperture_diagonal() const;
};

// (lambda / 2) * sqrt(M / (pi N))
double characteristic_distance(int m_elements, int n_active, double wavelength);

// 2 (1 + kappa) cos^kappa(theta) for |theta| < pi/2, zero behind the antenna.
double antenna_gain(double theta, double kappa);

ArrayLayout build_layout(const GeometryConfig& cfg);

// M x N response from the active antennas to the surface elements, including
// the surface transmission loss. Separate illumination zeroes every entry
// outside the antenna's own sector.
CMatrix build_transfer_matrix(const ArrayLayout& layout, const GeometryConfig& cfg);

// Angle between two non-zero vectors.
double angle_between(const Vec3& a, const Vec3& b);

}  // namespace itsbf
