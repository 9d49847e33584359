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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "itsbf/error.hpp"

namespace itsbf {
namespace {

constexpr double kLambda = 299792458.0 / 28e9;

GeometryConfig table_config(IlluminationMode mode) {
  GeometryConfig cfg;
  cfg.wavelength = kLambda;
  cfg.active_radius = kLambda;
  cfg.separation = 10.0 * characteristic_distance(128, 4, kLambda);
  cfg.surface_loss = std::pow(10.0, -0.35);
  cfg.illumination = mode;
  return cfg;
}

TEST(CharacteristicDistance, Examples) {
  // M = pi N makes the square root one
  EXPECT_NEAR(characteristic_distance(1, 1, 2.0) * std::sqrt(std::numbers::pi) / std::sqrt(1.0), 1.0, 1e-15);
  EXPECT_NEAR(characteristic_distance(128, 4, 1.0), 0.5 * std::sqrt(128.0 / (4.0 * std::numbers::pi)), 1e-15);
  EXPECT_NEAR(characteristic_distance(128, 4, 1.0), 1.5958, 1e-4);
  EXPECT_NEAR(characteristic_distance(128, 4, 2.0), 2.0 * characteristic_distance(128, 4, 1.0), 1e-15);
}

TEST(AntennaGain, BoresightAndEdge) {
  EXPECT_NEAR(antenna_gain(0.0, 49.0), 100.0, 1e-12);
  EXPECT_NEAR(antenna_gain(std::numbers::pi / 2.0, 49.0), 0.0, 1e-300);
  EXPECT_EQ(antenna_gain(2.0, 49.0), 0.0);
  EXPECT_EQ(antenna_gain(-2.0, 3.0), 0.0);
  EXPECT_NEAR(antenna_gain(0.3, 0.0), 2.0, 1e-15);
}

// Composite Simpson over theta; the azimuth integral is 2 pi.
double hemisphere_average(double kappa) {
  const int n = 20000;
  const double h = (std::numbers::pi / 2.0) / n;
  double acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double t = i * h;
    const double f = antenna_gain(t, kappa) * std::sin(t);
    acc += f * (i == 0 || i == n ? 1.0 : (i % 2 ? 4.0 : 2.0));
  }
  return acc * h / 3.0 * 2.0 * std::numbers::pi / (4.0 * std::numbers::pi);
}

TEST(AntennaGain, RadiatesUnitPowerOverHemisphere) {
  for (double kappa : {0.0, 1.0, 5.0, 49.0, 200.0}) EXPECT_NEAR(hemisphere_average(kappa), 1.0, 1e-3) << kappa;
}

TEST(BuildLayout, SingleAntennaFullPointsAlongNormal) {
  GeometryConfig cfg = table_config(IlluminationMode::kFull);
  cfg.n_active = 1;
  cfg.active_radius = 0.0;
  const ArrayLayout layout = build_layout(cfg);
  ASSERT_EQ(layout.n_active(), 1);
  EXPECT_LT((layout.active_boresights[0] - Vec3(0, 0, 1)).norm(), 1e-12);
  EXPECT_LT((layout.active_positions[0] - Vec3(0, 0, -cfg.separation)).norm(), 1e-15);
}

TEST(BuildLayout, GridIsCenteredWithHalfWavelengthPitch) {
  const ArrayLayout layout = build_layout(table_config(IlluminationMode::kFull));
  ASSERT_EQ(layout.m_elements(), 128);
  Vec3 mean = Vec3::Zero();
  for (const auto& p : layout.element_positions) {
    mean += p;
    EXPECT_EQ(p.z(), 0.0);
  }
  EXPECT_LT((mean / 128.0).norm(), 1e-15);
  // neighbours along a row (x) and along a column (y)
  EXPECT_NEAR((layout.element_positions[1] - layout.element_positions[0]).norm(), kLambda / 2.0, 1e-15);
  EXPECT_NEAR(layout.element_positions[8].y() - layout.element_positions[0].y(), kLambda / 2.0, 1e-15);
}

TEST(BuildLayout, FourSectorsOfEightByFour) {
  for (auto mode : {IlluminationMode::kPartial, IlluminationMode::kSeparate}) {
    const ArrayLayout layout = build_layout(table_config(mode));
    EXPECT_EQ(layout.sector_rows * layout.sector_cols, 4);
    std::vector<std::set<int>> rows(4), cols(4);
    for (int m = 0; m < 128; ++m) {
      rows[layout.sector_of_element[m]].insert(m / 8);
      cols[layout.sector_of_element[m]].insert(m % 8);
    }
    for (int s = 0; s < 4; ++s) {
      EXPECT_EQ(rows[s].size(), 8u);
      EXPECT_EQ(cols[s].size(), 4u);
      // contiguous rectangle
      EXPECT_EQ(*rows[s].rbegin() - *rows[s].begin(), 7);
      EXPECT_EQ(*cols[s].rbegin() - *cols[s].begin(), 3);
    }
    // each antenna serves exactly one sector
    std::set<int> served(layout.antenna_of_sector.begin(), layout.antenna_of_sector.end());
    EXPECT_EQ(served.size(), 4u);
  }
}

TEST(BuildLayout, PartialBoresightsPassThroughSectorCentroids) {
  const ArrayLayout layout = build_layout(table_config(IlluminationMode::kPartial));
  for (int s = 0; s < 4; ++s) {
    // recompute the centroid from the raw element positions
    Vec3 centroid = Vec3::Zero();
    int count = 0;
    for (int m = 0; m < 128; ++m)
      if (layout.sector_of_element[m] == s) {
        centroid += layout.element_positions[m];
        ++count;
      }
    centroid /= count;
    const int n = layout.antenna_of_sector[s];
    const Vec3 to_centroid = centroid - layout.active_positions[n];
    EXPECT_LT(to_centroid.normalized().cross(layout.active_boresights[n]).norm(), 1e-12);
    EXPECT_GT(to_centroid.dot(layout.active_boresights[n]), 0.0);
  }
}

TEST(BuildLayout, AntennasLieOnTheCircle) {
  for (auto mode : {IlluminationMode::kFull, IlluminationMode::kPartial, IlluminationMode::kSeparate}) {
    const GeometryConfig cfg = table_config(mode);
    const ArrayLayout layout = build_layout(cfg);
    for (const auto& p : layout.active_positions) {
      EXPECT_NEAR((p - layout.axis_center).norm(), cfg.active_radius, 1e-12);
      EXPECT_NEAR(p.z(), -cfg.separation, 1e-15);
    }
    for (const auto& b : layout.active_boresights) EXPECT_NEAR(b.norm(), 1.0, 1e-12);
  }
}

TEST(BuildLayout, RejectsInvalidConfigs) {
  GeometryConfig cfg = table_config(IlluminationMode::kFull);
  cfg.grid_rows = 10;
  EXPECT_THROW(build_layout(cfg), Error);
  cfg = table_config(IlluminationMode::kPartial);
  cfg.n_active = 3;  // 16 x 8 cannot be cut into 3 equal rectangles
  EXPECT_THROW(build_layout(cfg), Error);
  cfg = table_config(IlluminationMode::kFull);
  cfg.surface_loss = 0.0;
  EXPECT_THROW(build_layout(cfg), Error);
}

TEST(TransferMatrix, SingleOnAxisElement) {
  GeometryConfig cfg;
  cfg.n_active = 1;
  cfg.m_elements = 1;
  cfg.grid_rows = 1;
  cfg.grid_cols = 1;
  cfg.wavelength = kLambda;
  cfg.active_radius = 0.0;
  cfg.separation = 0.37;
  cfg.surface_loss = 1.0;
  cfg.kappa = 49.0;
  const CMatrix t = build_transfer_matrix(build_layout(cfg), cfg);
  const double d = cfg.separation;
  EXPECT_NEAR(std::abs(t(0, 0)) / (kLambda / (4.0 * std::numbers::pi * d) * 10.0), 1.0, 1e-12);
  const double expected_phase = std::fmod(-2.0 * std::numbers::pi * d / kLambda, 2.0 * std::numbers::pi);
  EXPECT_NEAR(std::remainder(std::arg(t(0, 0)) - expected_phase, 2.0 * std::numbers::pi), 0.0, 1e-9);
}

TEST(TransferMatrix, SurfaceLossScalesPower) {
  GeometryConfig cfg = table_config(IlluminationMode::kFull);
  const ArrayLayout layout = build_layout(cfg);
  const CMatrix a = build_transfer_matrix(layout, cfg);
  cfg.surface_loss *= 0.5;
  const CMatrix b = build_transfer_matrix(layout, cfg);
  EXPECT_LT((b.cwiseAbs2() - 0.5 * a.cwiseAbs2()).cwiseAbs().maxCoeff(), 1e-12 * a.cwiseAbs2().maxCoeff());
}

TEST(TransferMatrix, SeparateIsMaskedPartial) {
  const GeometryConfig partial_cfg = table_config(IlluminationMode::kPartial);
  const GeometryConfig separate_cfg = table_config(IlluminationMode::kSeparate);
  const ArrayLayout partial = build_layout(partial_cfg);
  const ArrayLayout separate = build_layout(separate_cfg);
  const CMatrix tp = build_transfer_matrix(partial, partial_cfg);
  const CMatrix ts = build_transfer_matrix(separate, separate_cfg);
  int nonzeros = 0;
  for (int m = 0; m < 128; ++m)
    for (int n = 0; n < 4; ++n) {
      const bool own = separate.sector_assignment[m] == n;
      if (own) {
        EXPECT_EQ(ts(m, n), tp(m, n));
        ++nonzeros;
      } else {
        EXPECT_EQ(ts(m, n), cdouble(0.0));
      }
    }
  EXPECT_LE(nonzeros, 128);
}

TEST(TransferMatrix, FrobeniusNormFallsWithDistance) {
  double previous = std::numeric_limits<double>::infinity();
  for (double multiple : {0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0}) {
    GeometryConfig cfg = table_config(IlluminationMode::kFull);
    cfg.separation = multiple * characteristic_distance(128, 4, kLambda);
    const double norm = build_transfer_matrix(build_layout(cfg), cfg).norm();
    EXPECT_LE(norm, previous) << multiple;
    previous = norm;
  }
}

TEST(TransferMatrix, MagnitudeBoundAndPhaseConsistency) {
  for (auto mode : {IlluminationMode::kFull, IlluminationMode::kPartial, IlluminationMode::kSeparate}) {
    const GeometryConfig cfg = table_config(mode);
    const ArrayLayout layout = build_layout(cfg);
    const CMatrix t = build_transfer_matrix(layout, cfg);
    double r_min = std::numeric_limits<double>::infinity();
    for (const auto& a : layout.active_positions)
      for (const auto& e : layout.element_positions) r_min = std::min(r_min, (e - a).norm());
    const double bound = kLambda / (4.0 * std::numbers::pi * r_min) * std::sqrt(cfg.surface_loss * 2.0 * (1.0 + cfg.kappa));
    EXPECT_LE(t.cwiseAbs().maxCoeff(), bound * (1.0 + 1e-12));

    for (int m = 0; m < 128; ++m)
      for (int n = 0; n < 4; ++n) {
        if (std::abs(t(m, n)) == 0.0) continue;
        const double r = (layout.element_positions[m] - layout.active_positions[n]).norm();
        // fractional wavelength implied by the phase, against the geometric one
        double frac = -std::arg(t(m, n)) / (2.0 * std::numbers::pi);
        frac -= std::floor(frac);
        double geo = r / kLambda;
        geo -= std::floor(geo);
        const double diff = std::abs(std::remainder(frac - geo, 1.0));
        EXPECT_LT(diff, 1e-9);
      }
  }
}

TEST(TransferMatrix, PartialConcentratesPowerOnOwnSector) {
  const GeometryConfig cfg = table_config(IlluminationMode::kPartial);
  const ArrayLayout layout = build_layout(cfg);
  const CMatrix t = build_transfer_matrix(layout, cfg);
  for (int n = 0; n < 4; ++n) {
    double own = 0.0, other = 0.0;
    for (int m = 0; m < 128; ++m) (layout.sector_assignment[m] == n ? own : other) += std::norm(t(m, n));
    EXPECT_GT(own, other / 3.0) << n;
  }
}

TEST(AngleBetween, Basics) {
  EXPECT_NEAR(angle_between(Vec3(1, 0, 0), Vec3(0, 2, 0)), std::numbers::pi / 2.0, 1e-15);
  EXPECT_NEAR(angle_between(Vec3(1, 0, 0), Vec3(3, 0, 0)), 0.0, 1e-7);
  EXPECT_NEAR(angle_between(Vec3(1, 0, 0), Vec3(-1, 0, 0)), std::numbers::pi, 1e-7);
}

}  // namespace
}  // namespace itsbf
