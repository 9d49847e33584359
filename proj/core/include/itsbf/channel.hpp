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

#include <optional>
#include <vector>

#include "itsbf/geometry.hpp"
#include "itsbf/model.hpp"
#include "itsbf/rng.hpp"

namespace itsbf {

// Clustered geometric channel statistics. Defaults describe a 28 GHz NLOS
// urban link; all angles in degrees.
struct ChannelParams {
  double carrier_freq = 28e9;
  int n_clusters_min = 1;
  int n_clusters_max = 6;
  double pathloss_intercept_db = 72.0;
  double pathloss_exponent = 2.92;
  double shadowing_std_db = 8.7;
  double distance_min = 25.0;
  double distance_max = 100.0;
  double azimuth_min_deg = -60.0;
  double azimuth_max_deg = 60.0;
  double elevation_min_deg = -30.0;
  double elevation_max_deg = 30.0;
  // Standard deviation of the angular offset of clusters 2..L around the
  // user direction.
  double cluster_spread_deg = 10.0;
  // Target median per-element gain |h_km|^2 (linear). Unset leaves the
  // absolute path loss in place.
  std::optional<double> gain_normalization = 1e-7;

  void validate() const;
};

struct UserDrop {
  std::vector<Vec3> positions;  // meters, relative to the surface center

  int n_users() const { return static_cast<int>(positions.size()); }
  double distance(int k) const { return positions[k].norm(); }
  Vec3 direction(int k) const { return positions[k].normalized(); }
};

// Direction of a user at the given azimuth / elevation (radians) measured
// from the surface normal: az = el = 0 is +z.
Vec3 direction_from_angles(double azimuth, double elevation);

struct PathCluster {
  cdouble gain;
  Vec3 direction;
};

// Small-scale and large-scale draws for one user.
struct UserPaths {
  double beta = 0.0;  // linear large-scale gain
  std::vector<PathCluster> clusters;
};

UserDrop sample_user_drop(const ChannelParams& params, int n_users, Rng& rng);

// exp(j (2 pi / lambda) <p_m, u>) for every surface element.
CVector aperture_response(const ArrayLayout& layout, const Vec3& direction);

// Path loss in dB at distance d, before shadowing.
double pathloss_db(const ChannelParams& params, double distance);

// Draws the per-user large-scale gain and cluster set. Both the surface
// channel and the direct (no surface) channel are composed from this draw.
std::vector<UserPaths> sample_user_paths(const UserDrop& drop, const ChannelParams& params, Rng& rng);

// h_k = sqrt(beta_k) * sum_l g_l * aperture_response(u_l), no normalization.
CMatrix channel_from_paths(const ArrayLayout& layout, const std::vector<UserPaths>& paths);

// Same composition over the active antennas (positions relative to the
// circle center, boresight along the array normal) with the antenna gain
// pattern applied per path.
CMatrix direct_channel_from_paths(const ArrayLayout& layout, const std::vector<UserPaths>& paths);

// Linear factor that brings the median |h_km|^2 of a surface channel to the
// target. Returns 1 when normalization is disabled.
double normalization_scale(const ChannelParams& params, const CMatrix& surface_channel);

// Throws Error(kNearField) if a user is within 10 aperture diagonals.
void check_far_field(const ArrayLayout& layout, const UserDrop& drop);

// K x M surface-to-user channel.
CMatrix sample_channel(const ArrayLayout& layout, const UserDrop& drop, const ChannelParams& params,
                       Rng& rng);

// K x N direct channel for the no-surface baseline. Draws the same paths as
// sample_channel would from the same generator state and applies the same
// normalization factor, so both channels share one link budget.
CMatrix sample_direct_channel(const ArrayLayout& layout, const UserDrop& drop,
                              const ChannelParams& params, Rng& rng);

// Both channels from a single draw.
struct ChannelPair {
  CMatrix surface;  // K x M
  CMatrix direct;   // K x N
};

ChannelPair sample_channel_pair(const ArrayLayout& layout, const UserDrop& drop,
                                const ChannelParams& params, Rng& rng);

}  // namespace itsbf
