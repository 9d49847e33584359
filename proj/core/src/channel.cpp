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
#include "itsbf/channel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "itsbf/error.hpp"
#include "itsbf/units.hpp"

namespace itsbf {

void ChannelParams::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::kInvalidConfig, msg); };
  if (!(carrier_freq > 0.0)) fail("carrier_freq must be positive");
  if (n_clusters_min < 1 || n_clusters_max < n_clusters_min) fail("cluster range must satisfy 1 <= min <= max");
  if (!(distance_min > 0.0) || distance_max < distance_min) fail("distance range must be positive and ordered");
  if (azimuth_max_deg < azimuth_min_deg || elevation_max_deg < elevation_min_deg) fail("angle ranges must be ordered");
  if (std::abs(azimuth_min_deg) >= 90.0 || std::abs(azimuth_max_deg) >= 90.0 ||
      std::abs(elevation_min_deg) >= 90.0 || std::abs(elevation_max_deg) >= 90.0)
    fail("users must lie in the front half-space (|angle| < 90 deg)");
  if (!(shadowing_std_db >= 0.0)) fail("shadowing_std_db must be non-negative");
  if (!(cluster_spread_deg >= 0.0)) fail("cluster_spread_deg must be non-negative");
  if (gain_normalization && !(*gain_normalization > 0.0)) fail("gain_normalization must be positive");
}

Vec3 direction_from_angles(double azimuth, double elevation) {
  return {std::cos(elevation) * std::sin(azimuth), std::sin(elevation), std::cos(elevation) * std::cos(azimuth)};
}

UserDrop sample_user_drop(const ChannelParams& params, int n_users, Rng& rng) {
  params.validate();
  if (n_users < 1) throw Error(ErrorCode::kInvalidArgument, "need at least one user");
  std::uniform_real_distribution<double> dist(params.distance_min, params.distance_max);
  std::uniform_real_distribution<double> az(deg_to_rad(params.azimuth_min_deg), deg_to_rad(params.azimuth_max_deg));
  std::uniform_real_distribution<double> el(deg_to_rad(params.elevation_min_deg),
                                            deg_to_rad(params.elevation_max_deg));
  UserDrop drop;
  for (int k = 0; k < n_users; ++k) {
    const double d = dist(rng);
    const double a = az(rng);
    const double e = el(rng);
    drop.positions.push_back(d * direction_from_angles(a, e));
  }
  return drop;
}

CVector aperture_response(const ArrayLayout& layout, const Vec3& direction) {
  const double wavenumber = kTwoPi / layout.wavelength;
  CVector a(layout.m_elements());
  for (int m = 0; m < layout.m_elements(); ++m)
    a(m) = std::polar(1.0, wavenumber * layout.element_positions[m].dot(direction));
  return a;
}

double pathloss_db(const ChannelParams& params, double distance) {
  return params.pathloss_intercept_db + 10.0 * params.pathloss_exponent * std::log10(distance);
}

std::vector<UserPaths> sample_user_paths(const UserDrop& drop, const ChannelParams& params, Rng& rng) {
  params.validate();
  std::uniform_int_distribution<int> n_clusters(params.n_clusters_min, params.n_clusters_max);
  std::normal_distribution<double> std_normal(0.0, 1.0);
  const double spread = deg_to_rad(params.cluster_spread_deg);
  const double angle_limit = deg_to_rad(89.0);

  std::vector<UserPaths> out;
  out.reserve(drop.positions.size());
  for (int k = 0; k < drop.n_users(); ++k) {
    UserPaths user;
    const double shadow = params.shadowing_std_db > 0.0 ? params.shadowing_std_db * std_normal(rng) : 0.0;
    user.beta = db_to_linear(-(pathloss_db(params, drop.distance(k)) + shadow));

    const Vec3 u = drop.direction(k);
    const double user_az = std::atan2(u.x(), u.z());
    const double user_el = std::asin(std::clamp(u.y(), -1.0, 1.0));

    const int n_paths = n_clusters(rng);
    const double path_std = std::sqrt(0.5 / n_paths);  // E sum |g_l|^2 = 1
    for (int l = 0; l < n_paths; ++l) {
      PathCluster c;
      const double re = std_normal(rng);
      const double im = std_normal(rng);
      c.gain = cdouble(path_std * re, path_std * im);
      if (l == 0) {
        c.direction = u;
      } else {
        const double a = std::clamp(user_az + spread * std_normal(rng), -angle_limit, angle_limit);
        const double e = std::clamp(user_el + spread * std_normal(rng), -angle_limit, angle_limit);
        c.direction = direction_from_angles(a, e);
      }
      user.clusters.push_back(c);
    }
    out.push_back(std::move(user));
  }
  return out;
}

CMatrix channel_from_paths(const ArrayLayout& layout, const std::vector<UserPaths>& paths) {
  CMatrix h = CMatrix::Zero(static_cast<Eigen::Index>(paths.size()), layout.m_elements());
  for (std::size_t k = 0; k < paths.size(); ++k) {
    CVector row = CVector::Zero(layout.m_elements());
    for (const auto& c : paths[k].clusters) row += c.gain * aperture_response(layout, c.direction);
    h.row(static_cast<Eigen::Index>(k)) = std::sqrt(paths[k].beta) * row.transpose();
  }
  return h;
}

CMatrix direct_channel_from_paths(const ArrayLayout& layout, const std::vector<UserPaths>& paths) {
  const int n_total = layout.n_active();
  const double wavenumber = kTwoPi / layout.wavelength;
  const Vec3 normal(0.0, 0.0, 1.0);
  CMatrix h = CMatrix::Zero(static_cast<Eigen::Index>(paths.size()), n_total);
  for (std::size_t k = 0; k < paths.size(); ++k) {
    for (int n = 0; n < n_total; ++n) {
      const Vec3 p = layout.active_positions[n] - layout.axis_center;
      cdouble acc = 0.0;
      for (const auto& c : paths[k].clusters) {
        const double g = antenna_gain(angle_between(normal, c.direction), layout.kappa);
        acc += c.gain * std::sqrt(g) * std::polar(1.0, wavenumber * p.dot(c.direction));
      }
      h(static_cast<Eigen::Index>(k), n) = std::sqrt(paths[k].beta) * acc;
    }
  }
  return h;
}

double normalization_scale(const ChannelParams& params, const CMatrix& surface_channel) {
  if (!params.gain_normalization) return 1.0;
  std::vector<double> gains(static_cast<std::size_t>(surface_channel.size()));
  for (Eigen::Index i = 0; i < surface_channel.size(); ++i) gains[i] = std::norm(surface_channel.data()[i]);
  const std::size_t mid = gains.size() / 2;
  std::nth_element(gains.begin(), gains.begin() + mid, gains.end());
  double median = gains[mid];
  if (gains.size() % 2 == 0) {
    const double lower = *std::max_element(gains.begin(), gains.begin() + mid);
    median = 0.5 * (median + lower);
  }
  if (!(median > 0.0)) throw Error(ErrorCode::kDegenerateBudget, "surface channel has zero median gain");
  return std::sqrt(*params.gain_normalization / median);
}

void check_far_field(const ArrayLayout& layout, const UserDrop& drop) {
  const double limit = 10.0 * layout.aperture_diagonal();
  for (int k = 0; k < drop.n_users(); ++k) {
    if (!(drop.distance(k) > limit))
      throw Error(ErrorCode::kNearField, "user " + std::to_string(k) + " at " + std::to_string(drop.distance(k)) +
                                             " m is within the near field (" + std::to_string(limit) + " m)");
  }
}

ChannelPair sample_channel_pair(const ArrayLayout& layout, const UserDrop& drop, const ChannelParams& params,
                                Rng& rng) {
  check_far_field(layout, drop);
  const auto paths = sample_user_paths(drop, params, rng);
  ChannelPair pair{channel_from_paths(layout, paths), direct_channel_from_paths(layout, paths)};
  const double scale = normalization_scale(params, pair.surface);
  pair.surface *= scale;
  pair.direct *= scale;
  return pair;
}

CMatrix sample_channel(const ArrayLayout& layout, const UserDrop& drop, const ChannelParams& params, Rng& rng) {
  check_far_field(layout, drop);
  const auto paths = sample_user_paths(drop, params, rng);
  CMatrix h = channel_from_paths(layout, paths);
  h *= normalization_scale(params, h);
  return h;
}

CMatrix sample_direct_channel(const ArrayLayout& layout, const UserDrop& drop, const ChannelParams& params,
                              Rng& rng) {
  return sample_channel_pair(layout, drop, params, rng).direct;
}

}  // namespace itsbf
