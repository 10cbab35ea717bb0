// twinchan - hybrid ray-traced / stochastic THz urban macrocell channel simulator
// Copyright (C) 2026 twinchan contributors
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
//
// Test-only reference implementations, kept independent of the library code
// paths they check.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "twinchan/foliage.hpp"
#include "twinchan/scene.hpp"

namespace oracles {

using Mat = std::array<std::array<double, 3>, 3>;
using V3 = std::array<double, 3>;

inline Mat mat_rot_z(double deg)
{
    const double a = deg * std::numbers::pi / 180.0;
    return {{{std::cos(a), -std::sin(a), 0}, {std::sin(a), std::cos(a), 0}, {0, 0, 1}}};
}

inline Mat mat_rot_y(double deg)
{
    const double a = deg * std::numbers::pi / 180.0;
    return {{{std::cos(a), 0, std::sin(a)}, {0, 1, 0}, {-std::sin(a), 0, std::cos(a)}}};
}

inline Mat mat_mul(const Mat &a, const Mat &b)
{
    Mat r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
    return r;
}

inline V3 mat_apply(const Mat &m, const V3 &v)
{
    return {m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
            m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
            m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2]};
}

inline V3 unit_of(double az_deg, double el_deg)
{
    const double az = az_deg * std::numbers::pi / 180.0;
    const double el = el_deg * std::numbers::pi / 180.0;
    return {std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el)};
}

/// Rotated direction via the composed 3x3 matrix product, as a unit vector.
inline V3 rotate_zyz_matrix(double z1_deg, double y_deg, double z2_deg, double az_deg,
                            double el_deg)
{
    const Mat rot = mat_mul(mat_rot_z(z2_deg), mat_mul(mat_rot_y(y_deg), mat_rot_z(z1_deg)));
    return mat_apply(rot, unit_of(az_deg, el_deg));
}

/// Angle between two unit vectors via atan2(|cross|, dot); accurate for both
/// tiny and near-pi separations, unlike plain acos.
inline double angle_between_deg(const V3 &a, const V3 &b)
{
    const V3 c{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
               a[0] * b[1] - a[1] * b[0]};
    const double cn = std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
    const double d = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    return std::atan2(cn, d) * 180.0 / std::numbers::pi;
}

inline double angle_between_deg(const twinchan::Direction &a, const twinchan::Direction &b)
{
    return angle_between_deg(unit_of(a.azimuth_deg, a.elevation_deg),
                             unit_of(b.azimuth_deg, b.elevation_deg));
}

/// Exhaustive-sort KNN: all distances, full stable ordering, majority vote,
/// even split to non-foliage.
inline bool knn_brute(const twinchan::Rgb &query,
                      const std::vector<twinchan::LabeledPixel> &training, int n)
{
    std::vector<std::pair<double, std::size_t>> all;
    for (std::size_t i = 0; i < training.size(); ++i)
        all.emplace_back(twinchan::color_difference(query, training[i].color), i);
    std::stable_sort(all.begin(), all.end(),
                     [](const auto &a, const auto &b) { return a.first < b.first; });
    int fol = 0, non = 0;
    for (int k = 0; k < n; ++k)
        (training[all[static_cast<std::size_t>(k)].second].foliage ? fol : non)++;
    return fol > non;
}

/// Sampling blockage oracle: walks many points along the open segment and
/// checks 2D containment plus height against each prism.
inline bool segment_blocked_sampled(const twinchan::Scene &scene, const twinchan::Vec3 &a,
                                    const twinchan::Vec3 &b, int samples = 20001)
{
    for (int i = 1; i < samples; ++i) {
        const double t = static_cast<double>(i) / samples;
        const twinchan::Vec3 p = a + (b - a) * t;
        for (const auto &bld : scene.buildings)
            if (p.z < bld.height_m && twinchan::point_in_polygon({p.x, p.y}, bld.footprint))
                return true;
    }
    return false;
}

} // namespace oracles
