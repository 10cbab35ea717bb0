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

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace twinchan {

inline constexpr double speed_of_light = 299792458.0; // m/s
inline constexpr double two_pi = 2.0 * std::numbers::pi;

constexpr double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }
constexpr double rad2deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/// Wraps an angle in degrees into [-180, 180).
inline double wrap_deg(double a)
{
    double x = std::fmod(a + 180.0, 360.0);
    if (x < 0.0)
        x += 360.0;
    return x - 180.0;
}

struct Vec3
{
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3 operator+(const Vec3 &o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3 &o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    bool operator==(const Vec3 &o) const { return x == o.x && y == o.y && z == o.z; }

    double dot(const Vec3 &o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3 &o) const
    {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(dot(*this)); }

    Vec3 normalized() const
    {
        double n = norm();
        if (n <= 0.0)
            throw std::invalid_argument("cannot normalize zero vector");
        return {x / n, y / n, z / n};
    }

    bool is_finite() const
    {
        return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
    }
};

inline Vec3 operator*(double s, const Vec3 &v) { return v * s; }

/// Angular direction in the local east-north-up frame. Azimuth is measured
/// counterclockwise from +x (east) and kept in [-180, 180); elevation is
/// measured from the horizontal plane and lies in [-90, 90].
struct Direction
{
    double azimuth_deg = 0.0;
    double elevation_deg = 0.0;

    static Direction of(double az_deg, double el_deg)
    {
        if (!std::isfinite(az_deg) || !std::isfinite(el_deg))
            throw std::invalid_argument("non-finite direction angles");
        if (el_deg > 90.0 + 1e-6 || el_deg < -90.0 - 1e-6)
            throw std::invalid_argument("elevation outside [-90, 90]");
        return {wrap_deg(az_deg), std::clamp(el_deg, -90.0, 90.0)};
    }
};

inline Vec3 unit_vector(const Direction &d)
{
    const double az = deg2rad(d.azimuth_deg);
    const double el = deg2rad(d.elevation_deg);
    return {std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el)};
}

inline Direction direction_of(const Vec3 &v)
{
    const double n = v.norm();
    if (n <= 0.0)
        throw std::invalid_argument("direction of zero vector is undefined");
    const double el = rad2deg(std::asin(std::clamp(v.z / n, -1.0, 1.0)));
    const double az = (v.x == 0.0 && v.y == 0.0) ? 0.0 : rad2deg(std::atan2(v.y, v.x));
    return Direction::of(az, el);
}

/// Great-circle angle between two directions, in degrees.
inline double great_circle_deg(const Direction &a, const Direction &b)
{
    const double c = std::clamp(unit_vector(a).dot(unit_vector(b)), -1.0, 1.0);
    return rad2deg(std::acos(c));
}

/// Minimal 3x3 matrix, enough for composing axis rotations.
struct Mat3
{
    double m[3][3];

    static Mat3 identity()
    {
        return {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    }
    static Mat3 rot_z(double deg)
    {
        const double c = std::cos(deg2rad(deg)), s = std::sin(deg2rad(deg));
        return {{{c, -s, 0}, {s, c, 0}, {0, 0, 1}}};
    }
    static Mat3 rot_y(double deg)
    {
        const double c = std::cos(deg2rad(deg)), s = std::sin(deg2rad(deg));
        return {{{c, 0, s}, {0, 1, 0}, {-s, 0, c}}};
    }
    Mat3 operator*(const Mat3 &o) const
    {
        Mat3 r{};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                r.m[i][j] = m[i][0] * o.m[0][j] + m[i][1] * o.m[1][j] + m[i][2] * o.m[2][j];
        return r;
    }
    Vec3 apply(const Vec3 &v) const
    {
        return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
                m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
                m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
    }
};

/// Rotation about the z axis expressed on (azimuth, elevation) pairs:
/// adds the angle to azimuth and leaves elevation untouched.
inline Direction rotate_z_deg(const Direction &d, double angle_deg)
{
    return Direction::of(d.azimuth_deg + angle_deg, d.elevation_deg);
}

/// Rotation about the y axis expressed on (azimuth, elevation) pairs.
/// Closed form of applying the 3x3 rotation to the unit vector; the azimuth
/// branch uses atan2 so all quadrants resolve.
inline Direction rotate_y_deg(const Direction &d, double angle_deg)
{
    const double a = deg2rad(angle_deg);
    const double az = deg2rad(d.azimuth_deg);
    const double el = deg2rad(d.elevation_deg);
    const double x = std::cos(a) * std::cos(el) * std::cos(az) + std::sin(a) * std::sin(el);
    const double y = std::cos(el) * std::sin(az);
    const double z = -std::sin(a) * std::cos(el) * std::cos(az) + std::cos(a) * std::sin(el);
    const double new_el = rad2deg(std::asin(std::clamp(z, -1.0, 1.0)));
    const double new_az = (x == 0.0 && y == 0.0) ? 0.0 : rad2deg(std::atan2(y, x));
    return Direction::of(new_az, new_el);
}

} // namespace twinchan
