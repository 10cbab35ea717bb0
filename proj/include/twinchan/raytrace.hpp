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

#include <cmath>
#include <optional>
#include <vector>

#include "twinchan/scene.hpp"

namespace twinchan {

/// Free-space path gain (Friis), 20*log10(c / (4*pi*f*d)) in dB. Negative in
/// the far field; this is a gain, not a loss.
inline double fspl_gain_db(double frequency_hz, double distance_m)
{
    if (!(frequency_hz > 0.0))
        throw std::invalid_argument("frequency must be positive");
    if (!(distance_m > 0.0))
        throw std::invalid_argument("distance must be positive");
    return 20.0 * std::log10(speed_of_light / (4.0 * std::numbers::pi * frequency_hz * distance_m));
}

struct FacadeRef
{
    int building = -1;
    int facade = -1;
    bool operator==(const FacadeRef &o) const
    {
        return building == o.building && facade == o.facade;
    }
};

struct PathCandidate
{
    enum class Kind { los, reflection };
    Kind kind = Kind::los;
    double geometric_length_m = 0.0;
    double delay_s = 0.0;
    double gain_db = 0.0;
    Direction aod; // departure, seen from tx
    Direction aoa; // arrival, pointing from rx toward the incoming path
    std::optional<FacadeRef> reflector;
};

namespace detail {

/// True when the open segment a->b passes through the prism interior.
/// Works on the 2D projection: boundary-crossing parameters split the
/// segment into intervals, an interval counts when its midpoint is strictly
/// inside the footprint and the (linear) height along it dips below the roof.
inline bool segment_blocked_by_building(const Building &bld, const Vec3 &a, const Vec3 &b)
{
    const double eps = 1e-12;
    const Vec2 a2{a.x, a.y};
    const double dx = b.x - a.x, dy = b.y - a.y;
    const double seg2 = dx * dx + dy * dy;

    if (seg2 < eps) {
        // Vertically stacked endpoints: blocked iff the column is inside.
        if (!point_in_polygon(a2, bld.footprint))
            return false;
        return std::min(a.z, b.z) < bld.height_m - 1e-9;
    }

    std::vector<double> ts{0.0, 1.0};
    const std::size_t n = bld.footprint.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 &p = bld.footprint[i];
        const Vec2 &q = bld.footprint[(i + 1) % n];
        const double ex = q[0] - p[0], ey = q[1] - p[1];
        const double denom = dx * ey - dy * ex;
        if (std::abs(denom) < 1e-15)
            continue; // parallel
        const double t = ((p[0] - a.x) * ey - (p[1] - a.y) * ex) / denom;
        const double u = ((p[0] - a.x) * dy - (p[1] - a.y) * dx) / denom;
        if (t > 0.0 && t < 1.0 && u >= -1e-12 && u <= 1.0 + 1e-12)
            ts.push_back(t);
    }
    std::sort(ts.begin(), ts.end());

    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
        const double ta = ts[i], tb = ts[i + 1];
        if (tb - ta < 1e-12)
            continue;
        const double tm = 0.5 * (ta + tb);
        const Vec2 mid{a.x + tm * dx, a.y + tm * dy};
        if (!point_in_polygon(mid, bld.footprint))
            continue;
        const double za = a.z + ta * (b.z - a.z);
        const double zb = a.z + tb * (b.z - a.z);
        if (std::min(za, zb) < bld.height_m - 1e-9)
            return true;
    }
    return false;
}

/// Blockage against all prisms; `trim` shrinks both endpoints by the given
/// fraction of the segment so that endpoints sitting exactly on a facade
/// (reflection points) do not register as hits.
inline int first_blocking_building(const Scene &scene, const Vec3 &a, const Vec3 &b,
                                   double trim = 0.0)
{
    Vec3 a2 = a, b2 = b;
    if (trim > 0.0) {
        const Vec3 d = b - a;
        a2 = a + d * trim;
        b2 = b - d * trim;
    }
    for (std::size_t i = 0; i < scene.buildings.size(); ++i)
        if (segment_blocked_by_building(scene.buildings[i], a2, b2))
            return static_cast<int>(i);
    return -1;
}

} // namespace detail

struct LosResult
{
    bool clear = true;
    int blocking_building = -1;
};

inline LosResult geometric_los(const Scene &scene, const Vec3 &rx)
{
    if ((rx - scene.tx).norm() <= 0.0)
        throw std::invalid_argument("rx coincides with tx");
    const int blocker = detail::first_blocking_building(scene, scene.tx, rx);
    return {blocker < 0, blocker};
}

/// Deterministic dominant paths: the geometric line-of-sight path plus all
/// valid single reflections off vertical facades found with the image
/// method. An empty result marks a geometric outage location.
inline std::vector<PathCandidate> trace_first_order(const Scene &scene, const Vec3 &rx)
{
    const Vec3 &tx = scene.tx;
    if ((rx - tx).norm() <= 0.0)
        throw std::invalid_argument("rx coincides with tx");

    std::vector<PathCandidate> out;
    const double f = scene.frequency_hz;

    if (geometric_los(scene, rx).clear) {
        PathCandidate c;
        c.kind = PathCandidate::Kind::los;
        c.geometric_length_m = (rx - tx).norm();
        c.delay_s = c.geometric_length_m / speed_of_light;
        c.gain_db = fspl_gain_db(f, c.geometric_length_m);
        c.aod = direction_of(rx - tx);
        c.aoa = direction_of(tx - rx);
        out.push_back(c);
    }

    constexpr double kSideEps = 1e-9;      // both endpoints strictly outside the facade
    constexpr double kOcclusionTrim = 1e-7; // endpoint shrink for sub-segment tests

    for (std::size_t bi = 0; bi < scene.buildings.size(); ++bi) {
        const Building &bld = scene.buildings[bi];
        const std::size_t n = bld.footprint.size();
        for (std::size_t fi = 0; fi < n; ++fi) {
            const Vec2 &v0 = bld.footprint[fi];
            const Vec2 &v1 = bld.footprint[(fi + 1) % n];
            const double ex = v1[0] - v0[0], ey = v1[1] - v0[1];
            const double elen = std::hypot(ex, ey);
            if (elen < 1e-12)
                continue;
            // Outward normal of a counterclockwise footprint edge.
            const double nx = ey / elen, ny = -ex / elen;

            const double d_tx = (tx.x - v0[0]) * nx + (tx.y - v0[1]) * ny;
            const double d_rx = (rx.x - v0[0]) * nx + (rx.y - v0[1]) * ny;
            if (d_tx <= kSideEps || d_rx <= kSideEps)
                continue;

            const Vec3 image{tx.x - 2.0 * d_tx * nx, tx.y - 2.0 * d_tx * ny, tx.z};
            const double u = d_tx / (d_tx + d_rx); // image->rx plane crossing
            const Vec3 s = image + (rx - image) * u;

            const double along = (s.x - v0[0]) * (ex / elen) + (s.y - v0[1]) * (ey / elen);
            if (along < -1e-9 || along > elen + 1e-9)
                continue; // specular point off the facade span
            if (s.z < -1e-9 || s.z > bld.height_m + 1e-9)
                continue; // above the roof or below ground

            if (detail::first_blocking_building(scene, tx, s, kOcclusionTrim) >= 0)
                continue;
            if (detail::first_blocking_building(scene, s, rx, kOcclusionTrim) >= 0)
                continue;

            PathCandidate c;
            c.kind = PathCandidate::Kind::reflection;
            c.geometric_length_m = (rx - image).norm();
            c.delay_s = c.geometric_length_m / speed_of_light;
            c.gain_db = fspl_gain_db(f, c.geometric_length_m) - bld.reflection_loss_db;
            c.aod = direction_of(s - tx);
            c.aoa = direction_of(s - rx);
            c.reflector = FacadeRef{static_cast<int>(bi), static_cast<int>(fi)};
            out.push_back(c);
        }
    }
    return out;
}

} // namespace twinchan
