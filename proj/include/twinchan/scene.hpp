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
#include <array>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "twinchan/geometry.hpp"

namespace twinchan {

using Vec2 = std::array<double, 2>;

/// Vertical prism: a simple polygon footprint (counterclockwise, meters in
/// the local ENU frame) extruded from the ground to a flat roof.
struct Building
{
    std::vector<Vec2> footprint;
    double height_m = 0.0;
    double reflection_loss_db = 10.0; // per-facade specular loss applied on reflection
};

struct Scene
{
    std::vector<Building> buildings;
    Vec3 tx;
    double frequency_hz = 220e9;
};

struct Diagnostic
{
    int building = -1; // -1 for scene-level findings
    bool error = false;
    std::string message;
};

// ---- polygon helpers -----------------------------------------------------

inline double signed_area(const std::vector<Vec2> &poly)
{
    double a = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Vec2 &p = poly[i];
        const Vec2 &q = poly[(i + 1) % poly.size()];
        a += p[0] * q[1] - q[0] * p[1];
    }
    return 0.5 * a;
}

namespace detail {

inline double cross2(const Vec2 &o, const Vec2 &a, const Vec2 &b)
{
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

inline bool segments_properly_intersect(const Vec2 &a, const Vec2 &b, const Vec2 &c,
                                        const Vec2 &d)
{
    const double d1 = cross2(c, d, a);
    const double d2 = cross2(c, d, b);
    const double d3 = cross2(a, b, c);
    const double d4 = cross2(a, b, d);
    return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
           ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

} // namespace detail

/// True when no two non-adjacent edges intersect and no edge is degenerate.
inline bool polygon_is_simple(const std::vector<Vec2> &poly)
{
    const std::size_t n = poly.size();
    if (n < 3)
        return false;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 &a = poly[i];
        const Vec2 &b = poly[(i + 1) % n];
        if (a == b)
            return false;
        for (std::size_t j = i + 1; j < n; ++j) {
            if (j == i || (j + 1) % n == i || (i + 1) % n == j)
                continue; // adjacent edges share a vertex
            if (detail::segments_properly_intersect(a, b, poly[j], poly[(j + 1) % n]))
                return false;
        }
    }
    return true;
}

/// Crossing-number test; boundary points count as outside.
inline bool point_in_polygon(const Vec2 &p, const std::vector<Vec2> &poly)
{
    bool inside = false;
    const std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2 &a = poly[i];
        const Vec2 &b = poly[j];
        if ((a[1] > p[1]) != (b[1] > p[1])) {
            const double xi = (b[0] - a[0]) * (p[1] - a[1]) / (b[1] - a[1]) + a[0];
            if (p[0] < xi)
                inside = !inside;
        }
    }
    return inside;
}

// ---- validation ----------------------------------------------------------

/// Pure invariant check: empty result iff the scene is fully valid. The
/// orientation finding is reported as a non-error (loaders fix it in place).
inline std::vector<Diagnostic> validate_scene(const Scene &scene)
{
    std::vector<Diagnostic> out;
    if (!scene.tx.is_finite())
        out.push_back({-1, true, "tx position is not finite"});
    if (scene.tx.z <= 0.0)
        out.push_back({-1, true, "tx height must be positive"});
    if (!(scene.frequency_hz > 0.0))
        out.push_back({-1, true, "frequency must be positive"});
    for (std::size_t i = 0; i < scene.buildings.size(); ++i) {
        const Building &b = scene.buildings[i];
        const int idx = static_cast<int>(i);
        if (b.footprint.size() < 3) {
            out.push_back({idx, true, "degenerate polygon (fewer than 3 vertices)"});
            continue;
        }
        if (!polygon_is_simple(b.footprint)) {
            out.push_back({idx, true, "self-intersecting footprint"});
            continue;
        }
        if (signed_area(b.footprint) < 0.0)
            out.push_back({idx, false, "orientation normalized (clockwise footprint)"});
        if (!(b.height_m > 0.0))
            out.push_back({idx, true, "non-positive height"});
        if (b.reflection_loss_db < 0.0)
            out.push_back({idx, true, "negative reflection loss"});
        if (b.height_m > 0.0 && point_in_polygon({scene.tx.x, scene.tx.y}, b.footprint) &&
            scene.tx.z < b.height_m)
            out.push_back({idx, true, "tx embedded in geometry"});
    }
    return out;
}

// ---- file I/O --------------------------------------------------------------
//
// Scene file: UTF-8 JSON document with fields
//   frequency_hz : number
//   tx           : {x, y, z} meters
//   buildings    : [{footprint: [[x,y],...], height_m, reflection_loss_db?}]
// Unknown fields are ignored with a warning.

inline Scene load_scene_from_json(const nlohmann::json &doc,
                                  std::vector<std::string> *warnings = nullptr)
{
    auto warn = [&](const std::string &msg) {
        if (warnings)
            warnings->push_back(msg);
    };

    if (!doc.is_object())
        throw std::runtime_error("scene parse failure: top-level must be an object");
    for (auto it = doc.begin(); it != doc.end(); ++it)
        if (it.key() != "frequency_hz" && it.key() != "tx" && it.key() != "buildings")
            warn("ignoring unknown scene field '" + it.key() + "'");

    Scene scene;
    try {
        scene.frequency_hz = doc.at("frequency_hz").get<double>();
        const auto &tx = doc.at("tx");
        scene.tx = {tx.at("x").get<double>(), tx.at("y").get<double>(),
                    tx.at("z").get<double>()};
        for (const auto &bj : doc.value("buildings", nlohmann::json::array())) {
            for (auto it = bj.begin(); it != bj.end(); ++it)
                if (it.key() != "footprint" && it.key() != "height_m" &&
                    it.key() != "reflection_loss_db")
                    warn("ignoring unknown building field '" + it.key() + "'");
            Building b;
            for (const auto &v : bj.at("footprint"))
                b.footprint.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
            b.height_m = bj.at("height_m").get<double>();
            b.reflection_loss_db = bj.value("reflection_loss_db", 10.0);
            scene.buildings.push_back(std::move(b));
        }
    } catch (const nlohmann::json::exception &e) {
        throw std::runtime_error(std::string("scene parse failure: ") + e.what());
    }

    // Normalize winding, then reject anything still invalid.
    for (auto &b : scene.buildings)
        if (b.footprint.size() >= 3 && signed_area(b.footprint) < 0.0) {
            std::reverse(b.footprint.begin(), b.footprint.end());
            warn("building footprint orientation normalized to counterclockwise");
        }
    for (const auto &d : validate_scene(scene))
        if (d.error)
            throw std::runtime_error("invalid scene: " + d.message +
                                     (d.building >= 0
                                          ? " (building " + std::to_string(d.building) + ")"
                                          : ""));

    if (scene.frequency_hz <= 0.1e12 || scene.frequency_hz >= 10e12)
        warn("frequency outside the 0.1-10 THz band");
    return scene;
}

inline Scene load_scene(const std::string &path, std::vector<std::string> *warnings = nullptr)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open scene file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception &e) {
        throw std::runtime_error(std::string("scene parse failure: ") + e.what());
    }
    return load_scene_from_json(doc, warnings);
}

inline nlohmann::json scene_to_json(const Scene &scene)
{
    nlohmann::json doc;
    doc["frequency_hz"] = scene.frequency_hz;
    doc["tx"] = {{"x", scene.tx.x}, {"y", scene.tx.y}, {"z", scene.tx.z}};
    doc["buildings"] = nlohmann::json::array();
    for (const auto &b : scene.buildings) {
        nlohmann::json bj;
        bj["footprint"] = nlohmann::json::array();
        for (const auto &v : b.footprint)
            bj["footprint"].push_back({v[0], v[1]});
        bj["height_m"] = b.height_m;
        bj["reflection_loss_db"] = b.reflection_loss_db;
        doc["buildings"].push_back(std::move(bj));
    }
    return doc;
}

inline void save_scene(const Scene &scene, const std::string &path)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write scene file: " + path);
    out << scene_to_json(scene).dump(2) << "\n";
}

} // namespace twinchan
