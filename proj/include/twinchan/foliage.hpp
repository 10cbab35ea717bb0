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

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "twinchan/geometry.hpp"
#include "twinchan/image.hpp"
#include "twinchan/rng.hpp"

namespace twinchan {

// ---- types -----------------------------------------------------------------

/// Equirectangular projection of a panorama: pixel (x, y) maps linearly to
/// camera-frame angles, with (0, 0) at the reference corner.
struct ErpParams
{
    int width = 3840, height = 3840;
    double dphi_deg = 360.0 / 3840.0;
    double dtheta_deg = 180.0 / 3840.0;
    double phi0_deg = -180.0;
    double theta0_deg = -90.0;

    void validate() const
    {
        if (width <= 0 || height <= 0)
            throw std::invalid_argument("ERP dimensions must be positive");
        if (width * dphi_deg > 360.0 + 1e-6)
            throw std::invalid_argument("ERP azimuth span exceeds 360 degrees");
        if (height * dtheta_deg > 180.0 + 1e-6)
            throw std::invalid_argument("ERP elevation span exceeds 180 degrees");
    }
};

/// z-y-z rotation aligning the camera frame with the local ENU frame.
struct PoseRotation
{
    double alpha_z1_deg = 0.0;
    double alpha_y_deg = 0.0;
    double alpha_z2_deg = 0.0;

    static PoseRotation of(double z1, double y, double z2)
    {
        return {wrap_deg(z1), wrap_deg(y), wrap_deg(z2)};
    }
    PoseRotation inverse() const
    {
        return {wrap_deg(-alpha_z2_deg), wrap_deg(-alpha_y_deg), wrap_deg(-alpha_z1_deg)};
    }
};

struct LabeledPixel
{
    int x = 0, y = 0;   // raster coordinates, row 0 at the top
    bool foliage = false;
    Rgb color;
};

/// Segmented-linear foliage loss versus foliage coverage ratio. The slope is
/// negative: the returned value is a dB path-gain adjustment, so attenuation
/// comes out negative and the fitted parameters apply verbatim.
struct FoliageLossModel
{
    double slope_db = -30.0;      // dB per unit FCR above the threshold
    double fcr_threshold = 0.337; // onset of nonzero loss
    double chi_mu_db = -0.15;     // residual scatter, Gaussian
    double chi_sigma_db = 4.31;
    double window_deg = 3.9;      // beam-footprint window radius
};

/// World-frame angular occupancy mask of foliage at fixed cell size, plus the
/// pose and projection it was built from. Immutable once built.
struct FoliageTwin
{
    double cell_deg = 0.1;
    int n_az = 0, n_el = 0;
    std::vector<std::uint8_t> mask; // index iel * n_az + iaz
    PoseRotation pose;
    ErpParams erp;
    FoliageLossModel loss;

    static FoliageTwin uniform(bool foliage, double cell_deg = 0.1)
    {
        FoliageTwin t;
        t.cell_deg = cell_deg;
        t.n_az = static_cast<int>(std::lround(360.0 / cell_deg));
        t.n_el = static_cast<int>(std::lround(180.0 / cell_deg));
        t.mask.assign(static_cast<std::size_t>(t.n_az) * t.n_el, foliage ? 1 : 0);
        return t;
    }

    bool cell(int iaz, int iel) const
    {
        return mask[static_cast<std::size_t>(iel) * n_az + iaz] != 0;
    }
    void set_cell(int iaz, int iel, bool v)
    {
        mask[static_cast<std::size_t>(iel) * n_az + iaz] = v ? 1 : 0;
    }
    int az_index(double az_deg) const
    {
        int i = static_cast<int>(std::floor((wrap_deg(az_deg) + 180.0) / cell_deg));
        return std::clamp(i, 0, n_az - 1);
    }
    int el_index(double el_deg) const
    {
        int i = static_cast<int>(std::floor((el_deg + 90.0) / cell_deg));
        return std::clamp(i, 0, n_el - 1);
    }
    double az_center(int iaz) const { return -180.0 + (iaz + 0.5) * cell_deg; }
    double el_center(int iel) const { return -90.0 + (iel + 0.5) * cell_deg; }
};

// ---- projection and rotation -----------------------------------------------

/// Camera-frame direction of an ERP grid pixel: phi = x*dphi + phi0,
/// theta = y*dtheta + theta0.
inline Direction erp_pixel_to_camera(int x, int y, const ErpParams &erp)
{
    if (x < 0 || x >= erp.width || y < 0 || y >= erp.height)
        throw std::out_of_range("ERP pixel out of bounds");
    return Direction::of(x * erp.dphi_deg + erp.phi0_deg, y * erp.dtheta_deg + erp.theta0_deg);
}

/// Applies the z-y-z rotation: first alpha_z1 about z, then alpha_y about y,
/// then alpha_z2 about z. The rotations act on the unit vector and convert
/// back to angles once at the end; chaining the per-step (azimuth, elevation)
/// forms instead rounds through angle conversions three times, which costs
/// about 1e-6 degrees near the poles.
inline Direction rotate_zyz(const PoseRotation &pose, const Direction &d)
{
    Vec3 v = unit_vector(d);
    auto rot_z = [](const Vec3 &u, double deg) -> Vec3 {
        const double c = std::cos(deg2rad(deg)), s = std::sin(deg2rad(deg));
        return {u.x * c - u.y * s, u.x * s + u.y * c, u.z};
    };
    auto rot_y = [](const Vec3 &u, double deg) -> Vec3 {
        const double c = std::cos(deg2rad(deg)), s = std::sin(deg2rad(deg));
        return {u.x * c + u.z * s, u.y, -u.x * s + u.z * c};
    };
    v = rot_z(v, pose.alpha_z1_deg);
    v = rot_y(v, pose.alpha_y_deg);
    v = rot_z(v, pose.alpha_z2_deg);
    return direction_of(v);
}

// ---- pose solve --------------------------------------------------------------

struct PoseSolveResult
{
    PoseRotation pose;
    double residual_rms_deg = 0.0;
    bool degenerate = false;
    std::string note;
};

namespace detail {

inline double pose_objective(const Mat3 &rot, const std::vector<Vec3> &cam,
                             const std::vector<Vec3> &world)
{
    double sum = 0.0;
    for (std::size_t i = 0; i < cam.size(); ++i) {
        const double c = std::clamp(rot.apply(cam[i]).dot(world[i]), -1.0, 1.0);
        const double ang = rad2deg(std::acos(c));
        sum += ang * ang;
    }
    return sum;
}

inline Mat3 zyz_matrix(double z1, double y, double z2)
{
    return Mat3::rot_z(z2) * (Mat3::rot_y(y) * Mat3::rot_z(z1));
}

inline double angle_l1(double z1, double y, double z2)
{
    return std::abs(wrap_deg(z1)) + std::abs(wrap_deg(y)) + std::abs(wrap_deg(z2));
}

} // namespace detail

/// Recovers the camera pose from (camera direction, world direction) pairs by
/// minimizing the summed squared great-circle residual: an exhaustive 2-degree
/// grid over all three angles, two zoomed grid passes, then a coordinate
/// pattern search. Near-equal minima (the alpha_y = 0 ridge leaves only
/// alpha_z1 + alpha_z2 determined) break toward the smallest angle L1 norm.
inline PoseSolveResult solve_pose(
    const std::vector<std::pair<Direction, Direction>> &refs)
{
    if (refs.size() < 3)
        throw std::invalid_argument("pose solve needs at least 3 reference points");

    std::vector<Vec3> cam, world;
    cam.reserve(refs.size());
    world.reserve(refs.size());
    for (const auto &[c, w] : refs) {
        cam.push_back(unit_vector(c));
        world.push_back(unit_vector(w));
    }

    PoseSolveResult result;

    // Degeneracy: all reference directions within 1 degree of one great circle.
    const double sin1 = std::sin(deg2rad(1.0));
    for (std::size_t a = 0; a < cam.size() && !result.degenerate; ++a)
        for (std::size_t b = a + 1; b < cam.size() && !result.degenerate; ++b) {
            Vec3 n = cam[a].cross(cam[b]);
            if (n.norm() < 1e-6)
                continue;
            n = n.normalized();
            bool all_near = true;
            for (const auto &v : cam)
                if (std::abs(v.dot(n)) > sin1) {
                    all_near = false;
                    break;
                }
            if (all_near) {
                result.degenerate = true;
                result.note = "reference points lie within 1 degree of a single great "
                              "circle; the recovered pose may be ill-conditioned";
            }
        }

    const int n_coarse = 180; // 2-degree steps over [-180, 180)
    std::vector<double> cs(n_coarse), sn(n_coarse), ang(n_coarse);
    for (int i = 0; i < n_coarse; ++i) {
        ang[i] = -180.0 + 2.0 * i;
        cs[i] = std::cos(deg2rad(ang[i]));
        sn[i] = std::sin(deg2rad(ang[i]));
    }

    double best = std::numeric_limits<double>::infinity();
    double bz1 = 0, by = 0, bz2 = 0;
    const std::size_t m = cam.size();
    std::vector<double> k1(m), k2(m), k3(m);

    for (int ia = 0; ia < n_coarse; ++ia) {
        // A = Rz(alpha) applied to camera vectors
        std::vector<Vec3> A(m);
        for (std::size_t i = 0; i < m; ++i)
            A[i] = {cam[i].x * cs[ia] - cam[i].y * sn[ia],
                    cam[i].x * sn[ia] + cam[i].y * cs[ia], cam[i].z};
        for (int ib = 0; ib < n_coarse; ++ib) {
            for (std::size_t i = 0; i < m; ++i) {
                const Vec3 w{A[i].x * cs[ib] + A[i].z * sn[ib], A[i].y,
                             -A[i].x * sn[ib] + A[i].z * cs[ib]};
                // dot(world, Rz(gamma) w) = k1 cos g + k2 sin g + k3
                k1[i] = w.x * world[i].x + w.y * world[i].y;
                k2[i] = w.x * world[i].y - w.y * world[i].x;
                k3[i] = w.z * world[i].z;
            }
            for (int ig = 0; ig < n_coarse; ++ig) {
                double sum = 0.0;
                for (std::size_t i = 0; i < m; ++i) {
                    const double c = std::clamp(k1[i] * cs[ig] + k2[i] * sn[ig] + k3[i],
                                                -1.0, 1.0);
                    const double a = rad2deg(std::acos(c));
                    sum += a * a;
                }
                const bool better =
                    sum < best - 1e-12 ||
                    (sum < best + 1e-12 &&
                     detail::angle_l1(ang[ia], ang[ib], ang[ig]) <
                         detail::angle_l1(bz1, by, bz2));
                if (better) {
                    best = sum;
                    bz1 = ang[ia];
                    by = ang[ib];
                    bz2 = ang[ig];
                }
            }
        }
    }

    // Zoomed grid passes around the coarse winner.
    auto grid_pass = [&](double half_span, double step) {
        const double cz1 = bz1, cy = by, cz2 = bz2;
        for (double a = cz1 - half_span; a <= cz1 + half_span + 1e-12; a += step)
            for (double b = cy - half_span; b <= cy + half_span + 1e-12; b += step)
                for (double g = cz2 - half_span; g <= cz2 + half_span + 1e-12; g += step) {
                    const double v =
                        detail::pose_objective(detail::zyz_matrix(a, b, g), cam, world);
                    const bool better =
                        v < best - 1e-12 ||
                        (v < best + 1e-12 &&
                         detail::angle_l1(a, b, g) < detail::angle_l1(bz1, by, bz2));
                    if (better) {
                        best = v;
                        bz1 = a;
                        by = b;
                        bz2 = g;
                    }
                }
    };
    grid_pass(2.4, 0.1);
    grid_pass(0.12, 0.005);

    // Coordinate pattern search down to well below the reporting precision.
    double step = 0.004;
    while (step > 1e-7) {
        bool improved = false;
        for (int axis = 0; axis < 3; ++axis)
            for (int sgn = -1; sgn <= 1; sgn += 2) {
                double a = bz1, b = by, g = bz2;
                (axis == 0 ? a : axis == 1 ? b : g) += sgn * step;
                const double v =
                    detail::pose_objective(detail::zyz_matrix(a, b, g), cam, world);
                if (v < best) {
                    best = v;
                    bz1 = a;
                    by = b;
                    bz2 = g;
                    improved = true;
                }
            }
        if (!improved)
            step *= 0.5;
    }

    // The z-y-z parameterization double-covers the rotation group:
    // (a, b, c) and (a + 180, -b, c + 180) are the same rotation. Report the
    // representative with a non-negative middle angle.
    if (by < 0.0 && by > -180.0 + 1e-9) {
        bz1 += 180.0;
        by = -by;
        bz2 += 180.0;
    }
    result.pose = PoseRotation::of(bz1, by, bz2);
    result.residual_rms_deg = std::sqrt(std::max(best, 0.0) / static_cast<double>(m));
    return result;
}

// ---- color classification ----------------------------------------------------

/// Weighted-Euclidean color distance: sqrt((2 + rbar/256) dR^2 + 4 dG^2 +
/// (2 + (255 - rbar)/256) dB^2) with rbar the mean red component.
inline double color_difference(const Rgb &c1, const Rgb &c2)
{
    const double rbar = (static_cast<double>(c1.r) + c2.r) / 2.0;
    const double dr = static_cast<double>(c1.r) - c2.r;
    const double dg = static_cast<double>(c1.g) - c2.g;
    const double db = static_cast<double>(c1.b) - c2.b;
    return std::sqrt((2.0 + rbar / 256.0) * dr * dr + 4.0 * dg * dg +
                     (2.0 + (255.0 - rbar) / 256.0) * db * db);
}

struct PrefilterParams
{
    Rgb ref_color{63, 71, 204};
    double threshold = 50.0;
};

/// Pixels whose color difference to the annotation reference color is below
/// the threshold; this is the rough pre-highlighted foliage region.
inline std::vector<std::pair<int, int>> prefilter_foliage(const Image &img,
                                                          const PrefilterParams &p = {})
{
    if (img.width() <= 0 || img.height() <= 0)
        throw std::invalid_argument("empty image");
    std::vector<std::pair<int, int>> out;
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            if (color_difference(img.at(x, y), p.ref_color) < p.threshold)
                out.emplace_back(x, y);
    return out;
}

/// Majority vote among the n nearest training samples under
/// color_difference. Equal distances order by training index; an even vote
/// splits to non-foliage.
inline bool knn_classify(const Rgb &query, const std::vector<LabeledPixel> &training,
                         int n_neighbors = 22)
{
    if (training.empty())
        throw std::invalid_argument("empty training set");
    if (n_neighbors < 1)
        throw std::invalid_argument("n_neighbors must be at least 1");
    if (static_cast<std::size_t>(n_neighbors) > training.size())
        throw std::invalid_argument("training set smaller than n_neighbors");

    std::vector<std::pair<double, std::size_t>> dist;
    dist.reserve(training.size());
    for (std::size_t i = 0; i < training.size(); ++i)
        dist.emplace_back(color_difference(query, training[i].color), i);
    std::sort(dist.begin(), dist.end());

    int votes_foliage = 0;
    for (int k = 0; k < n_neighbors; ++k)
        if (training[dist[k].second].foliage)
            ++votes_foliage;
    return votes_foliage > n_neighbors - votes_foliage;
}

// ---- twin construction ---------------------------------------------------------

struct TwinBuildParams
{
    double cell_deg = 0.1;
    int n_neighbors = 22;
    bool flip_vertical = true; // raster row 0 is the image top; ERP y = 0 is the
                               // reference (bottom) corner
    FoliageLossModel loss;
};

/// Runs the identification pipeline over one annotated panorama: prefilter,
/// KNN per pixel (cached by color), pixel -> camera angles -> world angles,
/// then rasterization of each foliage pixel's angular footprint into the
/// world-frame mask.
inline FoliageTwin build_twin(const Image &img, const ErpParams &erp,
                              const PoseRotation &pose,
                              const std::vector<LabeledPixel> &training,
                              const PrefilterParams &prefilter = {},
                              const TwinBuildParams &params = {})
{
    erp.validate();
    if (img.width() != erp.width || img.height() != erp.height)
        throw std::invalid_argument("image dimensions do not match ERP parameters");

    FoliageTwin twin = FoliageTwin::uniform(false, params.cell_deg);
    twin.pose = pose;
    twin.erp = erp;
    twin.loss = params.loss;

    bool has_f = false, has_n = false;
    for (const auto &s : training)
        (s.foliage ? has_f : has_n) = true;
    if (!has_f || !has_n)
        throw std::invalid_argument("training set must contain both classes");

    std::unordered_map<std::uint32_t, bool> cache;
    auto classify = [&](const Rgb &c) {
        const std::uint32_t key =
            (std::uint32_t(c.r) << 16) | (std::uint32_t(c.g) << 8) | c.b;
        auto it = cache.find(key);
        if (it != cache.end())
            return it->second;
        const bool v = knn_classify(c, training, params.n_neighbors);
        cache.emplace(key, v);
        return v;
    };

    const int span_az =
        static_cast<int>(std::ceil(0.5 * erp.dphi_deg / params.cell_deg)) + 1;
    const int span_el =
        static_cast<int>(std::ceil(0.5 * erp.dtheta_deg / params.cell_deg)) + 1;

    for (const auto &[x, ry] : prefilter_foliage(img, prefilter)) {
        if (!classify(img.at(x, ry)))
            continue;
        const int ey = params.flip_vertical ? erp.height - 1 - ry : ry;
        const Direction world = rotate_zyz(pose, erp_pixel_to_camera(x, ey, erp));

        // Mark every cell whose center falls inside the pixel's angular box.
        const int ia0 = twin.az_index(world.azimuth_deg);
        const int ie0 = twin.el_index(world.elevation_deg);
        for (int de = -span_el; de <= span_el; ++de) {
            const int ie = ie0 + de;
            if (ie < 0 || ie >= twin.n_el)
                continue;
            if (std::abs(twin.el_center(ie) - world.elevation_deg) >
                0.5 * erp.dtheta_deg + 1e-12)
                continue;
            for (int da = -span_az; da <= span_az; ++da) {
                const int ia = ((ia0 + da) % twin.n_az + twin.n_az) % twin.n_az;
                if (std::abs(wrap_deg(twin.az_center(ia) - world.azimuth_deg)) >
                    0.5 * erp.dphi_deg + 1e-12)
                    continue;
                twin.set_cell(ia, ie, true);
            }
        }
    }
    return twin;
}

// ---- foliage coverage and loss ----------------------------------------------

/// Foliage coverage ratio: fraction of mask cells within the circular angular
/// window (planar metric on wrapped azimuth and elevation differences) that
/// are foliage.
inline double compute_fcr(const FoliageTwin &twin, const Direction &center,
                          double window_deg)
{
    if (!(window_deg > 0.0))
        throw std::invalid_argument("window radius must be positive");

    const int ie_lo = std::max(
        0, static_cast<int>(std::floor((center.elevation_deg - window_deg + 90.0) /
                                       twin.cell_deg)));
    const int ie_hi = std::min(
        twin.n_el - 1,
        static_cast<int>(
            std::ceil((center.elevation_deg + window_deg + 90.0) / twin.cell_deg)));

    int span = static_cast<int>(std::ceil(window_deg / twin.cell_deg)) + 1;
    span = std::min(span, twin.n_az / 2);
    const int ia0 = twin.az_index(center.azimuth_deg);

    long total = 0, foliage = 0;
    for (int ie = ie_lo; ie <= ie_hi; ++ie) {
        const double de = twin.el_center(ie) - center.elevation_deg;
        for (int da = -span; da <= span; ++da) {
            const int ia = ((ia0 + da) % twin.n_az + twin.n_az) % twin.n_az;
            const double dp = wrap_deg(twin.az_center(ia) - center.azimuth_deg);
            if (std::sqrt(dp * dp + de * de) >= window_deg)
                continue;
            ++total;
            if (twin.cell(ia, ie))
                ++foliage;
        }
    }
    if (total == 0)
        throw std::invalid_argument("window contains zero mask cells");
    return static_cast<double>(foliage) / static_cast<double>(total);
}

/// dB path-gain adjustment for a given coverage ratio: zero below the
/// threshold, slope * (fcr - threshold) above it, plus an optional scatter
/// draw. Negative values attenuate.
inline double foliage_loss(double fcr, const FoliageLossModel &model,
                           std::optional<double> chi_db = std::nullopt)
{
    if (fcr < -1e-12 || fcr > 1.0 + 1e-12)
        throw std::invalid_argument("FCR must lie in [0, 1]");
    fcr = std::clamp(fcr, 0.0, 1.0);
    const double det =
        fcr < model.fcr_threshold ? 0.0 : model.slope_db * (fcr - model.fcr_threshold);
    return det + chi_db.value_or(0.0);
}

/// Least-squares fit of the segmented-linear loss model over a grid of
/// threshold candidates, picking the residual-standard-deviation minimizer.
/// Input samples are (fcr, excess path gain dB) pairs.
inline FoliageLossModel fit_foliage_loss(
    const std::vector<std::pair<double, double>> &samples)
{
    if (samples.size() < 10)
        throw std::invalid_argument("need at least 10 samples");
    double fmin = 1.0, fmax = 0.0;
    for (const auto &[fcr, y] : samples) {
        if (fcr < -1e-12 || fcr > 1.0 + 1e-12)
            throw std::invalid_argument("sample FCR outside [0, 1]");
        fmin = std::min(fmin, fcr);
        fmax = std::max(fmax, fcr);
    }
    if (fmax - fmin < 1e-9)
        throw std::invalid_argument("one-sided samples: FCR values are all equal");

    struct Fit
    {
        double a = 0, r = 0, mu = 0, sigma = std::numeric_limits<double>::infinity();
    };
    auto eval = [&](double r) {
        Fit f;
        f.r = r;
        double sxy = 0, sxx = 0;
        for (const auto &[fcr, y] : samples)
            if (fcr >= r) {
                sxy += y * (fcr - r);
                sxx += (fcr - r) * (fcr - r);
            }
        f.a = sxx > 0 ? sxy / sxx : 0.0;
        double sum = 0, sum2 = 0;
        for (const auto &[fcr, y] : samples) {
            const double e = y - (fcr >= r ? f.a * (fcr - r) : 0.0);
            sum += e;
            sum2 += e * e;
        }
        const double n = static_cast<double>(samples.size());
        f.mu = sum / n;
        f.sigma = std::sqrt(std::max(sum2 / n - f.mu * f.mu, 0.0));
        return f;
    };

    Fit best;
    for (double r = 0.0; r < fmax; r += 0.005) {
        const Fit f = eval(r);
        if (f.sigma < best.sigma)
            best = f;
    }
    const double center = best.r;
    for (double r = std::max(0.0, center - 0.006); r < std::min(fmax, center + 0.006);
         r += 1e-4) {
        const Fit f = eval(r);
        if (f.sigma < best.sigma)
            best = f;
    }

    bool any_active = false;
    for (const auto &[fcr, y] : samples)
        if (fcr >= best.r) {
            any_active = true;
            break;
        }
    if (!any_active)
        throw std::invalid_argument("one-sided samples: no points above the threshold");

    FoliageLossModel model;
    model.slope_db = best.a;
    model.fcr_threshold = best.r;
    model.chi_mu_db = best.mu;
    model.chi_sigma_db = best.sigma;
    return model;
}

// ---- serialization -------------------------------------------------------------
//
// Twin on disk: a JSON metadata document (pose, ERP, resolution, loss model,
// mask file name) next to a P5 PGM mask raster. Mask row 0 holds the highest
// elevation band; 255 marks foliage.

inline void save_twin(const FoliageTwin &twin, const std::string &json_path,
                      const std::string &mask_filename = "twin_mask.pgm")
{
    namespace fs = std::filesystem;
    GrayImage mask;
    mask.width = twin.n_az;
    mask.height = twin.n_el;
    mask.data.resize(static_cast<std::size_t>(twin.n_az) * twin.n_el);
    for (int ie = 0; ie < twin.n_el; ++ie)
        for (int ia = 0; ia < twin.n_az; ++ia)
            mask.data[static_cast<std::size_t>(twin.n_el - 1 - ie) * twin.n_az + ia] =
                twin.cell(ia, ie) ? 255 : 0;
    const fs::path jp(json_path);
    save_pgm(mask, (jp.parent_path() / mask_filename).string());

    nlohmann::json doc;
    doc["cell_deg"] = twin.cell_deg;
    doc["n_az"] = twin.n_az;
    doc["n_el"] = twin.n_el;
    doc["pose"] = {{"alpha_z1_deg", twin.pose.alpha_z1_deg},
                   {"alpha_y_deg", twin.pose.alpha_y_deg},
                   {"alpha_z2_deg", twin.pose.alpha_z2_deg}};
    doc["erp"] = {{"width", twin.erp.width},     {"height", twin.erp.height},
                  {"dphi_deg", twin.erp.dphi_deg}, {"dtheta_deg", twin.erp.dtheta_deg},
                  {"phi0_deg", twin.erp.phi0_deg}, {"theta0_deg", twin.erp.theta0_deg}};
    doc["loss_model"] = {{"slope_db", twin.loss.slope_db},
                         {"fcr_threshold", twin.loss.fcr_threshold},
                         {"chi_mu_db", twin.loss.chi_mu_db},
                         {"chi_sigma_db", twin.loss.chi_sigma_db},
                         {"window_deg", twin.loss.window_deg}};
    doc["mask_file"] = mask_filename;

    std::ofstream out(json_path);
    if (!out)
        throw std::runtime_error("cannot write twin file: " + json_path);
    out << doc.dump(2) << "\n";
}

inline FoliageTwin load_twin(const std::string &json_path)
{
    namespace fs = std::filesystem;
    std::ifstream in(json_path);
    if (!in)
        throw std::runtime_error("cannot open twin file: " + json_path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception &e) {
        throw std::runtime_error(std::string("twin parse failure: ") + e.what());
    }

    FoliageTwin twin;
    try {
        twin.cell_deg = doc.at("cell_deg").get<double>();
        twin.n_az = doc.at("n_az").get<int>();
        twin.n_el = doc.at("n_el").get<int>();
        const auto &p = doc.at("pose");
        twin.pose = {p.at("alpha_z1_deg").get<double>(), p.at("alpha_y_deg").get<double>(),
                     p.at("alpha_z2_deg").get<double>()};
        const auto &e = doc.at("erp");
        twin.erp = {e.at("width").get<int>(),        e.at("height").get<int>(),
                    e.at("dphi_deg").get<double>(),  e.at("dtheta_deg").get<double>(),
                    e.at("phi0_deg").get<double>(),  e.at("theta0_deg").get<double>()};
        const auto &l = doc.at("loss_model");
        twin.loss = {l.at("slope_db").get<double>(), l.at("fcr_threshold").get<double>(),
                     l.at("chi_mu_db").get<double>(), l.at("chi_sigma_db").get<double>(),
                     l.at("window_deg").get<double>()};
        const fs::path mask_path =
            fs::path(json_path).parent_path() / doc.at("mask_file").get<std::string>();
        const GrayImage mask = load_pgm(mask_path.string());
        if (mask.width != twin.n_az || mask.height != twin.n_el)
            throw std::runtime_error("twin mask dimensions do not match metadata");
        twin.mask.assign(static_cast<std::size_t>(twin.n_az) * twin.n_el, 0);
        for (int ie = 0; ie < twin.n_el; ++ie)
            for (int ia = 0; ia < twin.n_az; ++ia)
                twin.set_cell(
                    ia, ie,
                    mask.data[static_cast<std::size_t>(twin.n_el - 1 - ie) * twin.n_az +
                              ia] != 0);
    } catch (const nlohmann::json::exception &e) {
        throw std::runtime_error(std::string("twin parse failure: ") + e.what());
    }
    return twin;
}

} // namespace twinchan
