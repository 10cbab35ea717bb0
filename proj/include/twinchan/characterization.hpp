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

#include <deque>
#include <ostream>
#include <string>
#include <vector>

#include "twinchan/format.hpp"
#include "twinchan/raytrace.hpp"
#include "twinchan/synthesis.hpp"

namespace twinchan {

// ---- dynamic-range thresholding -------------------------------------------------

/// Keeps components above the processing threshold: the stronger of
/// (strongest gain - dynamic range) and (noise floor + 20 dB). The strongest
/// component always survives.
inline std::vector<Mpc> apply_dynamic_range(const std::vector<Mpc> &mpcs,
                                            double dynamic_range_db = 30.0,
                                            double noise_floor_db = -180.5)
{
    if (mpcs.empty())
        throw std::invalid_argument("empty component list");
    if (!(dynamic_range_db > 0.0))
        throw std::invalid_argument("dynamic range must be positive");
    double strongest = mpcs.front().gain_db;
    for (const auto &m : mpcs)
        strongest = std::max(strongest, m.gain_db);
    const double cutoff_db = std::max(strongest - dynamic_range_db, noise_floor_db + 20.0);
    std::vector<Mpc> out;
    for (const auto &m : mpcs)
        if (m.gain_db >= cutoff_db - 1e-12)
            out.push_back(m);
    return out;
}

// ---- spreads ---------------------------------------------------------------------

/// Power-weighted RMS delay spread (second central moment of the delay
/// profile), in seconds.
inline double rms_delay_spread(const std::vector<Mpc> &mpcs)
{
    if (mpcs.empty())
        throw std::invalid_argument("empty component list");
    double psum = 0.0, m1 = 0.0;
    for (const auto &m : mpcs) {
        const double p = std::pow(10.0, m.gain_db / 10.0);
        psum += p;
        m1 += p * m.delay_s;
    }
    m1 /= psum;
    // Centered second moment; the uncentered form cancels catastrophically.
    double var = 0.0;
    for (const auto &m : mpcs) {
        const double p = std::pow(10.0, m.gain_db / 10.0);
        var += p * (m.delay_s - m1) * (m.delay_s - m1);
    }
    return std::sqrt(std::max(var / psum, 0.0));
}

enum class AngleDim { aoa_az, aoa_el, aod_az, aod_el };

/// Power-weighted circular RMS angular spread in degrees: the minimum over
/// the wrap seam of the weighted standard deviation of the unwrapped angles,
/// equivalent to minimizing over a reference rotation.
inline double angular_spread(const std::vector<Mpc> &mpcs, AngleDim dim)
{
    if (mpcs.empty())
        throw std::invalid_argument("empty component list");

    std::vector<std::pair<double, double>> av; // (angle, linear power)
    av.reserve(mpcs.size());
    for (const auto &m : mpcs) {
        double a = 0.0;
        switch (dim) {
        case AngleDim::aoa_az: a = m.aoa.azimuth_deg; break;
        case AngleDim::aoa_el: a = m.aoa.elevation_deg; break;
        case AngleDim::aod_az: a = m.aod.azimuth_deg; break;
        case AngleDim::aod_el: a = m.aod.elevation_deg; break;
        }
        av.emplace_back(wrap_deg(a), std::pow(10.0, m.gain_db / 10.0));
    }
    std::sort(av.begin(), av.end());

    // Every gap between consecutive sorted angles is a candidate seam; with
    // the seam fixed the optimal rotation is the weighted mean. Centered
    // second moment to avoid cancellation.
    const std::size_t n = av.size();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t cut = 0; cut < n; ++cut) {
        double w = 0.0, s1 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double a = i < cut ? av[i].first + 360.0 : av[i].first;
            w += av[i].second;
            s1 += av[i].second * a;
        }
        const double mean = s1 / w;
        double var = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double a = i < cut ? av[i].first + 360.0 : av[i].first;
            var += av[i].second * (a - mean) * (a - mean);
        }
        best = std::min(best, var / w);
    }
    return std::sqrt(std::max(best, 0.0));
}

// ---- K-factor --------------------------------------------------------------------

/// dB ratio of the strongest cluster power to the sum of all others.
inline double k_factor(const std::vector<double> &cluster_linear_powers)
{
    if (cluster_linear_powers.size() < 2)
        throw std::invalid_argument("insufficient clusters");
    double strongest = 0.0, total = 0.0;
    for (double p : cluster_linear_powers) {
        if (!(p >= 0.0))
            throw std::invalid_argument("negative cluster power");
        strongest = std::max(strongest, p);
        total += p;
    }
    const double rest = total - strongest;
    if (rest <= 0.0)
        throw std::invalid_argument("all power in one cluster");
    return 10.0 * std::log10(strongest / rest);
}

// ---- MCD-DBSCAN clustering ---------------------------------------------------------

struct McdConfig
{
    double eps = 0.2;
    int min_pts = 3;
    double zeta = 8.0;        // delay weight
    bool include_aod = false; // add an AoD angular term to the distance
};

struct ClusterAssignment
{
    std::vector<int> labels; // cluster index per component, -1 for noise
    int n_clusters = 0;
    std::vector<std::vector<int>> members;
};

/// DBSCAN over the multipath component distance
///   MCD^2 = |u_i - u_j|^2 / 4 + (zeta * |t_i - t_j| * t_std / t_max^2)^2
/// with u the AoA unit vectors, t_std the delay standard deviation and t_max
/// the largest pairwise delay difference. Border points attach to the lowest
/// cluster index among their core neighbors, which makes the assignment
/// independent of input order.
inline ClusterAssignment cluster_mcd_dbscan(const std::vector<Mpc> &mpcs,
                                            const McdConfig &cfg = {})
{
    const std::size_t n = mpcs.size();
    if (n == 0)
        throw std::invalid_argument("empty component list");

    std::vector<Vec3> ua(n), ud(n);
    std::vector<double> tau(n);
    double tmin = mpcs[0].delay_s, tmax = mpcs[0].delay_s, tsum = 0.0, tsum2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ua[i] = unit_vector(mpcs[i].aoa);
        ud[i] = unit_vector(mpcs[i].aod);
        tau[i] = mpcs[i].delay_s;
        tmin = std::min(tmin, tau[i]);
        tmax = std::max(tmax, tau[i]);
        tsum += tau[i];
        tsum2 += tau[i] * tau[i];
    }
    const double tspan = tmax - tmin;
    const double tmean = tsum / static_cast<double>(n);
    const double tstd =
        std::sqrt(std::max(tsum2 / static_cast<double>(n) - tmean * tmean, 0.0));

    auto mcd = [&](std::size_t i, std::size_t j) {
        const Vec3 da = ua[i] - ua[j];
        double d2 = da.dot(da) / 4.0;
        if (cfg.include_aod) {
            const Vec3 dd = ud[i] - ud[j];
            d2 += dd.dot(dd) / 4.0;
        }
        if (tspan > 0.0) {
            const double dt = cfg.zeta * std::abs(tau[i] - tau[j]) * tstd / (tspan * tspan);
            d2 += dt * dt;
        }
        return std::sqrt(d2);
    };

    std::vector<std::vector<int>> neighbors(n);
    for (std::size_t i = 0; i < n; ++i) {
        neighbors[i].push_back(static_cast<int>(i)); // a point is its own neighbor
        for (std::size_t j = i + 1; j < n; ++j)
            if (mcd(i, j) <= cfg.eps) {
                neighbors[i].push_back(static_cast<int>(j));
                neighbors[j].push_back(static_cast<int>(i));
            }
    }
    std::vector<bool> core(n);
    for (std::size_t i = 0; i < n; ++i)
        core[i] = neighbors[i].size() >= static_cast<std::size_t>(cfg.min_pts);

    ClusterAssignment out;
    out.labels.assign(n, -1);

    // Expand clusters from core points in index order.
    for (std::size_t i = 0; i < n; ++i) {
        if (!core[i] || out.labels[i] != -1)
            continue;
        const int cluster = out.n_clusters++;
        std::deque<int> queue{static_cast<int>(i)};
        out.labels[i] = cluster;
        while (!queue.empty()) {
            const int p = queue.front();
            queue.pop_front();
            if (!core[static_cast<std::size_t>(p)])
                continue;
            for (int q : neighbors[static_cast<std::size_t>(p)])
                if (out.labels[static_cast<std::size_t>(q)] == -1 &&
                    core[static_cast<std::size_t>(q)]) {
                    out.labels[static_cast<std::size_t>(q)] = cluster;
                    queue.push_back(q);
                }
        }
    }
    // Border points: lowest cluster index among core neighbors.
    for (std::size_t i = 0; i < n; ++i) {
        if (core[i])
            continue;
        int best = -1;
        for (int q : neighbors[i])
            if (core[static_cast<std::size_t>(q)]) {
                const int lbl = out.labels[static_cast<std::size_t>(q)];
                if (best == -1 || lbl < best)
                    best = lbl;
            }
        out.labels[i] = best;
    }

    out.members.resize(static_cast<std::size_t>(out.n_clusters));
    for (std::size_t i = 0; i < n; ++i)
        if (out.labels[i] >= 0)
            out.members[static_cast<std::size_t>(out.labels[i])].push_back(
                static_cast<int>(i));
    return out;
}

// ---- close-in path loss fit -----------------------------------------------------

struct CiFit
{
    double ple = 0.0;         // path loss exponent
    double sf_sigma_db = 0.0; // shadow-fading standard deviation (RMS residual)
    double d0_m = 1.0;
    double f0_hz = 0.0;
};

/// Close-in reference-distance fit: PL(d) = FSPL(f0, d0) + 10 n log10(d/d0)
/// with the intercept pinned to free space at the 1 m reference. Closed-form
/// least squares for the single slope; input is (distance m, path loss dB)
/// with the positive-loss convention.
inline CiFit fit_ci(const std::vector<std::pair<double, double>> &samples, double f0_hz)
{
    if (samples.size() < 2)
        throw std::invalid_argument("need at least 2 samples");
    const double d0 = 1.0;
    const double intercept_db = -fspl_gain_db(f0_hz, d0); // positive loss at d0

    double dmin = samples.front().first, dmax = samples.front().first;
    for (const auto &[d, pl] : samples) {
        if (!(d > d0))
            throw std::invalid_argument("distances must exceed the 1 m reference");
        dmin = std::min(dmin, d);
        dmax = std::max(dmax, d);
    }
    if (dmax - dmin < 1e-12)
        throw std::invalid_argument("degenerate abscissa: all distances equal");

    double sxx = 0.0, sxy = 0.0;
    for (const auto &[d, pl] : samples) {
        const double x = 10.0 * std::log10(d / d0);
        sxx += x * x;
        sxy += x * (pl - intercept_db);
    }
    CiFit fit;
    fit.f0_hz = f0_hz;
    fit.d0_m = d0;
    fit.ple = sxy / sxx;
    double rss = 0.0;
    for (const auto &[d, pl] : samples) {
        const double e = pl - intercept_db - 10.0 * fit.ple * std::log10(d / d0);
        rss += e * e;
    }
    fit.sf_sigma_db = std::sqrt(rss / static_cast<double>(samples.size()));
    return fit;
}

// ---- per-realization metrics ------------------------------------------------------

struct MetricsOptions
{
    bool threshold_first = true; // apply the dynamic range before the spreads
    double dynamic_range_db = 30.0;
    double noise_floor_db = -180.5;
    McdConfig mcd;
};

struct MetricsRow
{
    std::string realization_id;
    ChannelState state = ChannelState::outage;
    double pl_db = std::numeric_limits<double>::infinity();
    double ds_s = std::numeric_limits<double>::quiet_NaN();
    double asa_deg = std::numeric_limits<double>::quiet_NaN();
    double esa_deg = std::numeric_limits<double>::quiet_NaN();
    double kf_db = std::numeric_limits<double>::quiet_NaN();
    int n_clusters = 0;
};

inline MetricsRow compute_metrics(const std::string &id, ChannelState state,
                                  const std::vector<Mpc> &mpcs,
                                  const MetricsOptions &options = {})
{
    MetricsRow row;
    row.realization_id = id;
    row.state = state;
    if (mpcs.empty())
        return row;

    const std::vector<Mpc> kept =
        options.threshold_first
            ? apply_dynamic_range(mpcs, options.dynamic_range_db, options.noise_floor_db)
            : mpcs;

    double p = 0.0;
    for (const auto &m : kept)
        p += std::pow(10.0, m.gain_db / 10.0);
    row.pl_db = -10.0 * std::log10(p);
    row.ds_s = rms_delay_spread(kept);
    row.asa_deg = angular_spread(kept, AngleDim::aoa_az);
    row.esa_deg = angular_spread(kept, AngleDim::aoa_el);

    const ClusterAssignment clusters = cluster_mcd_dbscan(kept, options.mcd);
    row.n_clusters = clusters.n_clusters;
    if (clusters.n_clusters >= 2) {
        std::vector<double> powers(static_cast<std::size_t>(clusters.n_clusters), 0.0);
        for (std::size_t i = 0; i < kept.size(); ++i)
            if (clusters.labels[i] >= 0)
                powers[static_cast<std::size_t>(clusters.labels[i])] +=
                    std::pow(10.0, kept[i].gain_db / 10.0);
        row.kf_db = k_factor(powers);
    }
    return row;
}

inline const char *metrics_csv_header()
{
    return "realization_id,state,pl_db,ds_s,asa_deg,esa_deg,kf_db,n_clusters";
}

inline void write_metrics_csv(std::ostream &os, const MetricsRow &row)
{
    os << row.realization_id << ',' << to_string(row.state) << ','
       << format_double(row.pl_db) << ',' << format_double(row.ds_s) << ','
       << format_double(row.asa_deg) << ',' << format_double(row.esa_deg) << ','
       << format_double(row.kf_db) << ',' << row.n_clusters << '\n';
}

} // namespace twinchan
