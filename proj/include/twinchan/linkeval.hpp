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

#include <ostream>
#include <vector>

#include "twinchan/synthesis.hpp"

namespace twinchan {

inline constexpr double boltzmann_k = 1.380649e-23; // J/K

/// Drops with modeled path loss beyond this are treated as outage.
inline constexpr double outage_path_loss_db = 160.0;

struct Sector
{
    double start_deg = -90.0;  // azimuth of the first sector edge
    double extent_deg = 180.0; // swept counterclockwise from the start
};

/// Single-cell SISO link budget and Monte Carlo configuration.
struct LinkConfig
{
    double pt_dbm = 13.0;
    double total_gain_db = 0.0; // Gt + Gr, swept as one variable
    double noise_figure_db = 10.0;
    double temperature_k = 300.0;
    double bandwidth_hz = 2e9;
    double snr_threshold_db = 0.0;
    double cell_radius_m = 100.0;
    double rx_height_m = 1.6;
    Sector sector;
    int n_drops = 10000;

    void validate() const
    {
        if (!(bandwidth_hz > 0.0) || !(temperature_k > 0.0))
            throw std::invalid_argument("bandwidth and temperature must be positive");
        if (n_drops < 1)
            throw std::invalid_argument("need at least one drop");
        if (!(cell_radius_m > 0.0))
            throw std::invalid_argument("cell radius must be positive");
        if (!(sector.extent_deg > 0.0) || sector.extent_deg > 360.0)
            throw std::invalid_argument("sector extent must lie in (0, 360]");
    }
};

/// Thermal noise floor in dBm: 10 log10(k T B / 1 mW) plus the noise figure.
inline double noise_floor_dbm(const LinkConfig &cfg)
{
    return 10.0 * std::log10(boltzmann_k * cfg.temperature_k * cfg.bandwidth_hz / 1e-3) +
           cfg.noise_figure_db;
}

/// Received SNR in dB for a positive path loss.
inline double snr_db(double path_loss_db, const LinkConfig &cfg)
{
    return cfg.pt_dbm + cfg.total_gain_db - path_loss_db - noise_floor_dbm(cfg);
}

/// Uniform drops over the circular-sector area at fixed receiver height:
/// radius scales with the square root of a uniform draw, azimuth is uniform
/// across the sector.
inline std::vector<Vec3> sample_rx_positions(const Vec3 &tx, const LinkConfig &cfg,
                                             Rng &rng)
{
    cfg.validate();
    std::vector<Vec3> out;
    out.reserve(static_cast<std::size_t>(cfg.n_drops));
    for (int i = 0; i < cfg.n_drops; ++i) {
        const double r = cfg.cell_radius_m * std::sqrt(rng.uniform());
        const double az = deg2rad(cfg.sector.start_deg + cfg.sector.extent_deg * rng.uniform());
        out.push_back({tx.x + r * std::cos(az), tx.y + r * std::sin(az), cfg.rx_height_m});
    }
    return out;
}

struct EvalResult
{
    double mean_se_bps_hz = 0.0;
    double coverage_ratio = 0.0;
};

namespace detail {

/// Per-drop modeled path loss for one radius; infinite marks outage (no
/// dominant path or loss beyond the outage threshold). Drop i uses the
/// sub-seed split(seed, 1 + i); the positions use split(seed, 0), so a fixed
/// master seed pins the whole drop set independently of the gain sweep.
inline std::vector<double> drop_path_losses(const Scene &scene, const FoliageTwin &twin,
                                            const StateParamsSet &params,
                                            const LinkConfig &cfg, std::uint64_t seed,
                                            const AssembleOptions &options)
{
    Rng pos_rng(split_seed(seed, 0));
    const std::vector<Vec3> positions = sample_rx_positions(scene.tx, cfg, pos_rng);
    std::vector<double> pl(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i) {
        const ChannelRealization real =
            assemble(scene, twin, params, positions[i], split_seed(seed, 1 + i), options);
        double loss = path_loss_db(real);
        if (real.state == ChannelState::outage || loss > outage_path_loss_db)
            loss = std::numeric_limits<double>::infinity();
        pl[i] = loss;
    }
    return pl;
}

inline EvalResult reduce(const std::vector<double> &path_losses, const LinkConfig &cfg)
{
    double se_sum = 0.0;
    long covered = 0;
    for (double pl : path_losses) {
        if (std::isinf(pl))
            continue; // outage: zero spectral efficiency, not covered
        const double g = snr_db(pl, cfg);
        se_sum += std::log2(1.0 + std::pow(10.0, g / 10.0));
        if (g > cfg.snr_threshold_db)
            ++covered;
    }
    const double n = static_cast<double>(path_losses.size());
    return {se_sum / n, static_cast<double>(covered) / n};
}

} // namespace detail

/// Monte Carlo link performance over one cell: mean spectral efficiency
/// (Shannon, equal bandwidth per drop) and the fraction of drops whose SNR
/// clears the threshold.
inline EvalResult evaluate(const Scene &scene, const FoliageTwin &twin,
                           const StateParamsSet &params, const LinkConfig &cfg,
                           std::uint64_t seed, const AssembleOptions &options = {})
{
    cfg.validate();
    return detail::reduce(detail::drop_path_losses(scene, twin, params, cfg, seed, options),
                          cfg);
}

struct SweepRow
{
    double total_gain_db = 0.0;
    double cell_radius_m = 0.0;
    double mean_se_bps_hz = 0.0;
    double coverage_ratio = 0.0;
    int n_drops = 0;
    std::uint64_t seed = 0;
};

/// Full cartesian sweep over gain and radius lists. Per radius the drop set
/// and channel realizations are generated once and reused across gains (the
/// path loss does not depend on the antenna gain), so the mean SE is
/// monotone in gain by construction.
inline std::vector<SweepRow> sweep(const Scene &scene, const FoliageTwin &twin,
                                   const StateParamsSet &params, LinkConfig cfg,
                                   const std::vector<double> &gains_db,
                                   const std::vector<double> &radii_m, std::uint64_t seed,
                                   const AssembleOptions &options = {})
{
    std::vector<SweepRow> rows;
    for (double radius : radii_m) {
        cfg.cell_radius_m = radius;
        cfg.validate();
        const std::vector<double> pl =
            detail::drop_path_losses(scene, twin, params, cfg, seed, options);
        for (double gain : gains_db) {
            cfg.total_gain_db = gain;
            const EvalResult r = detail::reduce(pl, cfg);
            rows.push_back({gain, radius, r.mean_se_bps_hz, r.coverage_ratio, cfg.n_drops,
                            seed});
        }
    }
    return rows;
}

inline const char *sweep_csv_header()
{
    return "total_gain_db,cell_radius_m,mean_se_bps_hz,coverage_ratio,n_drops,seed";
}

inline void write_sweep_csv(std::ostream &os, const SweepRow &row)
{
    os << format_double(row.total_gain_db) << ',' << format_double(row.cell_radius_m)
       << ',' << format_double(row.mean_se_bps_hz) << ','
       << format_double(row.coverage_ratio) << ',' << row.n_drops << ',' << row.seed
       << '\n';
}

} // namespace twinchan
