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

#include <complex>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "twinchan/foliage.hpp"
#include "twinchan/format.hpp"
#include "twinchan/raytrace.hpp"
#include "twinchan/stochastic.hpp"

namespace twinchan {

enum class Origin { los, reflection, stochastic };
enum class ChannelState { los, olos, nlos, outage };

inline const char *to_string(Origin o)
{
    switch (o) {
    case Origin::los: return "los";
    case Origin::reflection: return "reflection";
    default: return "stochastic";
    }
}

inline const char *to_string(ChannelState s)
{
    switch (s) {
    case ChannelState::los: return "los";
    case ChannelState::olos: return "olos";
    case ChannelState::nlos: return "nlos";
    default: return "outage";
    }
}

inline ChannelState channel_state_from_string(const std::string &s)
{
    if (s == "los") return ChannelState::los;
    if (s == "olos") return ChannelState::olos;
    if (s == "nlos") return ChannelState::nlos;
    if (s == "outage") return ChannelState::outage;
    throw std::invalid_argument("unknown channel state: " + s);
}

inline Origin origin_from_string(const std::string &s)
{
    if (s == "los") return Origin::los;
    if (s == "reflection") return Origin::reflection;
    if (s == "stochastic") return Origin::stochastic;
    throw std::invalid_argument("unknown MPC origin: " + s);
}

struct Mpc
{
    double gain_db = 0.0; // path gain, <= 0 in the far field
    double phase_rad = 0.0;
    double delay_s = 0.0;
    Direction aod, aoa;
    Origin origin = Origin::los;
};

struct ChannelRealization
{
    std::vector<Mpc> mpcs;
    ChannelState state = ChannelState::outage;
    Vec3 tx, rx;
    double frequency_hz = 0.0;
    std::uint64_t seed = 0;
};

struct AssembleOptions
{
    bool with_stochastic = true;   // generate non-dominant clusters
    bool with_foliage_chi = true;  // draw the Gaussian foliage-loss scatter
};

/// Generates one channel realization for a receiver position.
///
/// Steps: (1) deterministic dominant candidates from first-order ray tracing;
/// no candidate means geometric outage and nothing else runs. (2) Each
/// dominant path gain is adjusted by the twin's foliage loss evaluated at its
/// departure direction (for reflections that is the Tx-to-scatterer segment
/// only). (3) The state classifies as nlos when the geometric line of sight
/// is blocked, olos when clear but the coverage ratio at the LoS departure
/// reaches the loss threshold, los otherwise. (4) Non-dominant clusters are
/// drawn from the state's statistics; their total power sits one drawn
/// K-factor below the strongest dominant path and their delays start at the
/// first dominant arrival. (5) Deterministic phases follow the electrical
/// length, -2*pi*f*delay mod 2*pi.
inline ChannelRealization assemble(const Scene &scene, const FoliageTwin &twin,
                                   const StateParamsSet &params, const Vec3 &rx,
                                   std::uint64_t seed, const AssembleOptions &options = {})
{
    ChannelRealization real;
    real.tx = scene.tx;
    real.rx = rx;
    real.frequency_hz = scene.frequency_hz;
    real.seed = seed;

    const std::vector<PathCandidate> dominant = trace_first_order(scene, rx);
    if (dominant.empty()) {
        real.state = ChannelState::outage;
        return real;
    }

    Rng chi_rng(split_seed(seed, 0));
    Rng lsp_rng(split_seed(seed, 1));
    Rng cluster_rng(split_seed(seed, 2));

    bool los_clear = false;
    double los_fcr = 0.0;
    for (const auto &cand : dominant) {
        const double fcr = compute_fcr(twin, cand.aod, twin.loss.window_deg);
        std::optional<double> chi;
        if (options.with_foliage_chi)
            chi = chi_rng.normal(twin.loss.chi_mu_db, twin.loss.chi_sigma_db);

        Mpc mpc;
        mpc.gain_db = cand.gain_db + foliage_loss(fcr, twin.loss, chi);
        mpc.delay_s = cand.delay_s;
        mpc.aod = cand.aod;
        mpc.aoa = cand.aoa;
        mpc.origin =
            cand.kind == PathCandidate::Kind::los ? Origin::los : Origin::reflection;
        mpc.phase_rad = std::fmod(-two_pi * scene.frequency_hz * cand.delay_s, two_pi);
        if (mpc.phase_rad < 0.0)
            mpc.phase_rad += two_pi;
        real.mpcs.push_back(mpc);

        if (cand.kind == PathCandidate::Kind::los) {
            los_clear = true;
            los_fcr = fcr;
        }
    }

    real.state = !los_clear ? ChannelState::nlos
                 : los_fcr >= twin.loss.fcr_threshold ? ChannelState::olos
                                                      : ChannelState::los;

    if (options.with_stochastic) {
        const StateParams &sp = params.for_state(
            real.state == ChannelState::los    ? LosState::los
            : real.state == ChannelState::olos ? LosState::olos
                                               : LosState::nlos);
        const LspDraw lsp = draw_lsp(sp, lsp_rng);

        std::size_t strongest = 0;
        double first_arrival = real.mpcs.front().delay_s;
        for (std::size_t i = 0; i < real.mpcs.size(); ++i) {
            if (real.mpcs[i].gain_db > real.mpcs[strongest].gain_db)
                strongest = i;
            first_arrival = std::min(first_arrival, real.mpcs[i].delay_s);
        }
        const double total_stoch_db = real.mpcs[strongest].gain_db - lsp.kf_db;

        const auto clusters =
            generate_clusters(lsp, real.mpcs[strongest].aod, real.mpcs[strongest].aoa,
                              sp, params.r_tau, cluster_rng);
        for (const auto &c : clusters)
            for (const auto &r : c.rays) {
                Mpc mpc;
                mpc.gain_db =
                    total_stoch_db + 10.0 * std::log10(c.power_fraction * r.power_fraction);
                mpc.delay_s = first_arrival + c.excess_delay_s + r.delay_offset_s;
                mpc.aoa = Direction::of(
                    c.aoa_centroid.azimuth_deg + r.aoa_az_off_deg,
                    std::clamp(c.aoa_centroid.elevation_deg + r.aoa_el_off_deg, -90.0,
                               90.0));
                mpc.aod = Direction::of(
                    c.aod_centroid.azimuth_deg + r.aod_az_off_deg,
                    std::clamp(c.aod_centroid.elevation_deg + r.aod_el_off_deg, -90.0,
                               90.0));
                mpc.phase_rad = r.phase_rad;
                mpc.origin = Origin::stochastic;
                real.mpcs.push_back(mpc);
            }
    }
    return real;
}

/// Total path loss (positive dB) of a realization: the dB inverse of the
/// summed linear power over all components. Infinite for outage.
inline double path_loss_db(const ChannelRealization &real)
{
    if (real.mpcs.empty())
        return std::numeric_limits<double>::infinity();
    double p = 0.0;
    for (const auto &m : real.mpcs)
        p += std::pow(10.0, m.gain_db / 10.0);
    return -10.0 * std::log10(p);
}

// ---- sampled impulse response -------------------------------------------------

struct Cir
{
    std::vector<std::complex<double>> taps;
    double tap_spacing_s = 1.0 / 1.536e9;
    std::vector<std::string> warnings;
};

inline constexpr double default_tap_spacing_s = 1.0 / 1.536e9; // 0.651 ns
inline constexpr int default_n_taps = 2048;

/// Accumulates each component's complex amplitude into the nearest delay bin.
/// Delays past the last representable bin wrap, mirroring the circular shift
/// of a correlation sounder whose unambiguous window is exceeded; every wrap
/// is reported in the warnings list.
inline Cir sample_cir(const ChannelRealization &real,
                      double tap_spacing_s = default_tap_spacing_s,
                      int n_taps = default_n_taps)
{
    if (real.mpcs.empty())
        throw std::invalid_argument("cannot sample an outage realization");
    if (!(tap_spacing_s > 0.0) || n_taps < 1)
        throw std::invalid_argument("invalid CIR sampling grid");

    Cir cir;
    cir.tap_spacing_s = tap_spacing_s;
    cir.taps.assign(static_cast<std::size_t>(n_taps), {0.0, 0.0});
    for (const auto &m : real.mpcs) {
        long long bin = std::llround(m.delay_s / tap_spacing_s);
        if (bin >= n_taps) {
            const long long orig = bin;
            while (bin >= n_taps)
                bin -= n_taps - 1;
            cir.warnings.push_back("delay " + format_double(m.delay_s) +
                                   " s beyond the window: bin " + std::to_string(orig) +
                                   " wrapped to " + std::to_string(bin));
        }
        const double amp = std::pow(10.0, m.gain_db / 20.0);
        cir.taps[static_cast<std::size_t>(bin)] +=
            std::polar(amp, m.phase_rad);
    }
    return cir;
}

struct PdpPoint
{
    double delay_s = 0.0;
    double power_db = 0.0;
};

/// Power-delay profile: one point per component, sorted by delay.
inline std::vector<PdpPoint> pdp(const ChannelRealization &real)
{
    if (real.mpcs.empty())
        throw std::invalid_argument("cannot compute the PDP of an outage realization");
    std::vector<PdpPoint> out;
    out.reserve(real.mpcs.size());
    for (const auto &m : real.mpcs)
        out.push_back({m.delay_s, m.gain_db});
    std::stable_sort(out.begin(), out.end(),
                     [](const PdpPoint &a, const PdpPoint &b) { return a.delay_s < b.delay_s; });
    return out;
}

// ---- record I/O ----------------------------------------------------------------
//
// MPC records, one per component:
//   realization_id, state, origin, gain_db, phase_rad, delay_s,
//   aod_az, aod_el, aoa_az, aoa_el
// as CSV and as line-delimited JSON. CIR records: bin_index, delay_s, re, im.

inline const char *mpc_csv_header()
{
    return "realization_id,state,origin,gain_db,phase_rad,delay_s,aod_az,aod_el,aoa_az,"
           "aoa_el";
}

inline void write_mpcs_csv(std::ostream &os, const std::string &realization_id,
                           const ChannelRealization &real)
{
    for (const auto &m : real.mpcs)
        os << realization_id << ',' << to_string(real.state) << ',' << to_string(m.origin)
           << ',' << format_double(m.gain_db) << ',' << format_double(m.phase_rad) << ','
           << format_double(m.delay_s) << ',' << format_double(m.aod.azimuth_deg) << ','
           << format_double(m.aod.elevation_deg) << ',' << format_double(m.aoa.azimuth_deg)
           << ',' << format_double(m.aoa.elevation_deg) << '\n';
}

inline void write_mpcs_jsonl(std::ostream &os, const std::string &realization_id,
                             const ChannelRealization &real)
{
    for (const auto &m : real.mpcs) {
        nlohmann::json j;
        j["realization_id"] = realization_id;
        j["state"] = to_string(real.state);
        j["origin"] = to_string(m.origin);
        j["gain_db"] = m.gain_db;
        j["phase_rad"] = m.phase_rad;
        j["delay_s"] = m.delay_s;
        j["aod_az"] = m.aod.azimuth_deg;
        j["aod_el"] = m.aod.elevation_deg;
        j["aoa_az"] = m.aoa.azimuth_deg;
        j["aoa_el"] = m.aoa.elevation_deg;
        os << j.dump() << '\n';
    }
}

inline void write_cir_csv(std::ostream &os, const Cir &cir)
{
    os << "bin_index,delay_s,re,im\n";
    for (std::size_t i = 0; i < cir.taps.size(); ++i)
        os << i << ',' << format_double(static_cast<double>(i) * cir.tap_spacing_s) << ','
           << format_double(cir.taps[i].real()) << ',' << format_double(cir.taps[i].imag())
           << '\n';
}

struct RealizationRecord
{
    std::string id;
    ChannelState state = ChannelState::outage;
    std::vector<Mpc> mpcs;
};

/// Reads MPC CSV records back, grouping rows by realization id in first-seen
/// order. Outage realizations have no rows, so they do not round-trip here.
inline std::vector<RealizationRecord> read_mpcs_csv(std::istream &is)
{
    std::vector<RealizationRecord> out;
    std::string line;
    if (!std::getline(is, line))
        throw std::runtime_error("empty MPC file");
    if (trim(line) != mpc_csv_header())
        throw std::runtime_error("unexpected MPC CSV header: " + line);
    while (std::getline(is, line)) {
        if (trim(line).empty())
            continue;
        const auto f = split_csv_line(line);
        if (f.size() != 10)
            throw std::runtime_error("malformed MPC row: " + line);
        Mpc m;
        m.gain_db = parse_double(f[3]);
        m.phase_rad = parse_double(f[4]);
        m.delay_s = parse_double(f[5]);
        m.aod = Direction::of(parse_double(f[6]), parse_double(f[7]));
        m.aoa = Direction::of(parse_double(f[8]), parse_double(f[9]));
        m.origin = origin_from_string(f[2]);
        if (out.empty() || out.back().id != f[0]) {
            RealizationRecord rec;
            rec.id = f[0];
            rec.state = channel_state_from_string(f[1]);
            out.push_back(std::move(rec));
        }
        out.back().mpcs.push_back(m);
    }
    return out;
}

} // namespace twinchan
