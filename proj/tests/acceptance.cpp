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
// Acceptance suite: ten numbered end-to-end checks with pinned tolerances,
// one pass/fail line each. Run with no arguments for the full suite or with
// a criterion number to run a single check. The exit status is the number of
// failed criteria.
//
// Criterion 8 carries a known-red cross-check: it compares the computed
// Johnson-Nyquist floor for a 1.536 GHz bandwidth at 290 K (-82.11 dBm)
// against a historical sounder reference of -83.5 dBm at a 0.5 dB tolerance.
// Physics puts the gap at 1.39 dB for any realistic temperature, so the
// check reports FAIL by construction; it is retained rather than loosened.

#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <iostream>
#include <sstream>

#include "oracles.hpp"
#include "twinchan/twinchan.hpp"

using namespace twinchan;

namespace {

struct Check
{
    int id;
    const char *title;
    std::function<bool(std::string &)> run;
};

std::string fmt(double v)
{
    std::ostringstream ss;
    ss.precision(6);
    ss << v;
    return ss.str();
}

double median_of(std::vector<double> v)
{
    std::nth_element(v.begin(), v.begin() + static_cast<long>(v.size() / 2), v.end());
    return v[v.size() / 2];
}

// ---- 1: rotation oracle -------------------------------------------------------------

bool crit_rotation_oracle(std::string &detail)
{
    Rng rng(101);
    double worst = 0.0;
    for (int p = 0; p < 100; ++p) {
        const PoseRotation pose = PoseRotation::of(
            rng.uniform(-180, 180), rng.uniform(-180, 180), rng.uniform(-180, 180));
        for (int i = 0; i < 10000; ++i) {
            const double az = rng.uniform(-180, 180);
            const double el = rng.uniform(-90, 90);
            const Direction got = rotate_zyz(pose, Direction::of(az, el));
            const auto want = oracles::rotate_zyz_matrix(
                pose.alpha_z1_deg, pose.alpha_y_deg, pose.alpha_z2_deg, az, el);
            worst = std::max(worst, oracles::angle_between_deg(
                                        oracles::unit_of(got.azimuth_deg, got.elevation_deg),
                                        want));
        }
    }
    detail = "worst deviation " + fmt(worst) + " deg over 1e6 rotations (tol 1e-6)";
    return worst < 1e-6;
}

// ---- 2: pose recovery ---------------------------------------------------------------

bool crit_pose_recovery(std::string &detail)
{
    const PoseRotation truth = PoseRotation::of(87.3, 3.6, 104.1);
    const std::vector<Direction> cam{Direction::of(12, 4), Direction::of(95, -20),
                                     Direction::of(-60, 35), Direction::of(170, -5),
                                     Direction::of(-130, 55)};
    std::vector<std::pair<Direction, Direction>> refs;
    for (const auto &c : cam)
        refs.emplace_back(c, rotate_zyz(truth, c));
    const PoseSolveResult r = solve_pose(refs);
    const double e1 = std::abs(wrap_deg(r.pose.alpha_z1_deg - truth.alpha_z1_deg));
    const double e2 = std::abs(wrap_deg(r.pose.alpha_y_deg - truth.alpha_y_deg));
    const double e3 = std::abs(wrap_deg(r.pose.alpha_z2_deg - truth.alpha_z2_deg));
    detail = "recovered (" + fmt(r.pose.alpha_z1_deg) + ", " + fmt(r.pose.alpha_y_deg) +
             ", " + fmt(r.pose.alpha_z2_deg) + ") deg, errors (" + fmt(e1) + ", " + fmt(e2) +
             ", " + fmt(e3) + ") deg (tol 0.1)";
    return e1 <= 0.1 && e2 <= 0.1 && e3 <= 0.1;
}

// ---- 3: KNN oracle ------------------------------------------------------------------

bool crit_knn_oracle(std::string &detail)
{
    Rng rng(103);
    std::vector<LabeledPixel> training;
    for (int i = 0; i < 400; ++i) {
        LabeledPixel p;
        p.foliage = i % 3 != 0;
        p.color = {static_cast<std::uint8_t>(rng.below(256)),
                   static_cast<std::uint8_t>(rng.below(256)),
                   static_cast<std::uint8_t>(rng.below(256))};
        training.push_back(p);
    }
    int mismatches = 0;
    for (int q = 0; q < 1000; ++q) {
        const Rgb query{static_cast<std::uint8_t>(rng.below(256)),
                        static_cast<std::uint8_t>(rng.below(256)),
                        static_cast<std::uint8_t>(rng.below(256))};
        if (knn_classify(query, training, 22) != oracles::knn_brute(query, training, 22))
            ++mismatches;
    }
    detail = std::to_string(mismatches) + " mismatches out of 1000 queries (must be 0)";
    return mismatches == 0;
}

// ---- 4: foliage loss model ----------------------------------------------------------

bool crit_foliage_loss(std::string &detail)
{
    const double full = foliage_loss(1.0, {});
    if (std::abs(full - (-19.89)) > 0.01) {
        detail = "full-coverage loss " + fmt(full) + " dB, want -19.89 +/- 0.01";
        return false;
    }

    auto samples = [](int n, double sigma, Rng &rng) {
        std::vector<std::pair<double, double>> s;
        for (int i = 0; i < n; ++i) {
            const double fcr = static_cast<double>(i) / (n - 1);
            const double y = (fcr < 0.337 ? 0.0 : -30.0 * (fcr - 0.337)) +
                             (sigma > 0 ? rng.normal(0.0, sigma) : 0.0);
            s.emplace_back(fcr, y);
        }
        return s;
    };

    Rng rng0(104);
    const FoliageLossModel clean = fit_foliage_loss(samples(200, 0.0, rng0));
    if (std::abs(clean.slope_db + 30.0) > 0.05 * 30.0 ||
        std::abs(clean.fcr_threshold - 0.337) > 0.05 * 0.337) {
        detail = "noiseless fit a=" + fmt(clean.slope_db) + ", r_th=" +
                 fmt(clean.fcr_threshold) + " outside 5% of (-30, 0.337)";
        return false;
    }

    int passed = 0;
    for (int trial = 0; trial < 30; ++trial) {
        Rng rng(200 + trial);
        const FoliageLossModel fit = fit_foliage_loss(samples(200, 4.31, rng));
        if (std::abs(fit.slope_db + 30.0) <= 0.15 * 30.0 &&
            std::abs(fit.fcr_threshold - 0.337) <= 0.15 * 0.337)
            ++passed;
    }
    detail = "noiseless fit exact; noisy trials " + std::to_string(passed) +
             "/30 within 15% (need 27)";
    return passed >= 27;
}

// ---- 5: close-in fit ----------------------------------------------------------------

bool crit_ci_fit(std::string &detail)
{
    Rng rng0(105);
    std::vector<std::pair<double, double>> clean;
    const double intercept = -fspl_gain_db(220e9, 1.0);
    for (int i = 0; i < 50; ++i) {
        const double d = std::pow(10.0, rng0.uniform(1.0, 2.6));
        clean.emplace_back(d, intercept + 20.0 * std::log10(d));
    }
    const CiFit exact = fit_ci(clean, 220e9);
    if (std::abs(exact.ple - 2.0) > 1e-9 || exact.sf_sigma_db > 1e-9) {
        detail = "noiseless fit n=" + fmt(exact.ple) + " sigma=" + fmt(exact.sf_sigma_db);
        return false;
    }

    int in_band = 0;
    for (int trial = 0; trial < 100; ++trial) {
        Rng rng(300 + trial);
        std::vector<std::pair<double, double>> s;
        for (int i = 0; i < 1000; ++i) {
            const double d = std::pow(10.0, rng.uniform(1.0, 2.6));
            s.emplace_back(d, intercept + 10.0 * 1.93 * std::log10(d) +
                                  rng.normal(0.0, 1.22));
        }
        const CiFit fit = fit_ci(s, 220e9);
        if (fit.ple >= 1.88 && fit.ple <= 1.98)
            ++in_band;
    }
    detail = "noiseless exact; noisy trials " + std::to_string(in_band) +
             "/100 with PLE in [1.88, 1.98] (need 95)";
    return in_band >= 95;
}

// ---- 6: free-space regression --------------------------------------------------------

bool crit_free_space(std::string &detail)
{
    Scene scene;
    scene.tx = {0, 0, 16.6};
    scene.frequency_hz = 220e9;
    const FoliageTwin twin = FoliageTwin::uniform(false, 0.5);
    AssembleOptions options;
    options.with_stochastic = false;
    options.with_foliage_chi = false;

    std::ostringstream ss;
    bool ok = true;
    double pl400 = 0.0;
    for (double d : {1.0, 50.0, 400.0}) {
        const Vec3 rx = scene.tx + Vec3{d, 0, 0};
        const ChannelRealization real = assemble(scene, twin, default_params(), rx, 1, options);
        const double pl = path_loss_db(real);
        const double want = -fspl_gain_db(220e9, d);
        ss << "PL(" << d << " m) = " << fmt(pl) << " dB; ";
        ok = ok && std::abs(pl - want) <= 0.1;
        if (d == 400.0)
            pl400 = pl;
    }
    ok = ok && std::abs(pl400 - 130.0) <= 1.5;
    detail = ss.str() + "400 m within 1.5 dB of 130";
    return ok;
}

// ---- 7: stochastic self-consistency --------------------------------------------------

bool crit_stochastic_consistency(std::string &detail)
{
    const StateParamsSet params = default_params();
    const StateParams &nlos = params.nlos;
    std::vector<double> ds, asa, esa;
    const Direction aod = Direction::of(25, -6), aoa = Direction::of(-155, 6);
    for (int k = 0; k < 500; ++k) {
        Rng lsp_rng(split_seed(700 + k, 1));
        Rng gen_rng(split_seed(700 + k, 2));
        const LspDraw lsp = draw_lsp(nlos, lsp_rng);
        const auto clusters = generate_clusters(lsp, aod, aoa, nlos, params.r_tau, gen_rng);
        std::vector<Mpc> mpcs;
        for (const auto &c : clusters)
            for (const auto &r : c.rays) {
                Mpc m;
                m.gain_db = 10.0 * std::log10(c.power_fraction * r.power_fraction);
                m.delay_s = c.excess_delay_s + r.delay_offset_s;
                m.aoa = Direction::of(c.aoa_centroid.azimuth_deg + r.aoa_az_off_deg,
                                      std::clamp(c.aoa_centroid.elevation_deg +
                                                     r.aoa_el_off_deg,
                                                 -90.0, 90.0));
                m.aod = m.aoa;
                mpcs.push_back(m);
            }
        if (mpcs.empty())
            continue;
        ds.push_back(rms_delay_spread(mpcs));
        asa.push_back(angular_spread(mpcs, AngleDim::aoa_az));
        esa.push_back(angular_spread(mpcs, AngleDim::aoa_el));
    }
    const double ds_med = median_of(ds) * 1e9;
    const double asa_med = median_of(asa);
    const double esa_med = median_of(esa);
    detail = "medians over 500 realizations: DS " + fmt(ds_med) + " ns (target 54.95 " +
             "+/-20%), ASA " + fmt(asa_med) + " deg (target 27.54 +/-25%), ESA " +
             fmt(esa_med) + " deg (target 6.92 +/-25%)";
    return std::abs(ds_med - 54.95) <= 0.20 * 54.95 &&
           std::abs(asa_med - 27.54) <= 0.25 * 27.54 &&
           std::abs(esa_med - 6.92) <= 0.25 * 6.92;
}

// ---- 8: SNR arithmetic ---------------------------------------------------------------

bool crit_snr(std::string &detail)
{
    LinkConfig cfg;
    cfg.pt_dbm = 13.0;
    cfg.total_gain_db = 70.0;
    cfg.noise_figure_db = 10.0;
    cfg.temperature_k = 300.0;
    cfg.bandwidth_hz = 2e9;
    const double got = snr_db(130.0, cfg);
    const bool part_a = std::abs(got - 23.82) <= 0.05;

    LinkConfig sounder;
    sounder.temperature_k = 290.0;
    sounder.bandwidth_hz = 1.536e9;
    sounder.noise_figure_db = 11.0;
    const double floor = noise_floor_dbm(sounder);
    const double reference = -83.5 + 11.0;
    const bool part_b = std::abs(floor - reference) <= 0.5;

    detail = "snr " + fmt(got) + " dB (want 23.82 +/- 0.05); sounder noise floor " +
             fmt(floor) + " dBm vs reference " + fmt(reference) +
             " dBm (tol 0.5; known-red: kTB at 290 K is 1.39 dB above the reference)";
    return part_a && part_b;
}

// ---- 9: link evaluation --------------------------------------------------------------

FoliageTwin campus_band_twin()
{
    FoliageTwin twin = FoliageTwin::uniform(false, 0.1);
    for (int ie = twin.el_index(-20.0); ie <= twin.el_index(-2.0); ++ie)
        for (int ia = twin.az_index(15.0); ia <= twin.az_index(75.0); ++ia)
            twin.set_cell(ia, ie, true);
    return twin;
}

bool crit_linkeval(std::string &detail)
{
    const Scene scene = load_scene(std::string(TWINCHAN_DATA_DIR) + "/scene_campus.json");
    const FoliageTwin twin = campus_band_twin();
    const StateParamsSet params = default_params();

    LinkConfig cfg;
    cfg.pt_dbm = 13.0;
    cfg.noise_figure_db = 10.0;
    cfg.temperature_k = 300.0;
    cfg.bandwidth_hz = 2e9;
    cfg.snr_threshold_db = 0.0;
    cfg.n_drops = 10000;

    const auto rows = sweep(scene, twin, params, cfg, {30.0, 50.0, 70.0}, {50.0, 400.0},
                            906, {});
    double se_70_50 = 0, se_30_400 = 0;
    bool coverage_ok = true, monotone_ok = true;
    double prev = -1.0;
    for (const auto &r : rows) {
        coverage_ok = coverage_ok && r.coverage_ratio >= 0.0 && r.coverage_ratio <= 1.0;
        if (r.cell_radius_m == 50.0) {
            monotone_ok = monotone_ok && r.mean_se_bps_hz >= prev;
            prev = r.mean_se_bps_hz;
            if (r.total_gain_db == 70.0)
                se_70_50 = r.mean_se_bps_hz;
        }
        if (r.cell_radius_m == 400.0 && r.total_gain_db == 30.0)
            se_30_400 = r.mean_se_bps_hz;
    }
    detail = "SE(70 dB, 50 m) = " + fmt(se_70_50) + " bps/Hz (> 10); SE(30 dB, 400 m) = " +
             fmt(se_30_400) + " bps/Hz (< 1); coverage bounded; SE monotone in gain";
    return coverage_ok && monotone_ok && se_70_50 > 10.0 && se_30_400 < 1.0;
}

// ---- 10: determinism ------------------------------------------------------------------

std::string pipeline_digest()
{
    // Twin from a synthetic annotated panorama.
    const PoseRotation pose = PoseRotation::of(30, 10, -45);
    ErpParams erp;
    erp.width = 64;
    erp.height = 32;
    erp.dphi_deg = 360.0 / 64;
    erp.dtheta_deg = 180.0 / 32;
    Image img(64, 32, Rgb{235, 235, 235});
    for (int y = 8; y < 20; ++y)
        for (int x = 10; x < 30; ++x)
            img.at(x, y) = {63, 71, 204};
    std::vector<LabeledPixel> labels{{10, 8, true, {63, 71, 204}},
                                     {11, 9, true, {64, 70, 203}},
                                     {0, 0, false, {235, 235, 235}},
                                     {1, 1, false, {234, 236, 235}}};
    TwinBuildParams build;
    build.cell_deg = 1.0;
    build.n_neighbors = 3;
    const FoliageTwin twin = build_twin(img, erp, pose, labels, {}, build);

    Scene scene;
    scene.tx = {0, 0, 16.6};
    scene.frequency_hz = 220e9;
    scene.buildings.push_back({{{40, -60}, {70, -60}, {70, -20}, {40, -20}}, 18.0, 10.0});

    std::ostringstream out;
    out << mpc_csv_header() << '\n';
    for (int i = 0; i < 10; ++i) {
        const Vec3 rx{30.0 + 8.0 * i, -40.0, 1.6};
        const ChannelRealization real =
            assemble(scene, twin, default_params(), rx, split_seed(77, i), {});
        write_mpcs_csv(out, std::to_string(i), real);
        write_metrics_csv(out, compute_metrics(std::to_string(i), real.state, real.mpcs));
        if (real.state != ChannelState::outage)
            write_cir_csv(out, sample_cir(real));
    }

    LinkConfig cfg;
    cfg.n_drops = 200;
    for (const auto &row :
         sweep(scene, twin, default_params(), cfg, {30.0, 70.0}, {60.0}, 908, {}))
        write_sweep_csv(out, row);
    return out.str();
}

bool crit_determinism(std::string &detail)
{
    const std::string a = pipeline_digest();
    const std::string b = pipeline_digest();
    detail = "two pipeline runs produced " + std::to_string(a.size()) +
             " bytes each; byte-identical: " + (a == b ? "yes" : "no");
    return a == b && !a.empty();
}

} // namespace

int main(int argc, char **argv)
{
    const std::vector<Check> checks{
        {1, "rotation oracle equivalence", crit_rotation_oracle},
        {2, "camera pose recovery", crit_pose_recovery},
        {3, "KNN oracle equivalence", crit_knn_oracle},
        {4, "foliage loss value and fit recovery", crit_foliage_loss},
        {5, "close-in path loss fit", crit_ci_fit},
        {6, "free-space regression", crit_free_space},
        {7, "stochastic self-consistency", crit_stochastic_consistency},
        {8, "SNR arithmetic", crit_snr},
        {9, "link evaluation brackets", crit_linkeval},
        {10, "pipeline determinism", crit_determinism},
    };

    int only = 0;
    if (argc > 1)
        only = std::atoi(argv[1]);

    int failures = 0;
    for (const auto &check : checks) {
        if (only != 0 && check.id != only)
            continue;
        const auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = check.run(detail);
        } catch (const std::exception &e) {
            detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << check.id << " ("
                  << check.title << ", " << fmt(secs) << " s): " << detail << "\n";
        failures += ok ? 0 : 1;
    }
    return failures;
}
