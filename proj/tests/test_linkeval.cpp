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

#include <gtest/gtest.h>

#include "twinchan/linkeval.hpp"

using namespace twinchan;

namespace {

LinkConfig paper_link()
{
    LinkConfig cfg;
    cfg.pt_dbm = 13.0;
    cfg.total_gain_db = 70.0;
    cfg.noise_figure_db = 10.0;
    cfg.temperature_k = 300.0;
    cfg.bandwidth_hz = 2e9;
    return cfg;
}

Scene free_space()
{
    Scene s;
    s.tx = {0, 0, 16.6};
    s.frequency_hz = 220e9;
    return s;
}

AssembleOptions deterministic_only()
{
    AssembleOptions o;
    o.with_stochastic = false;
    o.with_foliage_chi = false;
    return o;
}

} // namespace

TEST(Snr, HandComputedCase)
{
    const LinkConfig cfg = paper_link();
    EXPECT_NEAR(noise_floor_dbm(cfg), -70.81765466938123, 1e-9);
    EXPECT_NEAR(snr_db(130.0, cfg), 23.817654669381227, 1e-9);
    EXPECT_NEAR(snr_db(130.0, cfg), 23.82, 0.05);
}

TEST(Snr, LinearInTotalGain)
{
    LinkConfig cfg = paper_link();
    const double base = snr_db(123.4, cfg);
    cfg.total_gain_db += 10.0;
    EXPECT_NEAR(snr_db(123.4, cfg), base + 10.0, 1e-12);
}

TEST(SamplePositions, AllInsideSectorAndRadius)
{
    LinkConfig cfg;
    cfg.cell_radius_m = 200.0;
    cfg.sector = {-90.0, 180.0};
    cfg.n_drops = 10000;
    Rng rng(3);
    const Vec3 tx{5, -3, 16.6};
    for (const auto &p : sample_rx_positions(tx, cfg, rng)) {
        const double dx = p.x - tx.x, dy = p.y - tx.y;
        EXPECT_LE(std::hypot(dx, dy), 200.0 + 1e-9);
        EXPECT_GE(dx, -1e-9); // the sector [-90, 90] keeps x forward
        EXPECT_DOUBLE_EQ(p.z, 1.6);
    }
}

TEST(SamplePositions, MeanRadiusMatchesUniformArea)
{
    LinkConfig cfg;
    cfg.cell_radius_m = 300.0;
    cfg.n_drops = 100000;
    Rng rng(5);
    const Vec3 tx{0, 0, 16.6};
    double sum = 0.0;
    for (const auto &p : sample_rx_positions(tx, cfg, rng))
        sum += std::hypot(p.x, p.y);
    const double mean = sum / cfg.n_drops;
    EXPECT_NEAR(mean, 2.0 / 3.0 * 300.0, 0.02 * 200.0);
}

TEST(Evaluate, ConstantSnrGivesExactShannonMean)
{
    // A vanishing cell radius pins every drop at the same distance.
    const Scene s = free_space();
    const FoliageTwin twin = FoliageTwin::uniform(false, 0.5);
    LinkConfig cfg = paper_link();
    cfg.cell_radius_m = 1e-3;
    cfg.n_drops = 200;
    const EvalResult r =
        evaluate(s, twin, default_params(), cfg, 7, deterministic_only());
    const double d = 15.0; // tx at 16.6 m, rx at 1.6 m, negligible offset
    const double gamma = snr_db(-fspl_gain_db(220e9, d), cfg);
    EXPECT_NEAR(r.mean_se_bps_hz, std::log2(1.0 + std::pow(10.0, gamma / 10.0)), 1e-6);
    EXPECT_DOUBLE_EQ(r.coverage_ratio, 1.0);
}

TEST(Evaluate, ThresholdBelowAllSnrGivesFullCoverage)
{
    const Scene s = free_space();
    const FoliageTwin twin = FoliageTwin::uniform(false, 0.5);
    LinkConfig cfg = paper_link();
    cfg.cell_radius_m = 100.0;
    cfg.n_drops = 500;
    cfg.snr_threshold_db = -200.0;
    const EvalResult r = evaluate(s, twin, default_params(), cfg, 11, {});
    EXPECT_DOUBLE_EQ(r.coverage_ratio, 1.0);
}

TEST(Evaluate, OutageDropsContributeZero)
{
    // A 10 m slab covering the whole drop disc, transmitter above its roof:
    // every receiver sits inside the prism, so every drop is a geometric
    // outage and the reductions must come out exactly zero.
    Scene s;
    s.tx = {0, 0, 16.6};
    s.frequency_hz = 220e9;
    s.buildings.push_back({{{-300, -300}, {300, -300}, {300, 300}, {-300, 300}}, 10.0, 10.0});
    EXPECT_TRUE(validate_scene(s).empty());

    const FoliageTwin twin = FoliageTwin::uniform(false, 0.5);
    LinkConfig cfg = paper_link();
    cfg.cell_radius_m = 60.0;
    cfg.n_drops = 100;
    const EvalResult r = evaluate(s, twin, default_params(), cfg, 13, {});
    EXPECT_DOUBLE_EQ(r.mean_se_bps_hz, 0.0);
    EXPECT_DOUBLE_EQ(r.coverage_ratio, 0.0);
}

TEST(Evaluate, MonotoneInTotalGain)
{
    Scene s = free_space();
    s.buildings.push_back({{{40, -60}, {70, -60}, {70, -20}, {40, -20}}, 18.0, 10.0});
    FoliageTwin twin = FoliageTwin::uniform(false, 0.5);
    for (int ie = twin.el_index(-20.0); ie <= twin.el_index(-2.0); ++ie)
        for (int ia = twin.az_index(15.0); ia <= twin.az_index(75.0); ++ia)
            twin.set_cell(ia, ie, true);

    LinkConfig cfg = paper_link();
    cfg.cell_radius_m = 120.0;
    cfg.n_drops = 300;
    double prev_se = -1.0, prev_cov = -1.0;
    for (double gain = 30.0; gain <= 70.0; gain += 10.0) {
        cfg.total_gain_db = gain;
        const EvalResult r = evaluate(s, twin, default_params(), cfg, 17, {});
        EXPECT_GE(r.mean_se_bps_hz, prev_se);
        EXPECT_GE(r.coverage_ratio, prev_cov);
        EXPECT_GE(r.coverage_ratio, 0.0);
        EXPECT_LE(r.coverage_ratio, 1.0);
        prev_se = r.mean_se_bps_hz;
        prev_cov = r.coverage_ratio;
    }
}

TEST(Sweep, CartesianRowsAndDeterminism)
{
    const Scene s = free_space();
    const FoliageTwin twin = FoliageTwin::uniform(false, 0.5);
    LinkConfig cfg = paper_link();
    cfg.n_drops = 50;
    const std::vector<double> gains{30.0, 70.0};
    const std::vector<double> radii{50.0, 400.0};

    const auto rows = sweep(s, twin, default_params(), cfg, gains, radii, 23, {});
    ASSERT_EQ(rows.size(), 4u);
    const auto again = sweep(s, twin, default_params(), cfg, gains, radii, 23, {});
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(rows[i].mean_se_bps_hz, again[i].mean_se_bps_hz);
        EXPECT_EQ(rows[i].coverage_ratio, again[i].coverage_ratio);
    }
    // Within one radius, the higher gain can only help.
    EXPECT_GE(rows[1].mean_se_bps_hz, rows[0].mean_se_bps_hz);
    EXPECT_GE(rows[3].mean_se_bps_hz, rows[2].mean_se_bps_hz);
}

TEST(LinkConfig, Validation)
{
    LinkConfig cfg;
    cfg.bandwidth_hz = 0.0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.n_drops = 0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.sector.extent_deg = 361.0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
}
