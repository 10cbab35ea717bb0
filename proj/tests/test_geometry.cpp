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

#include "oracles.hpp"
#include "twinchan/foliage.hpp"
#include "twinchan/geometry.hpp"
#include "twinchan/rng.hpp"

using namespace twinchan;

TEST(Geometry, WrapDeg)
{
    EXPECT_DOUBLE_EQ(wrap_deg(0.0), 0.0);
    EXPECT_DOUBLE_EQ(wrap_deg(180.0), -180.0);
    EXPECT_DOUBLE_EQ(wrap_deg(-180.0), -180.0);
    EXPECT_DOUBLE_EQ(wrap_deg(540.0), -180.0);
    EXPECT_DOUBLE_EQ(wrap_deg(-190.0), 170.0);
    EXPECT_NEAR(wrap_deg(359.5), -0.5, 1e-12);
}

TEST(Geometry, DirectionVectorRoundTrip)
{
    Rng rng(11);
    for (int i = 0; i < 500; ++i) {
        const Direction d =
            Direction::of(rng.uniform(-180.0, 180.0), rng.uniform(-89.0, 89.0));
        const Direction back = direction_of(unit_vector(d));
        EXPECT_NEAR(back.azimuth_deg, d.azimuth_deg, 1e-10);
        EXPECT_NEAR(back.elevation_deg, d.elevation_deg, 1e-10);
    }
}

TEST(Geometry, DirectionValidation)
{
    EXPECT_THROW(Direction::of(0.0, 95.0), std::invalid_argument);
    EXPECT_THROW(Direction::of(std::nan(""), 0.0), std::invalid_argument);
    const Direction d = Direction::of(185.0, 90.0);
    EXPECT_DOUBLE_EQ(d.azimuth_deg, -175.0);
}

TEST(RotateZyz, IdentityPose)
{
    Rng rng(3);
    for (int i = 0; i < 100; ++i) {
        const Direction d =
            Direction::of(rng.uniform(-180.0, 180.0), rng.uniform(-90.0, 90.0));
        const Direction r = rotate_zyz({0.0, 0.0, 0.0}, d);
        EXPECT_LT(oracles::angle_between_deg(r, d), 1e-9);
    }
}

TEST(RotateZyz, PureZRotation)
{
    const Direction r = rotate_zyz(PoseRotation::of(90.0, 0.0, 0.0), Direction::of(0.0, 0.0));
    EXPECT_NEAR(r.azimuth_deg, 90.0, 1e-12);
    EXPECT_NEAR(r.elevation_deg, 0.0, 1e-12);
}

TEST(RotateZyz, YRotationOfZenith)
{
    // Rotating the zenith by 30 degrees about y tips it to 60 degrees
    // elevation in the x-z plane.
    const Direction r = rotate_zyz(PoseRotation::of(0.0, 30.0, 0.0), Direction::of(0.0, 90.0));
    EXPECT_NEAR(r.azimuth_deg, 0.0, 1e-9);
    EXPECT_NEAR(r.elevation_deg, 60.0, 1e-9);
}

TEST(RotateZyz, MatchesMatrixOracle)
{
    Rng rng(17);
    double worst = 0.0;
    for (int p = 0; p < 50; ++p) {
        const PoseRotation pose = PoseRotation::of(
            rng.uniform(-180.0, 180.0), rng.uniform(-180.0, 180.0), rng.uniform(-180.0, 180.0));
        for (int i = 0; i < 200; ++i) {
            const double az = rng.uniform(-180.0, 180.0);
            const double el = rng.uniform(-90.0, 90.0);
            const Direction got = rotate_zyz(pose, Direction::of(az, el));
            const auto want = oracles::rotate_zyz_matrix(
                pose.alpha_z1_deg, pose.alpha_y_deg, pose.alpha_z2_deg, az, el);
            worst = std::max(worst,
                             oracles::angle_between_deg(
                                 oracles::unit_of(got.azimuth_deg, got.elevation_deg), want));
        }
    }
    EXPECT_LT(worst, 1e-6);
}

TEST(RotateZyz, IsIsometry)
{
    Rng rng(23);
    for (int i = 0; i < 2000; ++i) {
        const PoseRotation pose = PoseRotation::of(
            rng.uniform(-180.0, 180.0), rng.uniform(-180.0, 180.0), rng.uniform(-180.0, 180.0));
        const Direction a =
            Direction::of(rng.uniform(-180.0, 180.0), rng.uniform(-90.0, 90.0));
        const Direction b =
            Direction::of(rng.uniform(-180.0, 180.0), rng.uniform(-90.0, 90.0));
        const double before = oracles::angle_between_deg(a, b);
        const double after =
            oracles::angle_between_deg(rotate_zyz(pose, a), rotate_zyz(pose, b));
        EXPECT_NEAR(deg2rad(before), deg2rad(after), 1e-9);
    }
}

TEST(RotateZyz, InverseTripleIsIdentity)
{
    Rng rng(29);
    for (int i = 0; i < 2000; ++i) {
        const PoseRotation pose = PoseRotation::of(
            rng.uniform(-180.0, 180.0), rng.uniform(-180.0, 180.0), rng.uniform(-180.0, 180.0));
        const Direction d =
            Direction::of(rng.uniform(-180.0, 180.0), rng.uniform(-90.0, 90.0));
        const Direction back = rotate_zyz(pose.inverse(), rotate_zyz(pose, d));
        EXPECT_LT(deg2rad(oracles::angle_between_deg(back, d)), 1e-9);
    }
}

TEST(Geometry, GreatCircle)
{
    EXPECT_NEAR(great_circle_deg(Direction::of(0, 0), Direction::of(90, 0)), 90.0, 1e-9);
    EXPECT_NEAR(great_circle_deg(Direction::of(0, 0), Direction::of(0, 90)), 90.0, 1e-9);
    EXPECT_NEAR(great_circle_deg(Direction::of(-170, 0), Direction::of(170, 0)), 20.0, 1e-9);
}
