// SPDX-License-Identifier: Apache-2.0
//
// oosi - decentralized out-of-system interference suppression for
// cell-free massive MIMO
// Copyright (C) 2026 The oosi authors
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

#include <doctest.h>

#include "helpers.hpp"
#include "oosi/errors.hpp"
#include "oosi/scenario.hpp"

using namespace oosi;

TEST_CASE("path loss")
{
    // AP straight above the receiver at 5 m height.
    const double d = distance({10.0, 20.0, 5.0}, {10.0, 20.0, 0.0});
    CHECK(d == doctest::Approx(5.0));
    CHECK(pathloss_db(d) == doctest::Approx(-56.152).epsilon(1e-4));
    CHECK(pathloss_db(1.0) == doctest::Approx(-30.5));
    CHECK(pathloss_db(10.0) == doctest::Approx(-67.2));
    CHECK(pathloss_db(100.0) < pathloss_db(99.0));
    CHECK_THROWS_AS(pathloss_db(0.0), InputError);
}

TEST_CASE("AP placement on the perimeter")
{
    SystemConfig cfg;
    const auto aps = perimeter_ap_positions(cfg);
    REQUIRE(aps.size() == 4);
    // Oracle: walk the border counter-clockwise from (0, 0); AP i sits at arc
    // length (i + 1/2) * 2000 / 4.
    const double expected[4][2] = {{250, 0}, {500, 250}, {250, 500}, {0, 250}};
    for (int i = 0; i < 4; ++i)
    {
        CHECK(aps[i].x == doctest::Approx(expected[i][0]));
        CHECK(aps[i].y == doctest::Approx(expected[i][1]));
        CHECK(aps[i].z == doctest::Approx(5.0));
    }
    // Consecutive APs are 500 m apart along the border path (Manhattan
    // distance between points on adjacent sides, straight on one side).
    for (int i = 0; i < 4; ++i)
    {
        const auto &a = aps[i];
        const auto &b = aps[(i + 1) % 4];
        CHECK(std::abs(a.x - b.x) + std::abs(a.y - b.y) == doctest::Approx(500.0));
    }

    cfg.num_aps = 16;
    for (const auto &p : perimeter_ap_positions(cfg))
    {
        const bool on_border = std::abs(p.x) < 1e-9 || std::abs(p.y) < 1e-9 || std::abs(p.x - 500) < 1e-9 ||
                               std::abs(p.y - 500) < 1e-9;
        CHECK(on_border);
    }
    cfg.num_aps = 0;
    CHECK_THROWS_AS(perimeter_ap_positions(cfg), InputError);
}

TEST_CASE("build_geometry: placement, gains, determinism")
{
    SystemConfig cfg;
    auto r1 = make_stream(cfg.seed, 3, 0);
    auto r2 = make_stream(cfg.seed, 3, 0);
    const Geometry g1 = build_geometry(cfg, r1);
    const Geometry g2 = build_geometry(cfg, r2);
    CHECK(g1.beta_ue == g2.beta_ue);
    CHECK(g1.beta_oos == g2.beta_oos);

    REQUIRE(g1.ues.size() == 5);
    REQUIRE(g1.oos.size() == 2);
    auto inside = [&](const Point3 &p) {
        return p.x >= cfg.ue_margin_m && p.x <= cfg.area_side_m - cfg.ue_margin_m && p.y >= cfg.ue_margin_m &&
               p.y <= cfg.area_side_m - cfg.ue_margin_m && p.z == 0.0;
    };
    for (const auto &p : g1.ues)
        CHECK(inside(p));
    for (const auto &p : g1.oos)
        CHECK(inside(p));

    for (int l = 0; l < 4; ++l)
        for (int k = 0; k < 5; ++k)
        {
            const double d = distance(g1.aps[l], g1.ues[k]);
            CHECK(g1.beta_ue(l, k) > 0.0);
            CHECK(linear_to_db(g1.beta_ue(l, k)) == doctest::Approx(-30.5 - 36.7 * std::log10(d)));
        }
    CHECK(linear_to_db(g1.reference_gain) == doctest::Approx(default_gain_reference_db(cfg)));
    // Centre of the area to the midpoint of a side: sqrt(250^2 + 5^2).
    CHECK(default_gain_reference_db(cfg) == doctest::Approx(pathloss_db(std::sqrt(250.0 * 250.0 + 25.0))));

    cfg.gain_reference_db = -100.0;
    auto r3 = make_stream(cfg.seed, 3, 0);
    CHECK(build_geometry(cfg, r3).reference_gain == doctest::Approx(1e-10));
}

TEST_CASE("SystemConfig validation")
{
    SystemConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.chain_order() == std::vector<int>{3, 2, 1, 0});
    CHECK(cfg.complement_dim() == 45);
    CHECK(cfg.augmented_dim() == 7);

    auto bad = [](auto mutate) {
        SystemConfig c;
        mutate(c);
        CHECK_THROWS_AS(c.validate(), InputError);
    };
    bad([](SystemConfig &c) { c.pilot_length = 6; });
    bad([](SystemConfig &c) { c.coherence_length = 50; });
    bad([](SystemConfig &c) { c.num_aps = 0; });
    bad([](SystemConfig &c) { c.rho = 0.0; });
    bad([](SystemConfig &c) { c.oos_snr = -1.0; });
    bad([](SystemConfig &c) { c.alpha = 0.0; });
    bad([](SystemConfig &c) { c.ap_order = {0, 1, 1, 2}; });
    bad([](SystemConfig &c) { c.ap_order = {0, 1, 2}; });
    bad([](SystemConfig &c) { c.ue_margin_m = 250.0; });
    bad([](SystemConfig &c) { c.trials = 0; });

    cfg.ap_order = {1, 3, 0, 2};
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.chain_order() == cfg.ap_order);
    cfg.num_oos = 0;
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("pilot book invariants")
{
    for (auto [tau_p, K] : {std::pair{50, 5}, std::pair{7, 3}, std::pair{12, 12}})
    {
        const PilotBook pb = build_pilot_book(tau_p, K);
        REQUIRE(pb.phi.rows() == tau_p);
        REQUIRE(pb.phi.cols() == K);
        REQUIRE(pb.psi.cols() == tau_p - K);
        CHECK((pb.phi.adjoint() * pb.phi - CMatrix::Identity(K, K)).norm() < 1e-12);
        CHECK((pb.psi.adjoint() * pb.psi - CMatrix::Identity(tau_p - K, tau_p - K)).norm() < 1e-12);
        CHECK((pb.phi.adjoint() * pb.psi).norm() < 1e-12);
        const CMatrix proj = CMatrix::Identity(tau_p, tau_p) - pb.phi * pb.phi.adjoint();
        CHECK((pb.psi * pb.psi.adjoint() - proj).norm() < 1e-12);
        for (Index k = 0; k < K; ++k)
            CHECK(pb.phi.col(k).norm() == doctest::Approx(1.0));
    }
    const PilotBook reference = build_pilot_book(SystemConfig{});
    CHECK(reference.phi.rows() == 50);
    CHECK(reference.phi.cols() == 5);
    CHECK(reference.psi.cols() == 45);

    const PilotBook none = build_pilot_book(8, 0);
    CHECK(none.psi.cols() == 8);
    CHECK((none.psi.adjoint() * none.psi - CMatrix::Identity(8, 8)).norm() < 1e-12);
    CHECK((none.psi * none.psi.adjoint() - CMatrix::Identity(8, 8)).norm() < 1e-12);

    CHECK_THROWS_AS(build_pilot_book(6, 5, 2), InputError);
}

TEST_CASE("draw_block: shapes, K_I = 0, determinism")
{
    SystemConfig cfg;
    auto gr = make_stream(cfg.seed, 0, 0);
    const Geometry geo = build_geometry(cfg, gr);
    auto a = make_stream(cfg.seed, 0, 1);
    auto b = make_stream(cfg.seed, 0, 1);
    const BlockRealization x = draw_block(cfg, geo, a);
    const BlockRealization y = draw_block(cfg, geo, b);
    REQUIRE(x.H.size() == 4);
    for (int l = 0; l < 4; ++l)
    {
        CHECK(x.H[l].rows() == 4);
        CHECK(x.H[l].cols() == 5);
        CHECK(x.G[l].cols() == 2);
        CHECK(x.pilot_noise[l].cols() == 50);
        CHECK(x.H[l] == y.H[l]);
        CHECK(x.G[l] == y.G[l]);
        CHECK(x.pilot_noise[l] == y.pilot_noise[l]);
    }
    CHECK(x.S == y.S);
    CHECK(x.S.rows() == 50);

    auto c = make_stream(cfg.seed, 1, 1);
    CHECK(draw_block(cfg, geo, c).H[0] != x.H[0]);

    SystemConfig clean = cfg;
    clean.num_oos = 0;
    auto gr0 = make_stream(clean.seed, 0, 0);
    const Geometry geo0 = build_geometry(clean, gr0);
    auto r0 = make_stream(clean.seed, 0, 1);
    const BlockRealization z = draw_block(clean, geo0, r0);
    CHECK(z.S.size() == 0);
    for (const auto &g : z.G)
        CHECK(g.size() == 0);

    CHECK_THROWS_AS(draw_block(clean, geo, r0), InputError);
}

TEST_CASE("draw_block: entry variance follows the large-scale gain")
{
    SystemConfig cfg;
    cfg.num_aps = 1;
    cfg.num_oos = 1;
    cfg.oos_snr = 2.0;
    Geometry geo;
    geo.aps = {{0, 0, 5}};
    geo.beta_ue = RMatrix::Ones(1, 5);
    geo.beta_oos = RMatrix::Constant(1, 1, 0.25);
    geo.reference_gain = 1.0;

    double h_power = 0.0, g_power = 0.0, s_power = 0.0;
    std::size_t h_count = 0, g_count = 0, s_count = 0;
    for (std::uint64_t b = 0; b < 10000; ++b)
    {
        auto rng = make_stream(99, b, 1);
        const BlockRealization blk = draw_block(cfg, geo, rng);
        h_power += blk.H[0].squaredNorm();
        h_count += static_cast<std::size_t>(blk.H[0].size());
        g_power += blk.G[0].squaredNorm();
        g_count += static_cast<std::size_t>(blk.G[0].size());
        s_power += blk.S.squaredNorm();
        s_count += static_cast<std::size_t>(blk.S.size());
    }
    CHECK(h_power / h_count == doctest::Approx(1.0).epsilon(0.05));
    CHECK(g_power / g_count == doctest::Approx(0.25).epsilon(0.05));
    CHECK(s_power / s_count == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("complex_gaussian: circular with requested variance")
{
    auto rng = testing::rng_for(5);
    const CMatrix X = complex_gaussian(200, 200, 3.0, rng);
    const double n = static_cast<double>(X.size());
    CHECK(X.squaredNorm() / n == doctest::Approx(3.0).epsilon(0.02));
    CHECK(X.real().squaredNorm() / n == doctest::Approx(1.5).epsilon(0.03));
    // Pseudo-variance E[x^2] vanishes for a circular distribution.
    CHECK(std::abs(X.array().square().sum()) / n < 0.05);
}
