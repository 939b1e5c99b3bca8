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
#include "oosi/pilot_phase.hpp"

using namespace oosi;
using testing::make_fixture;

TEST_CASE("pilot rx matches a direct entry-by-entry evaluation")
{
    const auto f = make_fixture(testing::small_config(), 2, false);
    const double a = std::sqrt(f.cfg.rho * f.cfg.pilot_length);
    for (int l = 0; l < f.cfg.num_aps; ++l)
    {
        const CMatrix &Y = f.obs.Y[l];
        double worst = 0.0;
        for (Index n = 0; n < Y.rows(); ++n)
            for (Index t = 0; t < Y.cols(); ++t)
            {
                cplx v = f.block.pilot_noise[l](n, t);
                for (Index k = 0; k < f.cfg.num_ues; ++k)
                    v += a * f.block.H[l](n, k) * std::conj(f.pilots.phi(t, k));
                for (Index j = 0; j < f.cfg.num_oos; ++j)
                    v += f.block.G[l](n, j) * std::conj(f.block.S(t, j));
                worst = std::max(worst, std::abs(v - Y(n, t)));
            }
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("clean pilot inversion")
{
    SystemConfig cfg = testing::small_config();
    cfg.num_oos = 0;
    const auto f = make_fixture(cfg, 0, true);
    for (int l = 0; l < cfg.num_aps; ++l)
    {
        CHECK(testing::rel_err(f.h_hat[l], f.block.H[l]) < 1e-12);
        CHECK(f.residuals.zpsi[l].norm() < 1e-12);
    }
}

TEST_CASE("H = 0 and noise-free: Y is the OoS term")
{
    SystemConfig cfg = testing::small_config();
    auto f = make_fixture(cfg, 1, true);
    for (auto &h : f.block.H)
        h.setZero();
    const PilotObservation obs = simulate_pilot_rx(f.block, f.pilots, cfg);
    for (int l = 0; l < cfg.num_aps; ++l)
        CHECK(testing::rel_err(obs.Y[l], f.block.G[l] * f.block.S.adjoint()) < 1e-13);
}

TEST_CASE("LS estimate bias with OoS interference, noise-free")
{
    const auto f = make_fixture(testing::small_config(), 3, true);
    const double a = std::sqrt(f.cfg.rho * f.cfg.pilot_length);
    for (int l = 0; l < f.cfg.num_aps; ++l)
    {
        const CMatrix bias = f.block.G[l] * f.block.S.adjoint() * f.pilots.phi / a;
        CHECK((f.h_hat[l] - f.block.H[l] - bias).norm() < 1e-12 * (1.0 + bias.norm()));
    }
}

TEST_CASE("OoS signal orthogonal to the pilots leaves H unbiased")
{
    SystemConfig cfg = testing::small_config();
    auto f = make_fixture(cfg, 4, false);
    // Replace S by a combination of complement columns so S^H Phi = 0.
    auto rng = testing::rng_for(40);
    f.block.S = f.pilots.psi * testing::randn(cfg.complement_dim(), cfg.num_oos, rng);
    const PilotObservation obs = simulate_pilot_rx(f.block, f.pilots, cfg);
    const auto est = ls_channel_estimate(obs, f.pilots, cfg);
    const double a = std::sqrt(cfg.rho * cfg.pilot_length);
    for (int l = 0; l < cfg.num_aps; ++l)
    {
        const CMatrix noise_term = f.block.pilot_noise[l] * f.pilots.phi / a;
        CHECK((est[l] - f.block.H[l] - noise_term).norm() < 1e-12);
    }
}

TEST_CASE("projected residual identities")
{
    for (bool noise_free : {true, false})
    {
        const auto f = make_fixture(testing::small_config(), 5, noise_free);
        const CMatrix sbar = f.pilots.psi.adjoint() * f.block.S;
        for (int l = 0; l < f.cfg.num_aps; ++l)
        {
            const CMatrix &z = f.residuals.zpsi[l];
            CHECK(z.rows() == f.cfg.antennas_per_ap);
            CHECK(z.cols() == f.cfg.complement_dim());
            // (G S^H + N) Psi, whatever the noise.
            const CMatrix expected = (f.block.G[l] * f.block.S.adjoint() + f.block.pilot_noise[l]) * f.pilots.psi;
            CHECK((z - expected).norm() < 1e-10);
            // Lies in the pilot null space.
            CHECK((z * f.pilots.psi.adjoint() * f.pilots.phi).norm() < 1e-10);
            if (noise_free)
            {
                CHECK((z - f.block.G[l] * sbar.adjoint()).norm() < 1e-10);
                const Svd s = economy_svd(z);
                for (Index i = f.cfg.num_oos; i < s.sigma.size(); ++i)
                    CHECK(s.sigma(i) < 1e-10);
            }
        }
    }
}

TEST_CASE("projected noise keeps unit variance")
{
    SystemConfig cfg = testing::small_config();
    cfg.num_oos = 0;
    const PilotBook pb = build_pilot_book(cfg);
    CMatrix gram = CMatrix::Zero(cfg.complement_dim(), cfg.complement_dim());
    const int blocks = 400;
    for (int b = 0; b < blocks; ++b)
    {
        auto rng = make_stream(7, static_cast<std::uint64_t>(b), 3);
        const CMatrix np = complex_gaussian(cfg.antennas_per_ap, cfg.pilot_length, 1.0, rng) * pb.psi;
        gram += np.adjoint() * np;
    }
    gram /= static_cast<double>(blocks * cfg.antennas_per_ap);
    // Empirical covariance of the projected noise is I: unit variance, and
    // uncorrelated across the 45 coordinates (entry std ~ 0.025).
    CHECK(gram.diagonal().real().mean() == doctest::Approx(1.0).epsilon(0.02));
    CHECK((gram - CMatrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() < 0.15);
}

TEST_CASE("shape errors")
{
    const auto f = make_fixture(testing::small_config(), 0, false);
    SystemConfig other = f.cfg;
    other.num_aps = 3;
    CHECK_THROWS_AS(simulate_pilot_rx(f.block, f.pilots, other), InputError);
    const PilotBook wrong = build_pilot_book(40, 5, 2);
    CHECK_THROWS_AS(ls_channel_estimate(f.obs, wrong, f.cfg), InputError);
    std::vector<CMatrix> short_est(f.h_hat.begin(), f.h_hat.end() - 1);
    CHECK_THROWS_AS(compute_projected_residual(f.obs, short_est, f.pilots, f.cfg), InputError);
}
