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

// Shared fixtures for the unit tests.

#ifndef OOSI_TEST_HELPERS_HPP
#define OOSI_TEST_HELPERS_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "oosi/numerics.hpp"
#include "oosi/pilot_phase.hpp"
#include "oosi/scenario.hpp"

namespace testing
{

using oosi::CMatrix;
using oosi::cplx;
using oosi::Index;

inline oosi::Rng rng_for(std::uint64_t seed) { return oosi::make_stream(seed, 0xabcdef, 7); }

inline CMatrix randn(Index rows, Index cols, oosi::Rng &rng) { return oosi::complex_gaussian(rows, cols, 1.0, rng); }

// Haar-distributed unitary: QR of a Gaussian matrix with R's diagonal phases
// moved into Q.
inline CMatrix random_unitary(Index n, oosi::Rng &rng)
{
    const CMatrix X = randn(n, n, rng);
    Eigen::HouseholderQR<CMatrix> qr(X);
    CMatrix Q = qr.householderQ() * CMatrix::Identity(n, n);
    const CMatrix R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index j = 0; j < n; ++j)
    {
        const cplx d = R(j, j);
        Q.col(j) *= std::abs(d) > 0.0 ? d / std::abs(d) : cplx(1.0);
    }
    return Q;
}

inline CMatrix orthonormal_columns(Index rows, Index cols, oosi::Rng &rng)
{
    return random_unitary(rows, rng).leftCols(cols);
}

inline double rel_err(const CMatrix &a, const CMatrix &b)
{
    const double scale = std::max(b.norm(), 1e-300);
    return (a - b).norm() / scale;
}

inline oosi::SystemConfig small_config()
{
    oosi::SystemConfig cfg;
    cfg.trials = 4;
    return cfg;
}

// Everything needed by the pilot-phase tests for one block.
struct PilotFixture
{
    oosi::SystemConfig cfg;
    oosi::PilotBook pilots;
    oosi::Geometry geo;
    oosi::BlockRealization block;
    oosi::PilotObservation obs;
    std::vector<CMatrix> h_hat;
    oosi::ProjectedResidual residuals;
};

inline PilotFixture make_fixture(const oosi::SystemConfig &cfg, std::uint64_t block_index, bool noise_free)
{
    PilotFixture f;
    f.cfg = cfg;
    f.pilots = oosi::build_pilot_book(cfg);
    oosi::Rng geo_rng = oosi::make_stream(cfg.seed, block_index, 0);
    f.geo = oosi::build_geometry(cfg, geo_rng);
    oosi::Rng rng = oosi::make_stream(cfg.seed, block_index, 1);
    f.block = oosi::draw_block(cfg, f.geo, rng);
    if (noise_free)
        for (auto &n : f.block.pilot_noise)
            n.setZero();
    f.obs = oosi::simulate_pilot_rx(f.block, f.pilots, cfg);
    f.h_hat = oosi::ls_channel_estimate(f.obs, f.pilots, cfg);
    f.residuals = oosi::compute_projected_residual(f.obs, f.h_hat, f.pilots, cfg);
    return f;
}

} // namespace testing

#endif
