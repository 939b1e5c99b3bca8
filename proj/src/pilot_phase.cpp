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

#include "oosi/pilot_phase.hpp"

#include <cmath>

#include "oosi/errors.hpp"

namespace oosi
{

namespace
{

double pilot_gain(const SystemConfig &cfg)
{
    return std::sqrt(cfg.rho * cfg.pilot_length);
}

void check_pilots(const PilotBook &pilots, const SystemConfig &cfg)
{
    if (pilots.phi.rows() != cfg.pilot_length || pilots.phi.cols() != cfg.num_ues ||
        pilots.psi.rows() != cfg.pilot_length || pilots.psi.cols() != cfg.complement_dim())
        throw InputError("pilot book does not match configuration");
}

} // namespace

PilotObservation simulate_pilot_rx(const BlockRealization &block, const PilotBook &pilots,
                                   const SystemConfig &cfg)
{
    check_pilots(pilots, cfg);
    const auto L = static_cast<std::size_t>(cfg.num_aps);
    if (block.H.size() != L || block.G.size() != L || block.pilot_noise.size() != L)
        throw InputError("simulate_pilot_rx: block has wrong AP count");
    if (block.S.rows() != cfg.pilot_length || block.S.cols() != cfg.num_oos)
        throw InputError("simulate_pilot_rx: OoS pilot-phase signal has wrong shape");

    const double gain = pilot_gain(cfg);
    PilotObservation obs;
    obs.Y.reserve(L);
    for (std::size_t l = 0; l < L; ++l)
    {
        const CMatrix &H = block.H[l];
        const CMatrix &G = block.G[l];
        const CMatrix &noise = block.pilot_noise[l];
        if (H.rows() != cfg.antennas_per_ap || H.cols() != cfg.num_ues || G.rows() != H.rows() ||
            G.cols() != cfg.num_oos || noise.rows() != H.rows() || noise.cols() != cfg.pilot_length)
            throw InputError("simulate_pilot_rx: per-AP matrix has wrong shape");
        CMatrix Y = gain * H * pilots.phi.adjoint() + noise;
        if (cfg.num_oos > 0)
            Y += G * block.S.adjoint();
        obs.Y.push_back(std::move(Y));
    }
    return obs;
}

std::vector<CMatrix> ls_channel_estimate(const PilotObservation &obs, const PilotBook &pilots,
                                         const SystemConfig &cfg)
{
    check_pilots(pilots, cfg);
    const double gain = pilot_gain(cfg);
    std::vector<CMatrix> est;
    est.reserve(obs.Y.size());
    for (const auto &Y : obs.Y)
    {
        if (Y.cols() != cfg.pilot_length)
            throw InputError("ls_channel_estimate: observation has wrong length");
        est.push_back(Y * pilots.phi / gain);
    }
    return est;
}

ProjectedResidual compute_projected_residual(const PilotObservation &obs,
                                             const std::vector<CMatrix> &estimates,
                                             const PilotBook &pilots, const SystemConfig &cfg)
{
    check_pilots(pilots, cfg);
    if (estimates.size() != obs.Y.size())
        throw InputError("compute_projected_residual: estimate count does not match observation");
    const double gain = pilot_gain(cfg);
    ProjectedResidual out;
    out.zpsi.reserve(obs.Y.size());
    for (std::size_t l = 0; l < obs.Y.size(); ++l)
    {
        const CMatrix Z = obs.Y[l] - gain * estimates[l] * pilots.phi.adjoint();
        out.zpsi.push_back(Z * pilots.psi);
    }
    return out;
}

} // namespace oosi
