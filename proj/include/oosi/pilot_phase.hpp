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

#ifndef OOSI_PILOT_PHASE_HPP
#define OOSI_PILOT_PHASE_HPP

#include <vector>

#include "oosi/numerics.hpp"
#include "oosi/scenario.hpp"

namespace oosi
{

struct PilotObservation
{
    std::vector<CMatrix> Y; // per AP, N x tau_p
};

// Residual Z_l Psi per AP, N x (tau_p - K): OoS signal plus noise with the
// UE pilot directions projected out.
struct ProjectedResidual
{
    std::vector<CMatrix> zpsi;
};

// Y_l = sqrt(rho tau_p) H_l Phi^H + G_l S^H + N_l
PilotObservation simulate_pilot_rx(const BlockRealization &block, const PilotBook &pilots,
                                   const SystemConfig &cfg);

// Per-AP LS estimate  H_l ~ Y_l Phi / sqrt(rho tau_p).
std::vector<CMatrix> ls_channel_estimate(const PilotObservation &obs, const PilotBook &pilots,
                                         const SystemConfig &cfg);

// (Y_l - sqrt(rho tau_p) Hhat_l Phi^H) Psi, from the same Y the estimates
// came from.
ProjectedResidual compute_projected_residual(const PilotObservation &obs,
                                             const std::vector<CMatrix> &estimates,
                                             const PilotBook &pilots, const SystemConfig &cfg);

} // namespace oosi

#endif
