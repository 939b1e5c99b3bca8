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

#ifndef OOSI_DOWNLINK_HPP
#define OOSI_DOWNLINK_HPP

#include <vector>

#include "oosi/fronthaul.hpp"
#include "oosi/numerics.hpp"
#include "oosi/scenario.hpp"
#include "oosi/uplink.hpp"

namespace oosi
{

// Wbar_l = A_l Gamma^{-1}; the first K columns are AP l's ZF precoder.
std::vector<CMatrix> build_local_precoders(const AugmentedChannel &A, const CMatrix &gamma);

// q = Gamma^{-1} [x_dl; 0_{K_I}] per symbol period (columns of x_dl). The CPU
// broadcasts each q over the chain.
CMatrix compute_partial_precoded(const CMatrix &x_dl, const CMatrix &gamma, Chain &chain);

struct DownlinkResult
{
    CMatrix ue_rx;                  // K x T
    CMatrix oos_rx;                 // K_I x T
    double leakage_power = 0.0;     // mean |oos_rx|^2 over sources and symbols
    std::vector<double> ue_mse;     // per UE, mean |ue_rx - x_dl|^2
    std::vector<double> per_ap_power; // mean radiated power ||A_l q||^2 per AP
};

// Propagates sum_l A_l q through the true channels:
//   ue_rx  = sum_l H_l^H A_l q + n,  oos_rx = sum_l G_l^H A_l q.
DownlinkResult simulate_downlink(const BlockRealization &block, const AugmentedChannel &A, const CMatrix &q,
                                 const CMatrix &x_dl, Rng &rng, double noise_variance = 1.0);

} // namespace oosi

#endif
