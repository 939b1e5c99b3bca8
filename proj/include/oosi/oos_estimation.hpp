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

#ifndef OOSI_OOS_ESTIMATION_HPP
#define OOSI_OOS_ESTIMATION_HPP

#include <vector>

#include "oosi/fronthaul.hpp"
#include "oosi/numerics.hpp"
#include "oosi/pilot_phase.hpp"
#include "oosi/scenario.hpp"

/**
 * Estimation of the projected OoS pilot-phase signal Sbar = Psi^H S, which is
 * common to all APs, and of the per-AP OoS channels.
 *
 * Each AP only sees Z_l Psi = G_l Sbar^H + noise, so a local factorization
 * recovers Sbar up to an unknown K_I x K_I invertible (for SVD estimates:
 * unitary) factor. Two chain algorithms combine the APs' views:
 *
 *  - sequential Procrustes: each AP aligns its local SVD estimate to the
 *    estimate received from upstream with the unitary Q solving
 *    min ||S_local Q^H - S_prev||_F, averages the two and forwards the result
 *    (2 K_I (tau_p - K) real symbols per link);
 *  - Gramian accumulation: APs add (Z_l Psi)^H (Z_l Psi) and forward; the CPU
 *    takes the K_I dominant eigenvectors ((tau_p - K)^2 real symbols per
 *    link). This is exactly the centralized rank-K_I fit of the stacked Z Psi.
 *
 * Either way the CPU broadcasts Sbar and every AP fits its own G_l by LS.
 */
namespace oosi
{

struct LocalEstimate
{
    CMatrix sbar; // (tau_p - K) x K_I, orthonormal columns
    CMatrix g;    // N x K_I, left singular vectors scaled by singular values
};

// Best rank-K_I approximation g * sbar^H of one residual. K_I may exceed the
// residual's row count; the extra columns of sbar then complete an
// orthonormal set from the null space and the matching columns of g are 0.
LocalEstimate local_svd_estimate(const CMatrix &zpsi, int num_oos);

// Unitary Q = V U^H from the SVD U Lambda V^H of S_local^H S_prev; minimizes
// ||S_local Q^H - S_prev||_F. A rank-deficient cross-Gramian still yields a
// deterministic unitary Q and bumps `degenerate_count` when given.
CMatrix procrustes_rotation(const CMatrix &prev, const CMatrix &local,
                            std::uint64_t *degenerate_count = nullptr);

// 0.5 (S_prev + S_local Q^H)
CMatrix rotate_and_average_step(const CMatrix &prev, const CMatrix &local,
                                std::uint64_t *degenerate_count = nullptr);

CMatrix run_sequential_procrustes(const ProjectedResidual &residuals, const SystemConfig &cfg,
                                  Chain &chain);

// Sum of (Z_l Psi)^H (Z_l Psi) accumulated hop by hop along the chain.
CMatrix accumulate_residual_gramian(const ProjectedResidual &residuals, const SystemConfig &cfg,
                                    Chain &chain);

CMatrix run_gramian_method(const ProjectedResidual &residuals, const SystemConfig &cfg,
                           Chain &chain);

// G_l = Z_l Psi Sbar (Sbar^H Sbar)^{-1} for every AP. Throws DegeneracyError
// if Sbar is not numerically full column rank.
std::vector<CMatrix> estimate_oos_channels(const ProjectedResidual &residuals, const CMatrix &sbar);

struct CentralizedOosEstimate
{
    CMatrix sbar;
    std::vector<CMatrix> g;
};

// Rank-K_I SVD fit of the stacked residual; the reference both chain
// methods are measured against.
CentralizedOosEstimate centralized_oos_oracle(const ProjectedResidual &residuals, int num_oos);

} // namespace oosi

#endif
