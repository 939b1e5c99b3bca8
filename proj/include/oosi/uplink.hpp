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

#ifndef OOSI_UPLINK_HPP
#define OOSI_UPLINK_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "oosi/fronthaul.hpp"
#include "oosi/numerics.hpp"
#include "oosi/scenario.hpp"

namespace oosi
{

// Per-AP effective channel [UE columns, OoS columns]; OoS sources are
// detected as extra fictitious users and their estimates discarded.
struct AugmentedChannel
{
    std::vector<CMatrix> per_ap;
    int num_ues = 0;

    Index dim() const { return per_ap.empty() ? 0 : per_ap.front().cols(); }
    CMatrix stacked() const { return vstack(per_ap); }
};

// [ue_amplitude * H_l, G_l]. With ue_amplitude = sqrt(rho) the UE entries of
// the detector output are on the unit-power QPSK scale.
AugmentedChannel augment(const std::vector<CMatrix> &H, const std::vector<CMatrix> &G,
                         double ue_amplitude = 1.0);

// [ue_amplitude * H_l, 0, ..., G_l, ..., 0]: each AP's OoS estimate gets its
// own fictitious users because unaligned local estimates do not share a basis.
AugmentedChannel augment_block_diagonal(const std::vector<CMatrix> &H, const std::vector<CMatrix> &local_g,
                                        double ue_amplitude = 1.0);

// Gray mapping (b1, b0) -> ((1 - 2 b1) + i (1 - 2 b0)) / sqrt(2).
cplx qpsk_symbol(int b1, int b0);
// Nearest QPSK point as a bit pair; a zero component maps to bit 0.
std::pair<int, int> qpsk_bits(cplx z);

CMatrix random_qpsk(Index rows, Index cols, Rng &rng);

struct UplinkSymbolBatch
{
    CMatrix x;            // K x T unit-power QPSK
    CMatrix s;            // K_I x T OoS symbols
    std::vector<CMatrix> y; // per AP, N x T
};

// y_l = sqrt(rho) H_l x + G_l s + n_l for given symbols and noise.
UplinkSymbolBatch receive_uplink(const BlockRealization &block, CMatrix x, CMatrix s,
                                 const std::vector<CMatrix> &noise, double rho);

// Draws T symbol periods: QPSK x, s ~ CN(0, oos_snr), n ~ CN(0, noise_variance).
UplinkSymbolBatch simulate_uplink_rx(const BlockRealization &block, const SystemConfig &cfg, Index symbols,
                                     Rng &rng, double noise_variance = 1.0);

struct SequentialLsResult
{
    CMatrix estimates;              // (K + K_I) x T
    std::vector<CMatrix> covariances; // C_1 .. C_L in visiting order
};

// Recursive LS along the chain from xhat_0 = 0, C_0 = alpha I; one chain pass
// per symbol period. The recursion runs in square-root information form: each
// hop forwards (z, R) with R^H R = C^{-1} and R xhat = z, R upper triangular
// with a real diagonal, so the message holds 2n + n^2 reals like (xhat, C).
// The covariance-form update loses about alpha * eps of accuracy once alpha is
// large and an AP sees fewer antennas than K + K_I.
SequentialLsResult detect_sequential_ls(const UplinkSymbolBatch &batch, const AugmentedChannel &A,
                                        const SystemConfig &cfg, Chain &chain, double noise_variance = 1.0);

// sum_l A_l^H A_l via add-and-forward.
CMatrix accumulate_channel_gramian(const AugmentedChannel &A, Chain &chain);

// Gamma^{-1} sum_l A_l^H y_l, the sum accumulated per symbol period.
CMatrix detect_distributed_zf(const UplinkSymbolBatch &batch, const AugmentedChannel &A, const CMatrix &gamma,
                              Chain &chain);

struct CentralizedDetection
{
    CMatrix estimates; // (K + K_I) x T
    Index rank = 0;
    bool rank_deficient = false;
};

// pinv(stacked A) * stacked y; minimum-norm when A is rank deficient.
CentralizedDetection detect_centralized(const UplinkSymbolBatch &batch, const AugmentedChannel &A);

struct BerStats
{
    std::vector<std::uint64_t> per_ue_bit_errors;
    std::uint64_t bit_errors = 0;
    std::uint64_t bit_count = 0;
    double ber = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

// 95% Wilson score interval for a binomial proportion.
std::pair<double, double> wilson_interval(std::uint64_t errors, std::uint64_t trials);

// Hard QPSK decisions on the first K rows of `estimates` against `truth`
// (K x T). OoS rows, if present, are ignored.
BerStats evaluate_ber(const CMatrix &estimates, const CMatrix &truth);

} // namespace oosi

#endif
