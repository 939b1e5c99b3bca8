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

#include "oosi/uplink.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

#include "oosi/errors.hpp"

namespace oosi
{

AugmentedChannel augment(const std::vector<CMatrix> &H, const std::vector<CMatrix> &G, double ue_amplitude)
{
    if (H.empty() || H.size() != G.size())
        throw InputError("augment: need matching, nonempty per-AP channel lists");
    AugmentedChannel A;
    A.num_ues = static_cast<int>(H.front().cols());
    for (std::size_t l = 0; l < H.size(); ++l)
    {
        if (H[l].rows() != G[l].rows() || H[l].cols() != A.num_ues || G[l].cols() != G.front().cols())
            throw InputError("augment: per-AP channel shapes are inconsistent");
        CMatrix a(H[l].rows(), H[l].cols() + G[l].cols());
        a << ue_amplitude * H[l], G[l];
        A.per_ap.push_back(std::move(a));
    }
    return A;
}

AugmentedChannel augment_block_diagonal(const std::vector<CMatrix> &H, const std::vector<CMatrix> &local_g,
                                        double ue_amplitude)
{
    if (H.empty() || H.size() != local_g.size())
        throw InputError("augment_block_diagonal: need matching, nonempty per-AP channel lists");
    const Index K = H.front().cols();
    Index extra = 0;
    for (const auto &g : local_g)
        extra += g.cols();
    AugmentedChannel A;
    A.num_ues = static_cast<int>(K);
    Index offset = K;
    for (std::size_t l = 0; l < H.size(); ++l)
    {
        if (H[l].cols() != K || H[l].rows() != local_g[l].rows())
            throw InputError("augment_block_diagonal: per-AP channel shapes are inconsistent");
        CMatrix a = CMatrix::Zero(H[l].rows(), K + extra);
        a.leftCols(K) = ue_amplitude * H[l];
        a.middleCols(offset, local_g[l].cols()) = local_g[l];
        offset += local_g[l].cols();
        A.per_ap.push_back(std::move(a));
    }
    return A;
}

cplx qpsk_symbol(int b1, int b0)
{
    return cplx(1.0 - 2.0 * b1, 1.0 - 2.0 * b0) / std::numbers::sqrt2;
}

std::pair<int, int> qpsk_bits(cplx z)
{
    return {z.real() < 0.0 ? 1 : 0, z.imag() < 0.0 ? 1 : 0};
}

CMatrix random_qpsk(Index rows, Index cols, Rng &rng)
{
    std::uniform_int_distribution<int> bit(0, 1);
    CMatrix x(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i)
        {
            const int b1 = bit(rng);
            const int b0 = bit(rng);
            x(i, j) = qpsk_symbol(b1, b0);
        }
    return x;
}

UplinkSymbolBatch receive_uplink(const BlockRealization &block, CMatrix x, CMatrix s,
                                 const std::vector<CMatrix> &noise, double rho)
{
    if (noise.size() != block.H.size() || block.G.size() != block.H.size())
        throw InputError("receive_uplink: AP counts differ");
    if (x.cols() != s.cols())
        throw InputError("receive_uplink: x and s cover different symbol periods");
    UplinkSymbolBatch batch{std::move(x), std::move(s), {}};
    const double amp = std::sqrt(rho);
    for (std::size_t l = 0; l < block.H.size(); ++l)
    {
        if (block.H[l].cols() != batch.x.rows() || block.G[l].cols() != batch.s.rows() ||
            noise[l].rows() != block.H[l].rows() || noise[l].cols() != batch.x.cols())
            throw InputError("receive_uplink: dimension mismatch");
        CMatrix y = amp * block.H[l] * batch.x + noise[l];
        if (batch.s.rows() > 0)
            y += block.G[l] * batch.s;
        batch.y.push_back(std::move(y));
    }
    return batch;
}

UplinkSymbolBatch simulate_uplink_rx(const BlockRealization &block, const SystemConfig &cfg, Index symbols,
                                     Rng &rng, double noise_variance)
{
    if (symbols < 1)
        throw InputError("simulate_uplink_rx: need at least one symbol period");
    CMatrix x = random_qpsk(cfg.num_ues, symbols, rng);
    CMatrix s = complex_gaussian(cfg.num_oos, symbols, cfg.oos_snr, rng);
    std::vector<CMatrix> noise;
    for (std::size_t l = 0; l < block.H.size(); ++l)
        noise.push_back(noise_variance > 0.0
                            ? complex_gaussian(cfg.antennas_per_ap, symbols, noise_variance, rng)
                            : CMatrix::Zero(cfg.antennas_per_ap, symbols));
    return receive_uplink(block, std::move(x), std::move(s), noise, cfg.rho);
}

namespace
{

void check_batch(const UplinkSymbolBatch &batch, const AugmentedChannel &A)
{
    if (A.per_ap.empty() || batch.y.size() != A.per_ap.size())
        throw InputError("uplink detection: AP counts differ");
    for (std::size_t l = 0; l < A.per_ap.size(); ++l)
        if (batch.y[l].rows() != A.per_ap[l].rows() || A.per_ap[l].cols() != A.dim() ||
            batch.y[l].cols() != batch.y.front().cols())
            throw InputError("uplink detection: dimension mismatch");
}

} // namespace

SequentialLsResult detect_sequential_ls(const UplinkSymbolBatch &batch, const AugmentedChannel &A,
                                        const SystemConfig &cfg, Chain &chain, double noise_variance)
{
    check_batch(batch, A);
    if (!(cfg.alpha > 0.0))
        throw InputError("detect_sequential_ls: alpha must be positive");
    if (!(noise_variance > 0.0))
        throw InputError("detect_sequential_ls: noise variance must be positive");
    if (chain.num_links() != A.per_ap.size())
        throw InputError("detect_sequential_ls: chain does not match AP count");

    const Index n = A.dim();
    const Index T = batch.y.front().cols();

    // Each hop triangularizes [R; a / sigma]. The rotation depends only on
    // the channels, so its blocks acting on z and y are computed once.
    struct Hop
    {
        CMatrix on_z; // n x n
        CMatrix on_y; // n x N
    };
    std::vector<Hop> hops(A.per_ap.size());
    std::vector<CMatrix> factors;
    const double inv_sigma = 1.0 / std::sqrt(noise_variance);
    CMatrix R = CMatrix::Identity(n, n) / std::sqrt(cfg.alpha);
    for (int ap : chain.order())
    {
        const CMatrix &a = A.per_ap[static_cast<std::size_t>(ap)];
        const Index N = a.rows();
        CMatrix stacked(n + N, n);
        stacked << R, a * inv_sigma;
        Eigen::HouseholderQR<CMatrix> qr(stacked);
        // First n rows of Q^H.
        CMatrix qh = (qr.householderQ() * CMatrix::Identity(n + N, n)).adjoint();
        R = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
        for (Index j = 0; j < n; ++j)
        {
            const double mag = std::abs(R(j, j));
            if (!(mag > 0.0))
                throw NumericalError("detect_sequential_ls: singular information factor");
            const cplx phase = std::conj(R(j, j)) / mag;
            R.row(j) *= phase;
            qh.row(j) *= phase;
        }
        if (!all_finite(R) || !all_finite(qh))
            throw NumericalError("detect_sequential_ls: non-finite recursion state");
        hops[static_cast<std::size_t>(ap)] = {qh.leftCols(n), qh.rightCols(N) * inv_sigma};
        factors.push_back(R);
    }

    SequentialLsResult result;
    for (const CMatrix &F : factors)
    {
        const CMatrix Rinv = F.triangularView<Eigen::Upper>().solve(CMatrix::Identity(n, n));
        CMatrix C = Rinv * Rinv.adjoint();
        result.covariances.push_back(0.5 * (C + C.adjoint()));
    }

    // One chain pass per symbol period; the message carries (z, R).
    result.estimates.resize(n, T);
    for (Index t = 0; t < T; ++t)
    {
        std::size_t hop = 0;
        auto fold = [&](int ap, const FronthaulMessage &incoming) {
            const auto l = static_cast<std::size_t>(ap);
            CVector z = hops[l].on_z * incoming.payload + hops[l].on_y * batch.y[l].col(t);
            return FronthaulMessage::make(MessageKind::DetectorState, std::move(z), factors[hop++]);
        };
        FronthaulMessage init = FronthaulMessage::make(MessageKind::DetectorState, CVector::Zero(n),
                                                       CMatrix::Identity(n, n) / std::sqrt(cfg.alpha));
        const CVector z = chain.pass(Phase::UplinkSequentialLs, fold, std::move(init)).payload;
        result.estimates.col(t) = R.triangularView<Eigen::Upper>().solve(z);
    }
    return result;
}

CMatrix accumulate_channel_gramian(const AugmentedChannel &A, Chain &chain)
{
    if (A.per_ap.empty() || chain.num_links() != A.per_ap.size())
        throw InputError("accumulate_channel_gramian: chain does not match AP count");
    const Index n = A.dim();
    auto fold = [&](int ap, const FronthaulMessage &incoming) {
        const CMatrix &a = A.per_ap[static_cast<std::size_t>(ap)];
        return FronthaulMessage::make(MessageKind::ChannelGramian, incoming.payload + a.adjoint() * a);
    };
    FronthaulMessage init = FronthaulMessage::make(MessageKind::ChannelGramian, CMatrix::Zero(n, n));
    return chain.pass(Phase::ChannelGramian, fold, std::move(init)).payload;
}

CMatrix detect_distributed_zf(const UplinkSymbolBatch &batch, const AugmentedChannel &A, const CMatrix &gamma,
                              Chain &chain)
{
    check_batch(batch, A);
    const Index n = A.dim();
    if (gamma.rows() != n || gamma.cols() != n)
        throw InputError("detect_distributed_zf: Gramian has wrong shape");
    if (chain.num_links() != A.per_ap.size())
        throw InputError("detect_distributed_zf: chain does not match AP count");

    const Index T = batch.y.front().cols();
    CMatrix combined(n, T);
    for (Index t = 0; t < T; ++t)
    {
        auto fold = [&](int ap, const FronthaulMessage &incoming) {
            const auto l = static_cast<std::size_t>(ap);
            return FronthaulMessage::make(MessageKind::CombinedUplink,
                                          incoming.payload + A.per_ap[l].adjoint() * batch.y[l].col(t));
        };
        FronthaulMessage init = FronthaulMessage::make(MessageKind::CombinedUplink, CVector::Zero(n));
        combined.col(t) = chain.pass(Phase::UplinkCombining, fold, std::move(init)).payload;
    }
    return hermitian_solve(gamma, combined);
}

CentralizedDetection detect_centralized(const UplinkSymbolBatch &batch, const AugmentedChannel &A)
{
    check_batch(batch, A);
    const CMatrix stacked_a = A.stacked();
    const CMatrix stacked_y = vstack(batch.y);
    const Svd svd = economy_svd(stacked_a);
    CentralizedDetection out;
    out.rank = numerical_rank(svd.sigma);
    out.rank_deficient = out.rank < A.dim();
    if (out.rank == 0)
    {
        out.estimates = CMatrix::Zero(A.dim(), stacked_y.cols());
        return out;
    }
    const Index r = out.rank;
    const RVector inv = svd.sigma.head(r).cwiseInverse();
    out.estimates = svd.V.leftCols(r) * (inv.cast<cplx>().asDiagonal() * (svd.U.leftCols(r).adjoint() * stacked_y));
    return out;
}

std::pair<double, double> wilson_interval(std::uint64_t errors, std::uint64_t trials)
{
    if (trials == 0)
        throw InputError("wilson_interval: no trials");
    constexpr double z = 1.959963984540054;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(errors) / n;
    const double denom = 1.0 + z * z / n;
    const double centre = (p + z * z / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
    // Clamp so the interval always brackets p despite rounding at p = 0 or 1.
    return {std::min(p, std::max(0.0, centre - half)), std::max(p, std::min(1.0, centre + half))};
}

BerStats evaluate_ber(const CMatrix &estimates, const CMatrix &truth)
{
    if (truth.size() == 0)
        throw InputError("evaluate_ber: empty symbol stream");
    if (estimates.rows() < truth.rows() || estimates.cols() != truth.cols())
        throw InputError("evaluate_ber: estimate and truth shapes differ");
    BerStats stats;
    stats.per_ue_bit_errors.assign(static_cast<std::size_t>(truth.rows()), 0);
    for (Index t = 0; t < truth.cols(); ++t)
        for (Index k = 0; k < truth.rows(); ++k)
        {
            const auto [e1, e0] = qpsk_bits(estimates(k, t));
            const auto [t1, t0] = qpsk_bits(truth(k, t));
            const std::uint64_t errs = static_cast<std::uint64_t>(e1 != t1) + static_cast<std::uint64_t>(e0 != t0);
            stats.per_ue_bit_errors[static_cast<std::size_t>(k)] += errs;
            stats.bit_errors += errs;
        }
    stats.bit_count = 2u * static_cast<std::uint64_t>(truth.size());
    stats.ber = static_cast<double>(stats.bit_errors) / static_cast<double>(stats.bit_count);
    std::tie(stats.ci_low, stats.ci_high) = wilson_interval(stats.bit_errors, stats.bit_count);
    return stats;
}

} // namespace oosi
