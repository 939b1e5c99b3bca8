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

#include "oosi/downlink.hpp"

#include "oosi/errors.hpp"

namespace oosi
{

std::vector<CMatrix> build_local_precoders(const AugmentedChannel &A, const CMatrix &gamma)
{
    const Index n = A.dim();
    if (A.per_ap.empty() || gamma.rows() != n || gamma.cols() != n)
        throw InputError("build_local_precoders: Gramian does not match channel");
    // A_l Gamma^{-1} = (Gamma^{-1} A_l^H)^H
    std::vector<CMatrix> out;
    out.reserve(A.per_ap.size());
    for (const auto &a : A.per_ap)
        out.push_back(hermitian_solve(gamma, a.adjoint()).adjoint());
    return out;
}

CMatrix compute_partial_precoded(const CMatrix &x_dl, const CMatrix &gamma, Chain &chain)
{
    const Index n = gamma.rows();
    if (gamma.cols() != n || x_dl.rows() > n)
        throw InputError("compute_partial_precoded: dimension mismatch");
    CMatrix padded = CMatrix::Zero(n, x_dl.cols());
    padded.topRows(x_dl.rows()) = x_dl;
    CMatrix q = hermitian_solve(gamma, padded);
    for (Index t = 0; t < q.cols(); ++t)
        chain.broadcast(Phase::DownlinkPrecoding,
                        FronthaulMessage::make(MessageKind::PartialPrecodedVector, q.col(t)));
    return q;
}

DownlinkResult simulate_downlink(const BlockRealization &block, const AugmentedChannel &A, const CMatrix &q,
                                 const CMatrix &x_dl, Rng &rng, double noise_variance)
{
    if (A.per_ap.size() != block.H.size() || q.rows() != A.dim())
        throw InputError("simulate_downlink: dimension mismatch");
    const Index K = block.H.front().cols();
    const Index KI = block.G.front().cols();
    const Index T = q.cols();
    if (x_dl.rows() != K || x_dl.cols() != T)
        throw InputError("simulate_downlink: x_dl shape does not match q");

    DownlinkResult out;
    out.ue_rx = CMatrix::Zero(K, T);
    out.oos_rx = CMatrix::Zero(KI, T);
    for (std::size_t l = 0; l < block.H.size(); ++l)
    {
        const CMatrix tx = A.per_ap[l] * q;
        out.ue_rx += block.H[l].adjoint() * tx;
        if (KI > 0)
            out.oos_rx += block.G[l].adjoint() * tx;
        out.per_ap_power.push_back(tx.squaredNorm() / static_cast<double>(T));
    }
    if (noise_variance > 0.0)
        out.ue_rx += complex_gaussian(K, T, noise_variance, rng);

    out.leakage_power = KI > 0 ? out.oos_rx.squaredNorm() / static_cast<double>(KI * T) : 0.0;
    for (Index k = 0; k < K; ++k)
        out.ue_mse.push_back((out.ue_rx.row(k) - x_dl.row(k)).squaredNorm() / static_cast<double>(T));
    return out;
}

} // namespace oosi
