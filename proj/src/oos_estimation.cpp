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

#include "oosi/oos_estimation.hpp"

#include <algorithm>
#include <string>

#include "oosi/errors.hpp"

namespace oosi
{

namespace
{

// Smallest-to-largest singular value ratio below which a factor is treated
// as rank deficient.
constexpr double rank_ratio = 1e-9;

void check_residuals(const ProjectedResidual &residuals, const SystemConfig &cfg)
{
    if (static_cast<int>(residuals.zpsi.size()) != cfg.num_aps)
        throw InputError("residuals must be given for every AP");
    for (const auto &z : residuals.zpsi)
        if (z.rows() != cfg.antennas_per_ap || z.cols() != cfg.complement_dim())
            throw InputError("residual has wrong shape");
}

} // namespace

LocalEstimate local_svd_estimate(const CMatrix &zpsi, int num_oos)
{
    if (num_oos < 1)
        throw InputError("local_svd_estimate: num_oos must be positive");
    if (num_oos > zpsi.cols())
        throw InputError("local_svd_estimate: num_oos exceeds the residual dimension");

    const Index k = num_oos;
    const Index r = std::min(zpsi.rows(), zpsi.cols());
    const Svd svd = k <= r ? economy_svd(zpsi) : svd_full_v(zpsi);

    LocalEstimate out;
    out.sbar = svd.V.leftCols(k);
    out.g = CMatrix::Zero(zpsi.rows(), k);
    const Index kept = std::min(k, r);
    out.g.leftCols(kept) = svd.U.leftCols(kept) * svd.sigma.head(kept).cast<cplx>().asDiagonal();
    return out;
}

CMatrix procrustes_rotation(const CMatrix &prev, const CMatrix &local, std::uint64_t *degenerate_count)
{
    if (prev.rows() != local.rows() || prev.cols() != local.cols() || prev.cols() == 0)
        throw InputError("procrustes_rotation: shapes must match");
    const CMatrix cross = local.adjoint() * prev;
    const Svd svd = economy_svd(cross);
    const double smax = svd.sigma.size() > 0 ? svd.sigma(0) : 0.0;
    const double smin = svd.sigma.size() > 0 ? svd.sigma(svd.sigma.size() - 1) : 0.0;
    if (degenerate_count != nullptr && (!(smax > 0.0) || smin <= rank_ratio * smax))
        ++*degenerate_count;
    return svd.V * svd.U.adjoint();
}

CMatrix rotate_and_average_step(const CMatrix &prev, const CMatrix &local, std::uint64_t *degenerate_count)
{
    const CMatrix Q = procrustes_rotation(prev, local, degenerate_count);
    return 0.5 * (prev + local * Q.adjoint());
}

CMatrix run_sequential_procrustes(const ProjectedResidual &residuals, const SystemConfig &cfg, Chain &chain)
{
    check_residuals(residuals, cfg);
    if (cfg.num_oos == 0)
        return CMatrix(cfg.complement_dim(), 0);

    // Local estimates do not depend on the chain and could run concurrently.
    std::vector<CMatrix> local;
    local.reserve(residuals.zpsi.size());
    for (const auto &z : residuals.zpsi)
        local.push_back(local_svd_estimate(z, cfg.num_oos).sbar);

    auto fold = [&](int ap, const FronthaulMessage &incoming) {
        const CMatrix &mine = local[static_cast<std::size_t>(ap)];
        if (incoming.payload.size() == 0)
            return FronthaulMessage::make(MessageKind::SbarEstimate, mine);
        return FronthaulMessage::make(
            MessageKind::SbarEstimate,
            rotate_and_average_step(incoming.payload, mine, &chain.diagnostics().degenerate_procrustes));
    };
    FronthaulMessage at_cpu = chain.pass(Phase::OosEstimation, fold, FronthaulMessage{});
    chain.broadcast(Phase::OosBroadcast, FronthaulMessage::make(MessageKind::Broadcast, at_cpu.payload));
    return at_cpu.payload;
}

CMatrix accumulate_residual_gramian(const ProjectedResidual &residuals, const SystemConfig &cfg, Chain &chain)
{
    check_residuals(residuals, cfg);
    const Index n = cfg.complement_dim();
    auto fold = [&](int ap, const FronthaulMessage &incoming) {
        const CMatrix &z = residuals.zpsi[static_cast<std::size_t>(ap)];
        return FronthaulMessage::make(MessageKind::ResidualGramian, incoming.payload + z.adjoint() * z);
    };
    FronthaulMessage init = FronthaulMessage::make(MessageKind::ResidualGramian, CMatrix::Zero(n, n));
    return chain.pass(Phase::OosEstimation, fold, std::move(init)).payload;
}

CMatrix run_gramian_method(const ProjectedResidual &residuals, const SystemConfig &cfg, Chain &chain)
{
    check_residuals(residuals, cfg);
    if (cfg.num_oos == 0)
        return CMatrix(cfg.complement_dim(), 0);
    const CMatrix gramian = accumulate_residual_gramian(residuals, cfg, chain);
    CMatrix sbar = hermitian_top_eigvectors(gramian, cfg.num_oos).vectors;
    chain.broadcast(Phase::OosBroadcast, FronthaulMessage::make(MessageKind::Broadcast, sbar));
    return sbar;
}

std::vector<CMatrix> estimate_oos_channels(const ProjectedResidual &residuals, const CMatrix &sbar)
{
    std::vector<CMatrix> out;
    out.reserve(residuals.zpsi.size());
    if (sbar.cols() == 0)
    {
        for (const auto &z : residuals.zpsi)
            out.push_back(CMatrix(z.rows(), 0));
        return out;
    }
    const Svd svd = economy_svd(sbar);
    if (!(svd.sigma(0) > 0.0) || svd.sigma(svd.sigma.size() - 1) <= rank_ratio * svd.sigma(0))
        throw DegeneracyError("estimate_oos_channels: OoS signal estimate is rank deficient");

    const CMatrix gram = sbar.adjoint() * sbar;
    for (const auto &z : residuals.zpsi)
    {
        if (z.cols() != sbar.rows())
            throw InputError("estimate_oos_channels: residual and estimate dimensions differ");
        // (Z Sbar) Gram^{-1} = (Gram^{-1} (Z Sbar)^H)^H since Gram is Hermitian.
        const CMatrix zs = z * sbar;
        out.push_back(hermitian_solve(gram, zs.adjoint(), 0.0).adjoint());
    }
    return out;
}

CentralizedOosEstimate centralized_oos_oracle(const ProjectedResidual &residuals, int num_oos)
{
    if (residuals.zpsi.empty())
        throw InputError("centralized_oos_oracle: no residuals");
    const CMatrix stacked = vstack(residuals.zpsi);
    const LocalEstimate fit = local_svd_estimate(stacked, num_oos);
    CentralizedOosEstimate out{fit.sbar, {}};
    Index row = 0;
    for (const auto &z : residuals.zpsi)
    {
        out.g.push_back(fit.g.middleRows(row, z.rows()));
        row += z.rows();
    }
    return out;
}

} // namespace oosi
