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

#include "oosi/fronthaul.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "oosi/errors.hpp"

namespace oosi
{

std::string_view to_string(MessageKind kind)
{
    switch (kind)
    {
    case MessageKind::SbarEstimate: return "sbar_estimate";
    case MessageKind::ResidualGramian: return "residual_gramian";
    case MessageKind::ChannelGramian: return "channel_gramian";
    case MessageKind::CombinedUplink: return "combined_uplink";
    case MessageKind::DetectorState: return "detector_state";
    case MessageKind::PartialPrecodedVector: return "partial_precoded_vector";
    case MessageKind::Broadcast: return "broadcast";
    }
    return "unknown";
}

std::string_view to_string(Phase phase)
{
    switch (phase)
    {
    case Phase::OosEstimation: return "oos_estimation";
    case Phase::OosBroadcast: return "oos_broadcast";
    case Phase::ChannelGramian: return "channel_gramian";
    case Phase::UplinkCombining: return "uplink_combining";
    case Phase::UplinkSequentialLs: return "uplink_sequential_ls";
    case Phase::DownlinkPrecoding: return "downlink_precoding";
    }
    return "unknown";
}

std::uint64_t general_real_symbols(const CMatrix &M)
{
    return 2u * static_cast<std::uint64_t>(M.size());
}

std::uint64_t hermitian_real_symbols(const CMatrix &M)
{
    if (M.rows() != M.cols())
        throw InputError("hermitian_real_symbols: payload is not square");
    return static_cast<std::uint64_t>(M.rows()) * static_cast<std::uint64_t>(M.rows());
}

FronthaulMessage FronthaulMessage::make(MessageKind kind, CMatrix payload, CMatrix aux)
{
    FronthaulMessage msg{kind, std::move(payload), std::move(aux), 0};
    switch (kind)
    {
    case MessageKind::ResidualGramian:
    case MessageKind::ChannelGramian:
        msg.real_symbol_count = hermitian_real_symbols(msg.payload);
        break;
    case MessageKind::DetectorState:
        msg.real_symbol_count = general_real_symbols(msg.payload) + hermitian_real_symbols(msg.aux);
        break;
    default:
        msg.real_symbol_count = general_real_symbols(msg.payload);
        break;
    }
    return msg;
}

namespace
{

std::size_t slot(Phase phase) { return static_cast<std::size_t>(phase); }

} // namespace

void LoadReport::record(Phase phase, std::size_t link, std::size_t num_links, std::uint64_t real_symbols)
{
    PhaseLoad &p = phases_[slot(phase)];
    if (p.per_link.empty())
        p.per_link.assign(num_links, 0);
    if (p.per_link.size() != num_links || link >= num_links)
        throw InputError("LoadReport: inconsistent link indexing for phase " + std::string(to_string(phase)));
    p.per_link[link] += real_symbols;
}

void LoadReport::count_pass(Phase phase, std::size_t num_links)
{
    PhaseLoad &p = phases_[slot(phase)];
    if (p.per_link.empty())
        p.per_link.assign(num_links, 0);
    ++p.passes;
}

const PhaseLoad *LoadReport::phase(Phase phase) const
{
    const PhaseLoad &p = phases_[slot(phase)];
    return p.passes == 0 && p.per_link.empty() ? nullptr : &p;
}

std::uint64_t LoadReport::total(Phase phase) const
{
    std::uint64_t sum = 0;
    for (auto v : phases_[slot(phase)].per_link)
        sum += v;
    return sum;
}

std::uint64_t LoadReport::total() const
{
    std::uint64_t sum = 0;
    for (Phase ph : all_phases)
        sum += total(ph);
    return sum;
}

std::uint64_t LoadReport::per_link_per_pass(Phase phase) const
{
    const PhaseLoad &p = phases_[slot(phase)];
    if (p.passes == 0 || p.per_link.empty())
        return 0;
    const std::uint64_t first = p.per_link.front();
    for (auto v : p.per_link)
        if (v != first)
            throw NumericalError("LoadReport: per-link load differs across links");
    if (first % p.passes != 0)
        throw NumericalError("LoadReport: load is not a whole number of passes");
    return first / p.passes;
}

void LoadReport::merge(const LoadReport &other)
{
    for (Phase ph : all_phases)
    {
        const PhaseLoad &src = other.phases_[slot(ph)];
        if (src.per_link.empty())
            continue;
        PhaseLoad &dst = phases_[slot(ph)];
        if (dst.per_link.empty())
            dst.per_link.assign(src.per_link.size(), 0);
        if (dst.per_link.size() != src.per_link.size())
            throw InputError("LoadReport::merge: link counts differ");
        for (std::size_t i = 0; i < src.per_link.size(); ++i)
            dst.per_link[i] += src.per_link[i];
        dst.passes += src.passes;
    }
}

std::string LoadReport::to_json() const
{
    nlohmann::json phases = nlohmann::json::object();
    for (Phase ph : all_phases)
    {
        const PhaseLoad *p = phase(ph);
        if (p == nullptr)
            continue;
        phases[std::string(to_string(ph))] = {
            {"per_link_real_symbols", p->per_link}, {"passes", p->passes}, {"total", total(ph)}};
    }
    nlohmann::json j{{"phases", phases}, {"total_real_symbols", total()}};
    return j.dump(2);
}

std::string LoadReport::to_csv() const
{
    std::ostringstream os;
    os << "phase,link,real_symbols,passes\n";
    for (Phase ph : all_phases)
    {
        const PhaseLoad *p = phase(ph);
        if (p == nullptr)
            continue;
        for (std::size_t i = 0; i < p->per_link.size(); ++i)
            os << to_string(ph) << ',' << i << ',' << p->per_link[i] << ',' << p->passes << '\n';
    }
    return os.str();
}

Chain::Chain(std::vector<int> order) : order_(std::move(order))
{
    if (order_.empty())
        throw InputError("Chain: order must contain at least one AP");
    std::vector<int> sorted = order_;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i)
        if (sorted[i] != static_cast<int>(i))
            throw InputError("Chain: order must visit every AP exactly once");
}

namespace
{

[[noreturn]] void rethrow_at_hop(std::size_t hop, int ap)
{
    const std::string where = "chain hop " + std::to_string(hop) + " (AP " + std::to_string(ap) + "): ";
    try
    {
        throw;
    }
    catch (const DegeneracyError &e)
    {
        throw DegeneracyError(where + e.what());
    }
    catch (const NumericalError &e)
    {
        throw NumericalError(where + e.what());
    }
    catch (const InputError &e)
    {
        throw InputError(where + e.what());
    }
    catch (const std::exception &e)
    {
        throw NumericalError(where + e.what());
    }
}

} // namespace

FronthaulMessage Chain::pass(Phase phase, const Fold &fold, FronthaulMessage init)
{
    FronthaulMessage msg = std::move(init);
    load_.count_pass(phase, num_links());
    for (std::size_t hop = 0; hop < order_.size(); ++hop)
    {
        const int ap = order_[hop];
        try
        {
            msg = fold(ap, msg);
        }
        catch (...)
        {
            rethrow_at_hop(hop, ap);
        }
        load_.record(phase, hop, num_links(), msg.real_symbol_count);
    }
    return msg;
}

void Chain::broadcast(Phase phase, const FronthaulMessage &msg)
{
    load_.count_pass(phase, num_links());
    for (std::size_t i = num_links(); i-- > 0;)
        load_.record(phase, i, num_links(), msg.real_symbol_count);
}

std::string_view to_string(FronthaulItem item)
{
    switch (item)
    {
    case FronthaulItem::ProcrustesEstimation: return "procrustes_estimation";
    case FronthaulItem::GramianEstimation: return "gramian_estimation";
    case FronthaulItem::SbarBroadcast: return "sbar_broadcast";
    case FronthaulItem::ChannelGramian: return "channel_gramian";
    case FronthaulItem::DistributedZfUplink: return "distributed_zf_uplink";
    case FronthaulItem::SequentialLsUplink: return "sequential_ls_uplink";
    case FronthaulItem::PartialPrecodedBroadcast: return "partial_precoded_broadcast";
    }
    return "unknown";
}

FronthaulItem parse_fronthaul_item(std::string_view name)
{
    for (FronthaulItem item : all_fronthaul_items)
        if (to_string(item) == name)
            return item;
    throw InputError("unknown fronthaul item: " + std::string(name));
}

Phase phase_of(FronthaulItem item)
{
    switch (item)
    {
    case FronthaulItem::ProcrustesEstimation:
    case FronthaulItem::GramianEstimation: return Phase::OosEstimation;
    case FronthaulItem::SbarBroadcast: return Phase::OosBroadcast;
    case FronthaulItem::ChannelGramian: return Phase::ChannelGramian;
    case FronthaulItem::DistributedZfUplink: return Phase::UplinkCombining;
    case FronthaulItem::SequentialLsUplink: return Phase::UplinkSequentialLs;
    case FronthaulItem::PartialPrecodedBroadcast: return Phase::DownlinkPrecoding;
    }
    throw InputError("unknown fronthaul item");
}

std::uint64_t analytic_per_link_load(FronthaulItem item, const SystemConfig &cfg)
{
    const auto K = static_cast<std::uint64_t>(cfg.num_ues);
    const auto KI = static_cast<std::uint64_t>(cfg.num_oos);
    const auto comp = static_cast<std::uint64_t>(cfg.complement_dim());
    const std::uint64_t aug = K + KI;
    switch (item)
    {
    case FronthaulItem::ProcrustesEstimation: return 2 * KI * comp;
    // No OoS source, no estimation pass.
    case FronthaulItem::GramianEstimation: return KI == 0 ? 0 : comp * comp;
    case FronthaulItem::SbarBroadcast: return 2 * KI * comp;
    case FronthaulItem::ChannelGramian: return aug * aug;
    case FronthaulItem::DistributedZfUplink: return 2 * aug;
    case FronthaulItem::SequentialLsUplink: return 2 * aug + aug * aug;
    case FronthaulItem::PartialPrecodedBroadcast: return 2 * aug;
    }
    throw InputError("unknown fronthaul item");
}

LoadReport load_report(FronthaulItem item, const SystemConfig &cfg)
{
    cfg.validate();
    LoadReport report;
    const auto links = static_cast<std::size_t>(cfg.num_aps);
    const Phase ph = phase_of(item);
    report.count_pass(ph, links);
    const std::uint64_t per_link = analytic_per_link_load(item, cfg);
    for (std::size_t i = 0; i < links; ++i)
        report.record(ph, i, links, per_link);
    return report;
}

} // namespace oosi
