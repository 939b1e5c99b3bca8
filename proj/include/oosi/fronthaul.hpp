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

#ifndef OOSI_FRONTHAUL_HPP
#define OOSI_FRONTHAUL_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "oosi/numerics.hpp"
#include "oosi/scenario.hpp"

namespace oosi
{

enum class MessageKind
{
    SbarEstimate,
    ResidualGramian,
    ChannelGramian,
    CombinedUplink,
    DetectorState,
    PartialPrecodedVector,
    Broadcast,
};

// Processing pass a message belongs to; load is itemized per phase.
enum class Phase
{
    OosEstimation,
    OosBroadcast,
    ChannelGramian,
    UplinkCombining,
    UplinkSequentialLs,
    DownlinkPrecoding,
};

inline constexpr std::array<Phase, 6> all_phases{Phase::OosEstimation,   Phase::OosBroadcast,
                                                 Phase::ChannelGramian,  Phase::UplinkCombining,
                                                 Phase::UplinkSequentialLs, Phase::DownlinkPrecoding};

std::string_view to_string(MessageKind kind);
std::string_view to_string(Phase phase);

// One real scalar = 1, one complex scalar = 2.
std::uint64_t general_real_symbols(const CMatrix &M);
// A Hermitian n x n matrix: n real diagonal entries + n(n-1)/2 complex
// off-diagonal entries = n^2 real symbols.
std::uint64_t hermitian_real_symbols(const CMatrix &M);

struct FronthaulMessage
{
    MessageKind kind = MessageKind::Broadcast;
    CMatrix payload;
    CMatrix aux; // error covariance for DetectorState, empty otherwise
    std::uint64_t real_symbol_count = 0;

    // Builds a message and sets real_symbol_count from the kind's formula.
    static FronthaulMessage make(MessageKind kind, CMatrix payload, CMatrix aux = CMatrix());
};

struct PhaseLoad
{
    std::vector<std::uint64_t> per_link; // summed over passes
    std::uint64_t passes = 0;
};

class LoadReport
{
public:
    void record(Phase phase, std::size_t link, std::size_t num_links, std::uint64_t real_symbols);
    void count_pass(Phase phase, std::size_t num_links);

    // nullptr if nothing was recorded for the phase.
    const PhaseLoad *phase(Phase phase) const;
    std::uint64_t total(Phase phase) const;
    std::uint64_t total() const;

    // Per-link load of a single pass; throws if links differ or the total is
    // not divisible by the pass count (it always is for well-formed runs).
    std::uint64_t per_link_per_pass(Phase phase) const;

    void merge(const LoadReport &other);

    std::string to_json() const;
    std::string to_csv() const;

private:
    std::array<PhaseLoad, all_phases.size()> phases_{};
};

struct ChainDiagnostics
{
    std::uint64_t degenerate_procrustes = 0;
};

/**
 * Daisy chain AP -> AP -> ... -> CPU, simulated in-process.
 *
 * Link i carries traffic between position i of the visiting order and
 * position i + 1 (the CPU for the last AP). A forward pass sends one message
 * per link; a broadcast sends the CPU's message back over every link.
 */
class Chain
{
public:
    using Fold = std::function<FronthaulMessage(int ap, const FronthaulMessage &incoming)>;

    explicit Chain(std::vector<int> order);

    const std::vector<int> &order() const { return order_; }
    std::size_t num_links() const { return order_.size(); }

    // Applies fold at each AP in order; returns what the CPU receives. `init`
    // is what the first AP sees and is not transmitted.
    FronthaulMessage pass(Phase phase, const Fold &fold, FronthaulMessage init);

    void broadcast(Phase phase, const FronthaulMessage &msg);

    const LoadReport &load() const { return load_; }
    LoadReport &load() { return load_; }
    ChainDiagnostics &diagnostics() { return diag_; }
    const ChainDiagnostics &diagnostics() const { return diag_; }

private:
    std::vector<int> order_;
    LoadReport load_;
    ChainDiagnostics diag_;
};

// Fronthaul items with closed-form per-link load (one pass, one symbol
// period for the payload items).
enum class FronthaulItem
{
    ProcrustesEstimation,   // 2 K_I (tau_p - K)
    GramianEstimation,      // (tau_p - K)^2
    SbarBroadcast,          // 2 K_I (tau_p - K)
    ChannelGramian,         // (K + K_I)^2
    DistributedZfUplink,    // 2 (K + K_I)
    SequentialLsUplink,     // 2 (K + K_I) + (K + K_I)^2
    PartialPrecodedBroadcast, // 2 (K + K_I)
};

inline constexpr std::array<FronthaulItem, 7> all_fronthaul_items{
    FronthaulItem::ProcrustesEstimation, FronthaulItem::GramianEstimation,
    FronthaulItem::SbarBroadcast,        FronthaulItem::ChannelGramian,
    FronthaulItem::DistributedZfUplink,  FronthaulItem::SequentialLsUplink,
    FronthaulItem::PartialPrecodedBroadcast};

std::string_view to_string(FronthaulItem item);
FronthaulItem parse_fronthaul_item(std::string_view name);
Phase phase_of(FronthaulItem item);

std::uint64_t analytic_per_link_load(FronthaulItem item, const SystemConfig &cfg);

// Analytic report for a single pass of `item` over all L links.
LoadReport load_report(FronthaulItem item, const SystemConfig &cfg);

} // namespace oosi

#endif
