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

#ifndef OOSI_EXPERIMENTS_HPP
#define OOSI_EXPERIMENTS_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "oosi/fronthaul.hpp"
#include "oosi/scenario.hpp"

namespace oosi
{

// How the OoS channels entering the detector are obtained.
enum class OosMethod
{
    NoSuppression,     // UE channels only
    LocalProcessing,   // per-AP SVD estimates, no cooperation
    SeqProcrustes,     // chain rotate-and-average
    SeqGramian,        // chain Gramian accumulation
    CentralizedGenie,  // true H and G
    CentralizedOracle, // rank-K_I fit of the stacked residual at the CPU
};

enum class Detector
{
    SequentialLs,
    DistributedZf,
    CentralizedZf,
};

std::string_view to_string(OosMethod m);
std::string_view to_string(Detector d);
OosMethod parse_oos_method(std::string_view name);
Detector parse_detector(std::string_view name);

struct ExperimentSpec
{
    SystemConfig cfg;
    std::vector<double> snr_grid_db{-10.0, -8.0, -6.0, -4.0, -2.0, 0.0};
    std::vector<OosMethod> methods{OosMethod::NoSuppression, OosMethod::LocalProcessing, OosMethod::SeqProcrustes,
                                   OosMethod::SeqGramian, OosMethod::CentralizedGenie};
    Detector detector = Detector::CentralizedZf;
    int payload_symbols_per_block = 150;
    int threads = 0; // 0 = hardware concurrency
    std::string csv_name = "results.csv";
    std::string json_name = "results.json";

    void validate() const;
};

// Named presets: "reference" and "many_oos" (K_I = 5 > N = 4).
ExperimentSpec canned_spec(std::string_view name);

std::string spec_to_json(const ExperimentSpec &spec);
ExperimentSpec spec_from_json(std::string_view text);
ExperimentSpec load_spec(const std::filesystem::path &path);

// "key=value"; key is a dotted path into the JSON form ("config.num_oos") or
// a bare config key / alias (num_oos, K_I, tau_p, ...). The value is parsed
// as JSON, falling back to a plain string.
void apply_override(ExperimentSpec &spec, std::string_view assignment);

struct ResultRow
{
    OosMethod method = OosMethod::NoSuppression;
    double snr_db = 0.0;
    double ber = 0.0;
    std::uint64_t bit_count = 0;
    std::uint64_t bit_errors = 0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::uint64_t fronthaul_per_link_real_symbols = 0;
    double wall_time_s = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t failed_blocks = 0;
};

struct RunDiagnostics
{
    std::uint64_t numerical_failures = 0;
    std::uint64_t degenerate_procrustes = 0;
    std::vector<std::string> failure_messages; // first few only
};

struct ExperimentResult
{
    std::vector<ResultRow> rows;          // method-major, then SNR
    std::vector<LoadReport> method_loads; // aligned with spec.methods
    RunDiagnostics diagnostics;
};

// Deterministic given the spec: blocks are drawn from per-block streams and
// shared by every method and SNR point, and results are reduced in block
// order regardless of thread count.
ExperimentResult run_monte_carlo(const ExperimentSpec &spec);

const ResultRow &find_row(const ExperimentResult &result, OosMethod method, double snr_db);

std::string results_to_csv(const std::vector<ResultRow> &rows);
std::vector<ResultRow> parse_results_csv(std::string_view text);
std::string results_to_json(const ExperimentResult &result, const ExperimentSpec &spec);

// Writes <out_dir>/<csv_name> and <out_dir>/<json_name>.
void emit_report(const ExperimentResult &result, const ExperimentSpec &spec, const std::filesystem::path &out_dir);

// Geometry of Monte Carlo block `block`, as drawn by run_monte_carlo.
Geometry block_geometry(const SystemConfig &cfg, std::uint64_t block);

std::string geometry_to_json(const Geometry &geo);

struct FronthaulTableRow
{
    FronthaulItem item = FronthaulItem::ProcrustesEstimation;
    std::uint64_t analytic_per_link = 0;
    std::uint64_t measured_per_link = 0;
    std::uint64_t links = 0;
    bool matches = false;
};

// Analytic per-link loads next to the counts measured by running one block
// through every chain pass.
std::vector<FronthaulTableRow> fronthaul_table(const SystemConfig &cfg, int payload_symbols = 4);
std::string fronthaul_table_csv(const std::vector<FronthaulTableRow> &rows);
std::string fronthaul_table_json(const std::vector<FronthaulTableRow> &rows, const SystemConfig &cfg);

} // namespace oosi

#endif
