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

// Command-line front end. Talks to the simulator only through the C API.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oosi/oosi.h"

namespace
{

struct ExperimentDeleter
{
    void operator()(oosi_experiment *p) const { oosi_experiment_destroy(p); }
};
struct ResultsDeleter
{
    void operator()(oosi_results *p) const { oosi_results_destroy(p); }
};
struct StringDeleter
{
    void operator()(char *p) const { oosi_string_free(p); }
};

using ExperimentPtr = std::unique_ptr<oosi_experiment, ExperimentDeleter>;
using ResultsPtr = std::unique_ptr<oosi_results, ResultsDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

struct CliError
{
    oosi_status status;
};

void check(oosi_status status, const char *context)
{
    if (status != OOSI_OK)
    {
        std::cerr << "oosi: " << context << ": " << oosi_status_string(status) << ": " << oosi_last_error() << '\n';
        throw CliError{status};
    }
}

int exit_code(oosi_status status)
{
    switch (status)
    {
    case OOSI_ERR_INPUT: return 2;
    case OOSI_ERR_IO: return 3;
    case OOSI_ERR_NUMERICAL:
    case OOSI_ERR_DEGENERATE: return 4;
    default: return 1;
    }
}

ExperimentPtr make_experiment(const std::string &config, const std::vector<std::string> &overrides)
{
    oosi_experiment *raw = nullptr;
    if (config.empty())
        check(oosi_experiment_create_default(&raw), "default experiment");
    else
        check(oosi_experiment_load_json(config.c_str(), &raw), config.c_str());
    ExperimentPtr exp(raw);
    for (const auto &o : overrides)
        check(oosi_experiment_override(exp.get(), o.c_str()), o.c_str());
    return exp;
}

void write_or_print(const char *text, const std::string &path)
{
    if (path.empty())
    {
        std::cout << text;
        if (*text != '\0' && text[std::char_traits<char>::length(text) - 1] != '\n')
            std::cout << '\n';
        return;
    }
    std::ofstream out(path);
    if (!out || !(out << text))
    {
        std::cerr << "oosi: cannot write " << path << '\n';
        throw CliError{OOSI_ERR_IO};
    }
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Out-of-system interference suppression in cell-free massive MIMO"};
    app.require_subcommand(1);

    std::string config;
    std::vector<std::string> overrides;
    auto add_common = [&](CLI::App *sub) {
        sub->add_option("-c,--config", config, "Experiment JSON (built-in defaults if omitted)")
            ->check(CLI::ExistingFile);
        sub->add_option("-O,--override", overrides, "Override key=value, repeatable (e.g. K_I=5, trials=20)");
    };

    // run
    auto *run = app.add_subcommand("run", "Monte Carlo BER sweep");
    add_common(run);
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    bool strict = false;
    bool quiet = false;
    run->add_option("-o,--out", out_dir, "Output directory for the CSV and JSON reports");
    run->add_option("--seed", seed, "Master seed");
    run->add_option("--trials", trials, "Number of coherence blocks")->check(CLI::PositiveNumber);
    run->add_flag("--strict", strict, "Exit nonzero if any block hit a numerical failure");
    run->add_flag("-q,--quiet", quiet, "Do not print the results table");

    // report
    auto *report = app.add_subcommand("report", "Per-link fronthaul load, analytic vs measured");
    add_common(report);
    std::string format = "csv";
    std::string report_out;
    report->add_option("-f,--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    report->add_option("-o,--out", report_out, "Write to file instead of stdout");

    // geometry
    auto *geometry = app.add_subcommand("geometry", "Positions and gains of one coherence block");
    add_common(geometry);
    std::uint64_t block = 0;
    std::string geometry_out;
    geometry->add_option("-b,--block", block, "Block index");
    geometry->add_option("-o,--out", geometry_out, "Write to file instead of stdout");

    // config
    auto *dump = app.add_subcommand("config", "Print the resolved experiment JSON");
    add_common(dump);

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (seed)
            overrides.push_back("seed=" + std::to_string(*seed));
        if (trials)
            overrides.push_back("trials=" + std::to_string(*trials));
        ExperimentPtr exp = make_experiment(config, overrides);

        if (*run)
        {
            oosi_results *raw = nullptr;
            check(oosi_run(exp.get(), &raw), "run");
            ResultsPtr res(raw);
            check(oosi_results_emit(res.get(), out_dir.c_str()), out_dir.c_str());

            std::uint64_t failures = 0, degenerate = 0;
            check(oosi_results_failures(res.get(), &failures, &degenerate), "diagnostics");
            if (!quiet)
            {
                size_t n = 0;
                check(oosi_results_row_count(res.get(), &n), "rows");
                std::printf("%-20s %7s %12s %12s %12s %10s\n", "method", "snr_db", "ber", "ci_low", "ci_high",
                            "fh/link");
                for (size_t i = 0; i < n; ++i)
                {
                    oosi_row row{};
                    check(oosi_results_get_row(res.get(), i, &row), "row");
                    std::printf("%-20s %7.1f %12.4e %12.4e %12.4e %10llu\n", row.method, row.snr_db, row.ber,
                                row.ci_low, row.ci_high,
                                static_cast<unsigned long long>(row.fronthaul_per_link_real_symbols));
                }
            }
            if (failures > 0 || degenerate > 0)
                std::cerr << "oosi: " << failures << " numerical failure(s), " << degenerate
                          << " degenerate Procrustes step(s)\n";
            if (strict && failures > 0)
                return 4;
        }
        else if (*report)
        {
            char *raw = nullptr;
            if (format == "json")
                check(oosi_fronthaul_table_json(exp.get(), &raw), "report");
            else
                check(oosi_fronthaul_table_csv(exp.get(), &raw), "report");
            StringPtr text(raw);
            write_or_print(text.get(), report_out);
        }
        else if (*geometry)
        {
            char *raw = nullptr;
            check(oosi_geometry_json(exp.get(), block, &raw), "geometry");
            StringPtr text(raw);
            write_or_print(text.get(), geometry_out);
        }
        else if (*dump)
        {
            char *raw = nullptr;
            check(oosi_experiment_to_json(exp.get(), &raw), "config");
            StringPtr text(raw);
            write_or_print(text.get(), "");
        }
    }
    catch (const CliError &e)
    {
        return exit_code(e.status);
    }
    return 0;
}
