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

#include "oosi/experiments.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "oosi/downlink.hpp"
#include "oosi/errors.hpp"
#include "oosi/oos_estimation.hpp"
#include "oosi/pilot_phase.hpp"
#include "oosi/uplink.hpp"

namespace oosi
{

using nlohmann::json;

namespace
{

constexpr std::array<OosMethod, 6> all_methods{OosMethod::NoSuppression,    OosMethod::LocalProcessing,
                                               OosMethod::SeqProcrustes,    OosMethod::SeqGramian,
                                               OosMethod::CentralizedGenie, OosMethod::CentralizedOracle};
constexpr std::array<Detector, 3> all_detectors{Detector::SequentialLs, Detector::DistributedZf,
                                                Detector::CentralizedZf};

// Stream purposes for make_stream.
constexpr std::uint64_t stream_geometry = 0;
constexpr std::uint64_t stream_channels = 1;
constexpr std::uint64_t stream_payload = 2;

constexpr std::size_t max_failure_messages = 16;

} // namespace

std::string_view to_string(OosMethod m)
{
    switch (m)
    {
    case OosMethod::NoSuppression: return "no_suppression";
    case OosMethod::LocalProcessing: return "local_processing";
    case OosMethod::SeqProcrustes: return "seq_procrustes";
    case OosMethod::SeqGramian: return "seq_gramian";
    case OosMethod::CentralizedGenie: return "centralized_genie";
    case OosMethod::CentralizedOracle: return "centralized_oracle";
    }
    return "unknown";
}

std::string_view to_string(Detector d)
{
    switch (d)
    {
    case Detector::SequentialLs: return "sequential_ls";
    case Detector::DistributedZf: return "distributed_zf";
    case Detector::CentralizedZf: return "centralized_zf";
    }
    return "unknown";
}

OosMethod parse_oos_method(std::string_view name)
{
    for (OosMethod m : all_methods)
        if (to_string(m) == name)
            return m;
    throw InputError("unknown method: " + std::string(name));
}

Detector parse_detector(std::string_view name)
{
    for (Detector d : all_detectors)
        if (to_string(d) == name)
            return d;
    throw InputError("unknown detector: " + std::string(name));
}

void ExperimentSpec::validate() const
{
    cfg.validate();
    if (snr_grid_db.empty())
        throw InputError("ExperimentSpec: snr_grid_db must not be empty");
    for (double s : snr_grid_db)
        if (!std::isfinite(s))
            throw InputError("ExperimentSpec: SNR values must be finite");
    if (methods.empty())
        throw InputError("ExperimentSpec: methods must not be empty");
    std::set<OosMethod> seen(methods.begin(), methods.end());
    if (seen.size() != methods.size())
        throw InputError("ExperimentSpec: methods must not repeat");
    if (payload_symbols_per_block < 1 || payload_symbols_per_block > cfg.coherence_length - cfg.pilot_length)
        throw InputError("ExperimentSpec: payload_symbols_per_block must lie in [1, tau_c - tau_p]");
    if (threads < 0)
        throw InputError("ExperimentSpec: threads must be nonnegative");
    if (csv_name.empty() || json_name.empty())
        throw InputError("ExperimentSpec: output names must not be empty");
}

ExperimentSpec canned_spec(std::string_view name)
{
    ExperimentSpec spec;
    if (name == "reference")
        return spec;
    if (name == "many_oos")
    {
        spec.cfg.num_oos = 5;
        return spec;
    }
    throw InputError("unknown canned spec: " + std::string(name));
}

// ---------------------------------------------------------------- JSON --

namespace
{

void check_keys(const json &j, std::initializer_list<std::string_view> allowed, std::string_view where)
{
    if (!j.is_object())
        throw InputError(std::string(where) + " must be a JSON object");
    for (const auto &item : j.items())
        if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end())
            throw InputError("unknown key '" + item.key() + "' in " + std::string(where));
}

json config_to_json(const SystemConfig &cfg)
{
    json order = json::array();
    for (int ap : cfg.ap_order)
        order.push_back(ap + 1);
    return json{{"num_aps", cfg.num_aps},
                {"antennas_per_ap", cfg.antennas_per_ap},
                {"num_ues", cfg.num_ues},
                {"num_oos", cfg.num_oos},
                {"pilot_length", cfg.pilot_length},
                {"coherence_length", cfg.coherence_length},
                {"rho_db", linear_to_db(cfg.rho)},
                {"oos_snr_db", linear_to_db(cfg.oos_snr)},
                {"alpha", cfg.alpha},
                {"ap_order", order},
                {"seed", cfg.seed},
                {"area_side_m", cfg.area_side_m},
                {"ue_margin_m", cfg.ue_margin_m},
                {"ap_height_m", cfg.ap_height_m},
                {"trials", cfg.trials},
                {"gain_reference_db", cfg.gain_reference_db ? json(*cfg.gain_reference_db) : json(nullptr)}};
}

SystemConfig config_from_json(const json &j)
{
    check_keys(j,
               {"num_aps", "antennas_per_ap", "num_ues", "num_oos", "pilot_length", "coherence_length", "rho_db",
                "oos_snr_db", "alpha", "ap_order", "seed", "area_side_m", "ue_margin_m", "ap_height_m", "trials",
                "gain_reference_db"},
               "config");
    SystemConfig cfg;
    cfg.num_aps = j.value("num_aps", cfg.num_aps);
    cfg.antennas_per_ap = j.value("antennas_per_ap", cfg.antennas_per_ap);
    cfg.num_ues = j.value("num_ues", cfg.num_ues);
    cfg.num_oos = j.value("num_oos", cfg.num_oos);
    cfg.pilot_length = j.value("pilot_length", cfg.pilot_length);
    cfg.coherence_length = j.value("coherence_length", cfg.coherence_length);
    if (j.contains("rho_db"))
        cfg.rho = db_to_linear(j.at("rho_db").get<double>());
    if (j.contains("oos_snr_db"))
        cfg.oos_snr = db_to_linear(j.at("oos_snr_db").get<double>());
    cfg.alpha = j.value("alpha", cfg.alpha);
    if (j.contains("ap_order"))
    {
        cfg.ap_order.clear();
        for (const auto &v : j.at("ap_order"))
            cfg.ap_order.push_back(v.get<int>() - 1);
    }
    cfg.seed = j.value("seed", cfg.seed);
    cfg.area_side_m = j.value("area_side_m", cfg.area_side_m);
    cfg.ue_margin_m = j.value("ue_margin_m", cfg.ue_margin_m);
    cfg.ap_height_m = j.value("ap_height_m", cfg.ap_height_m);
    cfg.trials = j.value("trials", cfg.trials);
    if (j.contains("gain_reference_db") && !j.at("gain_reference_db").is_null())
        cfg.gain_reference_db = j.at("gain_reference_db").get<double>();
    return cfg;
}

json spec_to_json_value(const ExperimentSpec &spec)
{
    json methods = json::array();
    for (OosMethod m : spec.methods)
        methods.push_back(std::string(to_string(m)));
    return json{{"config", config_to_json(spec.cfg)},
                {"snr_grid_db", spec.snr_grid_db},
                {"methods", methods},
                {"detector", std::string(to_string(spec.detector))},
                {"payload_symbols_per_block", spec.payload_symbols_per_block},
                {"threads", spec.threads},
                {"outputs", {{"csv", spec.csv_name}, {"json", spec.json_name}}}};
}

ExperimentSpec spec_from_json_value(const json &j)
{
    check_keys(j, {"config", "snr_grid_db", "methods", "detector", "payload_symbols_per_block", "threads", "outputs"},
               "experiment spec");
    ExperimentSpec spec;
    if (j.contains("config"))
        spec.cfg = config_from_json(j.at("config"));
    if (j.contains("snr_grid_db"))
        spec.snr_grid_db = j.at("snr_grid_db").get<std::vector<double>>();
    if (j.contains("methods"))
    {
        spec.methods.clear();
        for (const auto &m : j.at("methods"))
            spec.methods.push_back(parse_oos_method(m.get<std::string>()));
    }
    if (j.contains("detector"))
        spec.detector = parse_detector(j.at("detector").get<std::string>());
    spec.payload_symbols_per_block = j.value("payload_symbols_per_block", spec.payload_symbols_per_block);
    spec.threads = j.value("threads", spec.threads);
    if (j.contains("outputs"))
    {
        const json &o = j.at("outputs");
        check_keys(o, {"csv", "json"}, "outputs");
        spec.csv_name = o.value("csv", spec.csv_name);
        spec.json_name = o.value("json", spec.json_name);
    }
    spec.validate();
    return spec;
}

template <class F>
auto translate_json_errors(F &&f)
{
    try
    {
        return f();
    }
    catch (const json::exception &e)
    {
        throw InputError(std::string("experiment spec: ") + e.what());
    }
}

} // namespace

std::string spec_to_json(const ExperimentSpec &spec)
{
    return spec_to_json_value(spec).dump(2);
}

ExperimentSpec spec_from_json(std::string_view text)
{
    return translate_json_errors([&] { return spec_from_json_value(json::parse(text)); });
}

ExperimentSpec load_spec(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open spec file: " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return spec_from_json(buffer.str());
}

void apply_override(ExperimentSpec &spec, std::string_view assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0)
        throw InputError("override must look like key=value: " + std::string(assignment));
    std::string key(assignment.substr(0, eq));
    const std::string raw(assignment.substr(eq + 1));

    static const std::vector<std::pair<std::string, std::string>> aliases{
        {"L", "num_aps"},          {"N", "antennas_per_ap"}, {"K", "num_ues"},
        {"K_I", "num_oos"},        {"tau_p", "pilot_length"}, {"tau_c", "coherence_length"},
        {"oos_snr", "oos_snr_db"}, {"rho", "rho_db"}};
    for (const auto &[alias, name] : aliases)
        if (key == alias)
            key = name;

    json value;
    try
    {
        value = json::parse(raw);
    }
    catch (const json::exception &)
    {
        value = raw;
    }

    translate_json_errors([&] {
        json j = spec_to_json_value(spec);
        if (key.find('.') == std::string::npos && !j.contains(key) && j.at("config").contains(key))
            key = "config." + key;
        json *node = &j;
        std::size_t start = 0;
        while (true)
        {
            const auto dot = key.find('.', start);
            const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
            if (!node->is_object() || !node->contains(part))
                throw InputError("override: unknown key " + key);
            node = &(*node)[part];
            if (dot == std::string::npos)
                break;
            start = dot + 1;
        }
        *node = value;
        spec = spec_from_json_value(j);
        return 0;
    });
}

// ---------------------------------------------------------- Monte Carlo --

namespace
{

struct CellOutcome
{
    std::uint64_t bit_errors = 0;
    std::uint64_t bit_count = 0;
    std::uint64_t failed = 0;
    std::uint64_t fronthaul = 0;
    bool fronthaul_known = false;
    double seconds = 0.0;
};

struct BlockOutcome
{
    std::vector<CellOutcome> cells; // [method][snr] flattened
    std::vector<LoadReport> loads;  // per method
    std::uint64_t degenerate = 0;
    std::vector<std::string> failures;
};

std::vector<CMatrix> empty_oos(const SystemConfig &cfg)
{
    return std::vector<CMatrix>(static_cast<std::size_t>(cfg.num_aps), CMatrix(cfg.antennas_per_ap, 0));
}

AugmentedChannel build_augmented(OosMethod method, const SystemConfig &cfg, const BlockRealization &block,
                                 const std::vector<CMatrix> &h_hat, const ProjectedResidual &residuals,
                                 Chain &chain)
{
    const double amp = std::sqrt(cfg.rho);
    switch (method)
    {
    case OosMethod::NoSuppression:
        return augment(h_hat, empty_oos(cfg), amp);
    case OosMethod::LocalProcessing:
    {
        if (cfg.num_oos == 0)
            return augment(h_hat, empty_oos(cfg), amp);
        std::vector<CMatrix> g;
        for (const auto &z : residuals.zpsi)
            g.push_back(local_svd_estimate(z, cfg.num_oos).g);
        return augment_block_diagonal(h_hat, g, amp);
    }
    case OosMethod::SeqProcrustes:
        return augment(h_hat, estimate_oos_channels(residuals, run_sequential_procrustes(residuals, cfg, chain)), amp);
    case OosMethod::SeqGramian:
        return augment(h_hat, estimate_oos_channels(residuals, run_gramian_method(residuals, cfg, chain)), amp);
    case OosMethod::CentralizedOracle:
        if (cfg.num_oos == 0)
            return augment(h_hat, empty_oos(cfg), amp);
        return augment(h_hat, estimate_oos_channels(residuals, centralized_oos_oracle(residuals, cfg.num_oos).sbar),
                       amp);
    case OosMethod::CentralizedGenie:
        return augment(block.H, block.G, amp);
    }
    throw InputError("unknown method");
}

CMatrix run_detector(Detector detector, const UplinkSymbolBatch &batch, const AugmentedChannel &A,
                     const SystemConfig &cfg, Chain &chain)
{
    switch (detector)
    {
    case Detector::CentralizedZf:
        return detect_centralized(batch, A).estimates;
    case Detector::DistributedZf:
    {
        const CMatrix gamma = accumulate_channel_gramian(A, chain);
        return detect_distributed_zf(batch, A, gamma, chain);
    }
    case Detector::SequentialLs:
        return detect_sequential_ls(batch, A, cfg, chain).estimates;
    }
    throw InputError("unknown detector");
}

BlockOutcome process_block(const ExperimentSpec &spec, const PilotBook &pilots, std::uint64_t b)
{
    const SystemConfig &base = spec.cfg;
    const std::size_t num_snr = spec.snr_grid_db.size();
    BlockOutcome out;
    out.cells.resize(spec.methods.size() * num_snr);
    out.loads.resize(spec.methods.size());

    const Geometry geo = block_geometry(base, b);
    Rng ch_rng = make_stream(base.seed, b, stream_channels);
    const BlockRealization block = draw_block(base, geo, ch_rng);

    // Payload symbols and noise are shared by every SNR point and method.
    Rng pl_rng = make_stream(base.seed, b, stream_payload);
    const Index T = spec.payload_symbols_per_block;
    CMatrix x = random_qpsk(base.num_ues, T, pl_rng);
    CMatrix s = complex_gaussian(base.num_oos, T, base.oos_snr, pl_rng);
    std::vector<CMatrix> noise;
    for (int l = 0; l < base.num_aps; ++l)
        noise.push_back(complex_gaussian(base.antennas_per_ap, T, 1.0, pl_rng));

    for (std::size_t si = 0; si < num_snr; ++si)
    {
        SystemConfig cfg = base;
        cfg.rho = db_to_linear(spec.snr_grid_db[si]);
        const PilotObservation obs = simulate_pilot_rx(block, pilots, cfg);
        const std::vector<CMatrix> h_hat = ls_channel_estimate(obs, pilots, cfg);
        const ProjectedResidual residuals = compute_projected_residual(obs, h_hat, pilots, cfg);
        const UplinkSymbolBatch batch = receive_uplink(block, x, s, noise, cfg.rho);

        for (std::size_t mi = 0; mi < spec.methods.size(); ++mi)
        {
            const OosMethod method = spec.methods[mi];
            CellOutcome &cell = out.cells[mi * num_snr + si];
            const auto start = std::chrono::steady_clock::now();
            Chain chain(cfg.chain_order());
            try
            {
                const AugmentedChannel A = build_augmented(method, cfg, block, h_hat, residuals, chain);
                const CMatrix estimates = run_detector(spec.detector, batch, A, cfg, chain);
                const BerStats ber = evaluate_ber(estimates, batch.x);
                cell.bit_errors += ber.bit_errors;
                cell.bit_count += ber.bit_count;
                cell.fronthaul = chain.load().per_link_per_pass(Phase::OosEstimation);
                cell.fronthaul_known = true;
            }
            catch (const NumericalError &e)
            {
                ++cell.failed;
                if (out.failures.size() < max_failure_messages)
                    out.failures.push_back("block " + std::to_string(b) + ", " + std::string(to_string(method)) +
                                           " @ " + std::to_string(spec.snr_grid_db[si]) + " dB: " + e.what());
            }
            cell.seconds +=
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            out.degenerate += chain.diagnostics().degenerate_procrustes;
            out.loads[mi].merge(chain.load());
        }
    }
    return out;
}

} // namespace

ExperimentResult run_monte_carlo(const ExperimentSpec &spec)
{
    spec.validate();
    const PilotBook pilots = build_pilot_book(spec.cfg);
    const auto num_blocks = static_cast<std::size_t>(spec.cfg.trials);

    std::vector<BlockOutcome> outcomes(num_blocks);
    unsigned workers = spec.threads > 0 ? static_cast<unsigned>(spec.threads) : std::thread::hardware_concurrency();
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(num_blocks)));

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (std::size_t b = next++; b < num_blocks; b = next++)
        {
            try
            {
                outcomes[b] = process_block(spec, pilots, b);
            }
            catch (...)
            {
                std::lock_guard lock(error_mutex);
                if (!first_error)
                    first_error = std::current_exception();
                next = num_blocks;
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        for (unsigned i = 1; i < workers; ++i)
            pool.emplace_back(worker);
        worker();
    }
    if (first_error)
        std::rethrow_exception(first_error);

    // Reduce in block order.
    const std::size_t num_snr = spec.snr_grid_db.size();
    std::vector<CellOutcome> totals(spec.methods.size() * num_snr);
    ExperimentResult result;
    result.method_loads.resize(spec.methods.size());
    for (const auto &o : outcomes)
    {
        for (std::size_t c = 0; c < totals.size(); ++c)
        {
            CellOutcome &t = totals[c];
            const CellOutcome &src = o.cells[c];
            t.bit_errors += src.bit_errors;
            t.bit_count += src.bit_count;
            t.failed += src.failed;
            t.seconds += src.seconds;
            if (src.fronthaul_known)
            {
                if (t.fronthaul_known && t.fronthaul != src.fronthaul)
                    throw NumericalError("run_monte_carlo: per-link fronthaul load varies across blocks");
                t.fronthaul = src.fronthaul;
                t.fronthaul_known = true;
            }
        }
        for (std::size_t m = 0; m < spec.methods.size(); ++m)
            result.method_loads[m].merge(o.loads[m]);
        result.diagnostics.degenerate_procrustes += o.degenerate;
        for (const auto &msg : o.failures)
            if (result.diagnostics.failure_messages.size() < max_failure_messages)
                result.diagnostics.failure_messages.push_back(msg);
    }

    for (std::size_t mi = 0; mi < spec.methods.size(); ++mi)
        for (std::size_t si = 0; si < num_snr; ++si)
        {
            const CellOutcome &t = totals[mi * num_snr + si];
            ResultRow row;
            row.method = spec.methods[mi];
            row.snr_db = spec.snr_grid_db[si];
            row.bit_count = t.bit_count;
            row.bit_errors = t.bit_errors;
            if (t.bit_count > 0)
            {
                row.ber = static_cast<double>(t.bit_errors) / static_cast<double>(t.bit_count);
                std::tie(row.ci_low, row.ci_high) = wilson_interval(t.bit_errors, t.bit_count);
            }
            else
            {
                row.ber = std::numeric_limits<double>::quiet_NaN();
                row.ci_low = 0.0;
                row.ci_high = 1.0;
            }
            row.fronthaul_per_link_real_symbols = t.fronthaul;
            row.wall_time_s = t.seconds;
            row.seed = spec.cfg.seed;
            row.failed_blocks = t.failed;
            result.diagnostics.numerical_failures += t.failed;
            result.rows.push_back(row);
        }
    return result;
}

const ResultRow &find_row(const ExperimentResult &result, OosMethod method, double snr_db)
{
    for (const auto &row : result.rows)
        if (row.method == method && std::abs(row.snr_db - snr_db) < 1e-9)
            return row;
    throw InputError("find_row: no row for " + std::string(to_string(method)) + " at " + std::to_string(snr_db) +
                     " dB");
}

// -------------------------------------------------------------- reports --

namespace
{

std::string format_real(double v)
{
    if (std::isnan(v))
        return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

constexpr std::string_view csv_header =
    "method,snr_db,ber,bit_count,ci_low,ci_high,fronthaul_per_link_real_symbols,seed";

std::vector<std::string> split(std::string_view line, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true)
    {
        const auto pos = line.find(sep, start);
        out.emplace_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos)
            return out;
        start = pos + 1;
    }
}

double parse_real(const std::string &s)
{
    if (s == "nan")
        return std::numeric_limits<double>::quiet_NaN();
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size())
        throw InputError("parse_results_csv: bad number " + s);
    return v;
}

std::uint64_t parse_count(const std::string &s)
{
    std::size_t used = 0;
    const unsigned long long v = std::stoull(s, &used);
    if (used != s.size())
        throw InputError("parse_results_csv: bad integer " + s);
    return v;
}

} // namespace

std::string results_to_csv(const std::vector<ResultRow> &rows)
{
    if (rows.empty())
        throw InputError("results_to_csv: no rows");
    std::ostringstream os;
    os << csv_header << '\n';
    for (const auto &r : rows)
        os << to_string(r.method) << ',' << format_real(r.snr_db) << ',' << format_real(r.ber) << ','
           << r.bit_count << ',' << format_real(r.ci_low) << ',' << format_real(r.ci_high) << ','
           << r.fronthaul_per_link_real_symbols << ',' << r.seed << '\n';
    return os.str();
}

std::vector<ResultRow> parse_results_csv(std::string_view text)
{
    std::vector<ResultRow> rows;
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || line != csv_header)
        throw InputError("parse_results_csv: missing or unexpected header");
    try
    {
        while (std::getline(in, line))
        {
            if (line.empty())
                continue;
            const auto f = split(line, ',');
            if (f.size() != 8)
                throw InputError("parse_results_csv: expected 8 fields in: " + line);
            ResultRow r;
            r.method = parse_oos_method(f[0]);
            r.snr_db = parse_real(f[1]);
            r.ber = parse_real(f[2]);
            r.bit_count = parse_count(f[3]);
            r.ci_low = parse_real(f[4]);
            r.ci_high = parse_real(f[5]);
            r.fronthaul_per_link_real_symbols = parse_count(f[6]);
            r.seed = parse_count(f[7]);
            rows.push_back(r);
        }
    }
    catch (const std::logic_error &e) // std::stod / std::stoull
    {
        if (dynamic_cast<const InputError *>(&e) != nullptr)
            throw;
        throw InputError(std::string("parse_results_csv: ") + e.what());
    }
    return rows;
}

std::string results_to_json(const ExperimentResult &result, const ExperimentSpec &spec)
{
    if (result.rows.empty())
        throw InputError("results_to_json: no rows");
    json rows = json::array();
    for (const auto &r : result.rows)
        rows.push_back({{"method", std::string(to_string(r.method))},
                        {"snr_db", r.snr_db},
                        {"ber", std::isnan(r.ber) ? json(nullptr) : json(r.ber)},
                        {"bit_count", r.bit_count},
                        {"bit_errors", r.bit_errors},
                        {"ci_low", r.ci_low},
                        {"ci_high", r.ci_high},
                        {"fronthaul_per_link_real_symbols", r.fronthaul_per_link_real_symbols},
                        {"wall_time_s", r.wall_time_s},
                        {"seed", r.seed},
                        {"failed_blocks", r.failed_blocks}});
    json loads = json::object();
    for (std::size_t m = 0; m < spec.methods.size() && m < result.method_loads.size(); ++m)
        loads[std::string(to_string(spec.methods[m]))] = json::parse(result.method_loads[m].to_json());
    return json{{"spec", spec_to_json_value(spec)},
                {"rows", rows},
                {"fronthaul_load", loads},
                {"diagnostics",
                 {{"numerical_failures", result.diagnostics.numerical_failures},
                  {"degenerate_procrustes", result.diagnostics.degenerate_procrustes},
                  {"failure_messages", result.diagnostics.failure_messages}}}}
        .dump(2);
}

namespace
{

void write_file(const std::filesystem::path &path, const std::string &content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open for writing: " + path.string());
    out << content;
    out.close();
    if (!out)
        throw IoError("write failed: " + path.string());
}

} // namespace

void emit_report(const ExperimentResult &result, const ExperimentSpec &spec, const std::filesystem::path &out_dir)
{
    const std::string csv = results_to_csv(result.rows);
    const std::string js = results_to_json(result, spec);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec)
        throw IoError("cannot create output directory " + out_dir.string() + ": " + ec.message());
    write_file(out_dir / spec.csv_name, csv);
    write_file(out_dir / spec.json_name, js);
}

Geometry block_geometry(const SystemConfig &cfg, std::uint64_t block)
{
    Rng rng = make_stream(cfg.seed, block, stream_geometry);
    return build_geometry(cfg, rng);
}

std::string geometry_to_json(const Geometry &geo)
{
    auto points = [](const std::vector<Point3> &pts) {
        json arr = json::array();
        for (const auto &p : pts)
            arr.push_back({p.x, p.y, p.z});
        return arr;
    };
    auto gains_db = [](const RMatrix &beta) {
        json rows = json::array();
        for (Index l = 0; l < beta.rows(); ++l)
        {
            json row = json::array();
            for (Index k = 0; k < beta.cols(); ++k)
                row.push_back(linear_to_db(beta(l, k)));
            rows.push_back(row);
        }
        return rows;
    };
    return json{{"ap_positions_m", points(geo.aps)},
                {"ue_positions_m", points(geo.ues)},
                {"oos_positions_m", points(geo.oos)},
                {"beta_ue_db", gains_db(geo.beta_ue)},
                {"beta_oos_db", gains_db(geo.beta_oos)},
                {"gain_reference_db", linear_to_db(geo.reference_gain)}}
        .dump(2);
}

// ------------------------------------------------------ fronthaul table --

std::vector<FronthaulTableRow> fronthaul_table(const SystemConfig &cfg, int payload_symbols)
{
    cfg.validate();
    if (payload_symbols < 1)
        throw InputError("fronthaul_table: payload_symbols must be positive");
    const PilotBook pilots = build_pilot_book(cfg);
    const Geometry geo = block_geometry(cfg, 0);
    Rng ch_rng = make_stream(cfg.seed, 0, stream_channels);
    const BlockRealization block = draw_block(cfg, geo, ch_rng);
    Rng pl_rng = make_stream(cfg.seed, 0, stream_payload);
    const UplinkSymbolBatch batch = simulate_uplink_rx(block, cfg, payload_symbols, pl_rng);

    const PilotObservation obs = simulate_pilot_rx(block, pilots, cfg);
    const auto h_hat = ls_channel_estimate(obs, pilots, cfg);
    const ProjectedResidual residuals = compute_projected_residual(obs, h_hat, pilots, cfg);

    Chain procrustes(cfg.chain_order());
    run_sequential_procrustes(residuals, cfg, procrustes);

    Chain gramian(cfg.chain_order());
    const CMatrix sbar = run_gramian_method(residuals, cfg, gramian);
    const AugmentedChannel A = augment(h_hat, estimate_oos_channels(residuals, sbar), std::sqrt(cfg.rho));

    Chain payload(cfg.chain_order());
    const CMatrix gamma = accumulate_channel_gramian(A, payload);
    detect_distributed_zf(batch, A, gamma, payload);
    detect_sequential_ls(batch, A, cfg, payload);
    compute_partial_precoded(CMatrix::Ones(cfg.num_ues, payload_symbols), gamma, payload);

    std::vector<FronthaulTableRow> rows;
    for (FronthaulItem item : all_fronthaul_items)
    {
        const Chain *source = &payload;
        if (item == FronthaulItem::ProcrustesEstimation)
            source = &procrustes;
        else if (item == FronthaulItem::GramianEstimation || item == FronthaulItem::SbarBroadcast)
            source = &gramian;
        FronthaulTableRow row;
        row.item = item;
        row.analytic_per_link = analytic_per_link_load(item, cfg);
        row.measured_per_link = source->load().per_link_per_pass(phase_of(item));
        row.links = static_cast<std::uint64_t>(cfg.num_aps);
        row.matches = row.analytic_per_link == row.measured_per_link;
        rows.push_back(row);
    }
    return rows;
}

std::string fronthaul_table_csv(const std::vector<FronthaulTableRow> &rows)
{
    std::ostringstream os;
    os << "item,phase,analytic_per_link_real_symbols,measured_per_link_real_symbols,links,matches\n";
    for (const auto &r : rows)
        os << to_string(r.item) << ',' << to_string(phase_of(r.item)) << ',' << r.analytic_per_link << ','
           << r.measured_per_link << ',' << r.links << ',' << (r.matches ? "true" : "false") << '\n';
    return os.str();
}

std::string fronthaul_table_json(const std::vector<FronthaulTableRow> &rows, const SystemConfig &cfg)
{
    json items = json::array();
    for (const auto &r : rows)
        items.push_back({{"item", std::string(to_string(r.item))},
                         {"phase", std::string(to_string(phase_of(r.item)))},
                         {"analytic_per_link_real_symbols", r.analytic_per_link},
                         {"measured_per_link_real_symbols", r.measured_per_link},
                         {"links", r.links},
                         {"matches", r.matches}});
    return json{{"config", config_to_json(cfg)}, {"items", items}}.dump(2);
}

} // namespace oosi
