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

#include "oosi/oosi.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "oosi/errors.hpp"
#include "oosi/experiments.hpp"

struct oosi_experiment
{
    oosi::ExperimentSpec spec;
};

struct oosi_results
{
    oosi::ExperimentSpec spec;
    oosi::ExperimentResult result;
};

namespace
{

thread_local std::string last_error;

oosi_status fail(oosi_status status, const char *message)
{
    last_error = message;
    return status;
}

template <class F>
oosi_status guarded(F &&f)
{
    try
    {
        f();
        last_error.clear();
        return OOSI_OK;
    }
    catch (const oosi::InputError &e)
    {
        return fail(OOSI_ERR_INPUT, e.what());
    }
    catch (const oosi::DegeneracyError &e)
    {
        return fail(OOSI_ERR_DEGENERATE, e.what());
    }
    catch (const oosi::NumericalError &e)
    {
        return fail(OOSI_ERR_NUMERICAL, e.what());
    }
    catch (const oosi::IoError &e)
    {
        return fail(OOSI_ERR_IO, e.what());
    }
    catch (const std::bad_alloc &)
    {
        return fail(OOSI_ERR_INTERNAL, "out of memory");
    }
    catch (const std::exception &e)
    {
        return fail(OOSI_ERR_INTERNAL, e.what());
    }
    catch (...)
    {
        return fail(OOSI_ERR_INTERNAL, "unknown error");
    }
}

char *dup_string(const std::string &s)
{
    char *out = static_cast<char *>(std::malloc(s.size() + 1));
    if (out == nullptr)
        throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void require(const void *p, const char *what)
{
    if (p == nullptr)
        throw oosi::InputError(std::string(what) + " must not be null");
}

} // namespace

extern "C" {

const char *oosi_last_error(void) { return last_error.c_str(); }

const char *oosi_status_string(oosi_status status)
{
    switch (status)
    {
    case OOSI_OK: return "ok";
    case OOSI_ERR_INPUT: return "input error";
    case OOSI_ERR_NUMERICAL: return "numerical error";
    case OOSI_ERR_DEGENERATE: return "degenerate system";
    case OOSI_ERR_IO: return "i/o error";
    case OOSI_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char *oosi_version(void) { return "0.1.0"; }

void oosi_string_free(char *s) { std::free(s); }

oosi_status oosi_experiment_create_default(oosi_experiment **out)
{
    return guarded([&] {
        require(out, "out");
        *out = new oosi_experiment{};
    });
}

oosi_status oosi_experiment_create_canned(const char *name, oosi_experiment **out)
{
    return guarded([&] {
        require(name, "name");
        require(out, "out");
        *out = new oosi_experiment{oosi::canned_spec(name)};
    });
}

oosi_status oosi_experiment_load_json(const char *path, oosi_experiment **out)
{
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = new oosi_experiment{oosi::load_spec(path)};
    });
}

oosi_status oosi_experiment_from_json_string(const char *json, oosi_experiment **out)
{
    return guarded([&] {
        require(json, "json");
        require(out, "out");
        *out = new oosi_experiment{oosi::spec_from_json(json)};
    });
}

oosi_status oosi_experiment_override(oosi_experiment *exp, const char *assignment)
{
    return guarded([&] {
        require(exp, "experiment");
        require(assignment, "assignment");
        oosi::apply_override(exp->spec, assignment);
    });
}

oosi_status oosi_experiment_to_json(const oosi_experiment *exp, char **out_json)
{
    return guarded([&] {
        require(exp, "experiment");
        require(out_json, "out_json");
        *out_json = dup_string(oosi::spec_to_json(exp->spec));
    });
}

void oosi_experiment_destroy(oosi_experiment *exp) { delete exp; }

oosi_status oosi_run(const oosi_experiment *exp, oosi_results **out)
{
    return guarded([&] {
        require(exp, "experiment");
        require(out, "out");
        auto *res = new oosi_results{exp->spec, {}};
        try
        {
            res->result = oosi::run_monte_carlo(exp->spec);
        }
        catch (...)
        {
            delete res;
            throw;
        }
        *out = res;
    });
}

oosi_status oosi_results_row_count(const oosi_results *res, size_t *out_count)
{
    return guarded([&] {
        require(res, "results");
        require(out_count, "out_count");
        *out_count = res->result.rows.size();
    });
}

oosi_status oosi_results_get_row(const oosi_results *res, size_t index, oosi_row *out_row)
{
    return guarded([&] {
        require(res, "results");
        require(out_row, "out_row");
        if (index >= res->result.rows.size())
            throw oosi::InputError("row index out of range");
        const oosi::ResultRow &r = res->result.rows[index];
        // to_string returns views of string literals, so the pointer stays valid.
        out_row->method = oosi::to_string(r.method).data();
        out_row->snr_db = r.snr_db;
        out_row->ber = r.ber;
        out_row->bit_count = r.bit_count;
        out_row->bit_errors = r.bit_errors;
        out_row->ci_low = r.ci_low;
        out_row->ci_high = r.ci_high;
        out_row->fronthaul_per_link_real_symbols = r.fronthaul_per_link_real_symbols;
        out_row->wall_time_s = r.wall_time_s;
        out_row->seed = r.seed;
        out_row->failed_blocks = r.failed_blocks;
    });
}

oosi_status oosi_results_failures(const oosi_results *res, uint64_t *out_numerical_failures,
                                  uint64_t *out_degenerate_procrustes)
{
    return guarded([&] {
        require(res, "results");
        if (out_numerical_failures != nullptr)
            *out_numerical_failures = res->result.diagnostics.numerical_failures;
        if (out_degenerate_procrustes != nullptr)
            *out_degenerate_procrustes = res->result.diagnostics.degenerate_procrustes;
    });
}

oosi_status oosi_results_to_csv(const oosi_results *res, char **out_csv)
{
    return guarded([&] {
        require(res, "results");
        require(out_csv, "out_csv");
        *out_csv = dup_string(oosi::results_to_csv(res->result.rows));
    });
}

oosi_status oosi_results_to_json(const oosi_results *res, char **out_json)
{
    return guarded([&] {
        require(res, "results");
        require(out_json, "out_json");
        *out_json = dup_string(oosi::results_to_json(res->result, res->spec));
    });
}

oosi_status oosi_results_emit(const oosi_results *res, const char *out_dir)
{
    return guarded([&] {
        require(res, "results");
        require(out_dir, "out_dir");
        oosi::emit_report(res->result, res->spec, out_dir);
    });
}

void oosi_results_destroy(oosi_results *res) { delete res; }

oosi_status oosi_fronthaul_table_json(const oosi_experiment *exp, char **out_json)
{
    return guarded([&] {
        require(exp, "experiment");
        require(out_json, "out_json");
        *out_json = dup_string(oosi::fronthaul_table_json(oosi::fronthaul_table(exp->spec.cfg), exp->spec.cfg));
    });
}

oosi_status oosi_fronthaul_table_csv(const oosi_experiment *exp, char **out_csv)
{
    return guarded([&] {
        require(exp, "experiment");
        require(out_csv, "out_csv");
        *out_csv = dup_string(oosi::fronthaul_table_csv(oosi::fronthaul_table(exp->spec.cfg)));
    });
}

oosi_status oosi_geometry_json(const oosi_experiment *exp, uint64_t block, char **out_json)
{
    return guarded([&] {
        require(exp, "experiment");
        require(out_json, "out_json");
        const oosi::SystemConfig &cfg = exp->spec.cfg;
        cfg.validate();
        *out_json = dup_string(oosi::geometry_to_json(oosi::block_geometry(cfg, block)));
    });
}

} // extern "C"
