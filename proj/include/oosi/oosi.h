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

#ifndef OOSI_H
#define OOSI_H

#include <stddef.h>
#include <stdint.h>

#if defined(OOSI_BUILDING_LIBRARY)
#define OOSI_API __attribute__((visibility("default")))
#else
#define OOSI_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum oosi_status
{
    OOSI_OK = 0,
    OOSI_ERR_INPUT = 1,      /* bad argument, shape or config value */
    OOSI_ERR_NUMERICAL = 2,  /* non-finite value or failed factorization */
    OOSI_ERR_DEGENERATE = 3, /* singular or rank-deficient system */
    OOSI_ERR_IO = 4,
    OOSI_ERR_INTERNAL = 5
} oosi_status;

typedef struct oosi_experiment oosi_experiment;
typedef struct oosi_results oosi_results;

typedef struct oosi_row
{
    const char *method; /* owned by the results handle */
    double snr_db;
    double ber;
    uint64_t bit_count;
    uint64_t bit_errors;
    double ci_low;
    double ci_high;
    uint64_t fronthaul_per_link_real_symbols;
    double wall_time_s;
    uint64_t seed;
    uint64_t failed_blocks;
} oosi_row;

/* Message for the most recent failing call on this thread, "" if none. */
OOSI_API const char *oosi_last_error(void);
OOSI_API const char *oosi_status_string(oosi_status status);
OOSI_API const char *oosi_version(void);

/* Strings returned through char** out-parameters are released with this. */
OOSI_API void oosi_string_free(char *s);

OOSI_API oosi_status oosi_experiment_create_default(oosi_experiment **out);
/* name: "reference" or "many_oos" */
OOSI_API oosi_status oosi_experiment_create_canned(const char *name, oosi_experiment **out);
OOSI_API oosi_status oosi_experiment_load_json(const char *path, oosi_experiment **out);
OOSI_API oosi_status oosi_experiment_from_json_string(const char *json, oosi_experiment **out);
/* "key=value"; key is a config or top-level field, or one of L, N, K, K_I, tau_p, tau_c */
OOSI_API oosi_status oosi_experiment_override(oosi_experiment *exp, const char *assignment);
OOSI_API oosi_status oosi_experiment_to_json(const oosi_experiment *exp, char **out_json);
OOSI_API void oosi_experiment_destroy(oosi_experiment *exp);

OOSI_API oosi_status oosi_run(const oosi_experiment *exp, oosi_results **out);
OOSI_API oosi_status oosi_results_row_count(const oosi_results *res, size_t *out_count);
OOSI_API oosi_status oosi_results_get_row(const oosi_results *res, size_t index, oosi_row *out_row);
OOSI_API oosi_status oosi_results_failures(const oosi_results *res, uint64_t *out_numerical_failures,
                                           uint64_t *out_degenerate_procrustes);
OOSI_API oosi_status oosi_results_to_csv(const oosi_results *res, char **out_csv);
OOSI_API oosi_status oosi_results_to_json(const oosi_results *res, char **out_json);
/* Writes the CSV and JSON named in the experiment's outputs section into out_dir. */
OOSI_API oosi_status oosi_results_emit(const oosi_results *res, const char *out_dir);
OOSI_API void oosi_results_destroy(oosi_results *res);

/* Analytic vs measured per-link load of every fronthaul item. */
OOSI_API oosi_status oosi_fronthaul_table_json(const oosi_experiment *exp, char **out_json);
OOSI_API oosi_status oosi_fronthaul_table_csv(const oosi_experiment *exp, char **out_csv);

/* Positions and large-scale gains of Monte Carlo block `block`. */
OOSI_API oosi_status oosi_geometry_json(const oosi_experiment *exp, uint64_t block, char **out_json);

#ifdef __cplusplus
}
#endif

#endif
