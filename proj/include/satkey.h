/* Copyright 2026 The satkey Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* Public C interface of the satkey shared library.
 *
 * Satellite-pass BB84 secure key estimation for a quantum-dot single-photon
 * source and a two-intensity decoy-state weak-coherent-pulse source, with a
 * pulse-level Monte Carlo cross-check.
 *
 * Conventions:
 *  - every fallible call returns sk_status; SK_OK is zero
 *  - on failure, sk_last_error() returns a thread-local message
 *  - objects are opaque handles released with the matching _free function
 *  - fields that do not apply to a source type are NaN
 */

#ifndef SATKEY_H
#define SATKEY_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sk_status {
  SK_OK = 0,
  SK_ERR_INVALID_ARGUMENT = 1,
  SK_ERR_DOMAIN = 2,
  SK_ERR_INCONSISTENT = 3,
  SK_ERR_ESTIMATOR_INVALID = 4,
  SK_ERR_INSUFFICIENT_DATA = 5,
  SK_ERR_PARSE = 6,
  SK_ERR_IO = 7,
  SK_ERR_INFEASIBLE = 8,
  SK_ERR_NO_DETECTIONS = 9,
  SK_ERR_BOUNDS_COLLAPSE = 10,
  SK_ERR_INTERNAL = 99
} sk_status;

typedef enum sk_run_mode {
  SK_MODE_ANALYTIC = 0,
  SK_MODE_MONTE_CARLO = 1,
  SK_MODE_BOTH = 2 /* scenario files only; pick one mode when running */
} sk_run_mode;

typedef struct sk_scenario sk_scenario;
typedef struct sk_sweep sk_sweep;

const char* sk_version(void);

/* Message describing the most recent failure on this thread. */
const char* sk_last_error(void);

/* --- scenarios ---------------------------------------------------------- */

size_t sk_builtin_count(void);
const char* sk_builtin_name(size_t index);            /* NULL out of range */
const char* sk_builtin_description(size_t index);     /* NULL out of range */

sk_status sk_scenario_builtin(const char* name, sk_scenario** out);
sk_status sk_scenario_load(const char* path, sk_scenario** out);
/* Built-in name first, then filesystem path. */
sk_status sk_scenario_resolve(const char* name_or_path, sk_scenario** out);
void sk_scenario_free(sk_scenario* scenario);

const char* sk_scenario_name(const sk_scenario* scenario);
sk_run_mode sk_scenario_mode(const sk_scenario* scenario);
sk_status sk_scenario_set_seed(sk_scenario* scenario, uint64_t seed);
sk_status sk_scenario_set_mc_slots(sk_scenario* scenario, uint64_t slots);

/* --- sweeps -------------------------------------------------------------- */

typedef struct sk_sweep_row {
  double loss_db;
  double key_bits;
  double n_sent;
  double n_detected;
  double m_sifted;
  double qber;
  double qber_adjusted;        /* NaN on the decoy path */
  double correction_a_or_q1l;  /* A, or Q1 lower bound */
  double e1_upper;             /* NaN on the single-photon path */
  double delta;
  double eps_bar;
  double eps_pa;
  char zero_key_cause[48];     /* empty string when key_bits > 0 */
} sk_sweep_row;

/* Evaluates one row per sweep point, ordered by loss. */
sk_status sk_run_sweep(const sk_scenario* scenario, sk_run_mode mode,
                       sk_sweep** out);
size_t sk_sweep_size(const sk_sweep* sweep);
sk_status sk_sweep_row_at(const sk_sweep* sweep, size_t index, sk_sweep_row* out);
sk_status sk_sweep_write_csv(const sk_sweep* sweep, const char* path);
void sk_sweep_free(sk_sweep* sweep);

/* Single-point evaluation at an explicit channel loss. */
sk_status sk_evaluate(const sk_scenario* scenario, sk_run_mode mode,
                      double loss_db, sk_sweep_row* out);

/* --- multi-photon characterization --------------------------------------- */

typedef struct sk_hbt_result {
  uint64_t n_coincident;
  uint64_t n_solitary;
  uint64_t n_slots;
  double kappa;        /* N_C / N_S */
  double p2_recovered; /* estimator evaluated with R = p1 */
  double pm_bound;     /* estimator evaluated with R = p1 + p2 */
} sk_hbt_result;

/* Simulates a two-detector coincidence bench for a source emitting one
 * photon with probability p1 and two with probability p2, then runs the
 * click-ratio estimator on the simulated counts. */
sk_status sk_simulate_hbt(double p1, double p2, double eta, double dark_prob,
                          uint64_t num_slots, uint64_t seed, sk_hbt_result* out);

/* P_m <= 2 kappa R / (eta - 3 kappa + 2 kappa eta). */
sk_status sk_multiphoton_bound(double kappa, double eta, double r, double* out);

#ifdef __cplusplus
}
#endif

#endif /* SATKEY_H */
