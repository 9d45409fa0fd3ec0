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

/* Compiled as C11: proves the public header is consumable from plain C. */

#include "satkey.h"

#include <math.h>
#include <string.h>

int capi_smoke_from_c(void) {
  if (sk_version() == NULL) return 1;
  if (sk_builtin_count() != 5) return 2;

  double pm = 0.0;
  if (sk_multiphoton_bound(1.1e-5, 0.06, 0.033, &pm) != SK_OK) return 3;
  if (fabs(pm / 1.2106392175068436e-5 - 1.0) > 1e-9) return 4;

  if (sk_multiphoton_bound(0.5, 0.06, 0.033, &pm) != SK_ERR_ESTIMATOR_INVALID)
    return 5;
  if (strlen(sk_last_error()) == 0) return 6;

  sk_scenario* s = NULL;
  if (sk_scenario_builtin("qd76-15db", &s) != SK_OK) return 7;
  sk_sweep_row row;
  if (sk_evaluate(s, SK_MODE_ANALYTIC, 20.0, &row) != SK_OK) return 8;
  if (!(row.key_bits > 0.0)) return 9;
  sk_scenario_free(s);
  return 0;
}
