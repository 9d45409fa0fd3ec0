// Copyright 2026 The satkey Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SATKEY_NUMERIC_HPP
#define SATKEY_NUMERIC_HPP

namespace satkey {

// Binary Shannon entropy in bits. H(0) = H(1) = 0 by continuity.
double binary_entropy(double x);

// 10^(-db/10). Requires db >= 0.
double loss_db_to_linear(double db);

// Inverse of the standard normal CDF. Acklam's rational approximation
// polished with two Newton steps against erfc; good to ~1e-13 over the
// range used here (tail probabilities down to ~1e-15).
double inverse_normal_cdf(double p);

// Two-sided normal quantile for confidence 1 - eps: Phi^-1(1 - eps/2).
double two_sided_quantile(double eps);

inline double clamp01(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

}  // namespace satkey

#endif  // SATKEY_NUMERIC_HPP
