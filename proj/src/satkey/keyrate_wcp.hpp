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
//
// Two-intensity (signal + weak decoy) finite-size BB84 key length with
// lower/upper bounds on the single-photon contribution.

#ifndef SATKEY_KEYRATE_WCP_HPP
#define SATKEY_KEYRATE_WCP_HPP

#include "satkey/keyrate_qd.hpp"

namespace satkey {

enum class FluctuationBound {
  kNormalQuantile,  // X +- u sqrt(X/N), u the two-sided quantile at 1 - eps_PE
  kHoeffding,       // X +- sqrt(ln(2/eps_PE) / (2N))
};

struct DecoyObservables {
  double n_total = 0.0;   // total transmitted pulses
  double n_mu = 0.0;      // detected signal pulses
  double q_mu = 0.0, q_nu = 0.0;  // gains
  double e_mu = 0.0, e_nu = 0.0;  // observed QBERs
  double n_sent_mu = 0.0, n_sent_nu = 0.0;  // pulses sent at each intensity

  void validate() const;
};

struct DecoyBounds {
  double y0_lower = 0.0;
  double y0_upper = 0.0;
  double y1_lower = 0.0;  // single-photon yield lower bound
  double q1_lower = 0.0;  // single-photon gain lower bound
  double e1_upper = 0.0;  // single-photon QBER upper bound
};

struct DecoyConfig {
  FluctuationBound bound = FluctuationBound::kNormalQuantile;
  double y0_lower = 0.0;        // conservative default
  double y0_upper_base = 0.0;   // physical vacuum yield (background model)
  bool subtract_vacuum_error = false;  // needs y0_lower > 0 evidence
  double sifting_q = 0.5;  // error counts live in the sifted sample
};

enum class WidenDirection { kUp, kDown };

// Adversarial statistical widening of an observed gain or error-gain.
// Returns X + dev or X - dev with the result clamped to [0,1].
double apply_finite_statistics(double observable, double n_sent, double eps_pe,
                               WidenDirection direction,
                               FluctuationBound bound = FluctuationBound::kNormalQuantile);

// Standard two-intensity decoy bounds:
//   Y1_L = mu/(mu nu - nu^2) [Qnu- e^nu - Qmu+ e^mu nu^2/mu^2
//                             - (mu^2-nu^2)/mu^2 Y0_U]
//   Q1_L = Y1_L mu e^-mu
//   E1_U = (Enu Qnu)+ e^nu / (Y1_L nu)  (optional vacuum-error subtraction)
// Gains are widened over the pulses sent at their intensity; the error-gain
// (Enu Qnu) is widened over the sifted decoy sample q N_nu, where the error
// counts are actually accumulated.
// A non-positive Y1_L means no provable single-photon contribution and
// throws Error(kBoundsCollapse).
DecoyBounds decoy_bounds(const DecoyObservables& obs, double mu, double nu,
                         double eps_pe, const DecoyConfig& cfg = {});

// L = n K q [Q1_L (1 - H(E1_U)) - Qmu f H(Emu) - Qmu Delta],
// with Delta the per-bit penalty of finite_size_delta evaluated on the
// sifted signal sample m = q n_mu (this realizes the total-correction form
// "Delta_total / n_mu"). Optimizes (eps_bar, eps_pa) unless fixed.
KeyRateResult wcp_key_length(const DecoyObservables& obs, const DecoyBounds& bounds,
                             const FiniteKeyParams& params, double k_mu);

}  // namespace satkey

#endif  // SATKEY_KEYRATE_WCP_HPP
