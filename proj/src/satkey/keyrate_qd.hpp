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
// Finite-size secure key length for the single-photon (quantum dot) source:
//   L = n q A (1 - H(E~/A) - f H(E) - Delta)
// with E~ the statistically adjusted QBER, A the multi-photon correction and
// Delta the finite-size rate penalty.

#ifndef SATKEY_KEYRATE_QD_HPP
#define SATKEY_KEYRATE_QD_HPP

#include <limits>

namespace satkey {

struct FiniteKeyParams {
  double eps_ec = 1e-10;   // error-correction verification failure
  double eps_pe = 1e-10;   // parameter-estimation failure (QBER deviation)
  double eps_total = 1e-9; // overall budget: eps_bar + eps_pa + eps_ec
  // Fixed smoothing / privacy-amplification epsilons. NaN means "optimize".
  double eps_bar = std::numeric_limits<double>::quiet_NaN();
  double eps_pa = std::numeric_limits<double>::quiet_NaN();
  double f = 1.16;  // error-correction inefficiency
  double q = 0.5;   // sifting ratio

  bool optimize_epsilons() const;
  void validate() const;
};

struct QdKeyInput {
  double n = 0.0;      // raw key bits (detections contributing to key)
  double m = 0.0;      // sifted key size, q*n
  double qber = 0.0;   // observed E
  double p_det = 0.0;  // per-slot detection probability
  double pm = 0.0;     // multi-photon emission bound per slot
};

enum class ZeroKeyCause {
  kNone = 0,
  kNoiseDominated,       // E~/A >= 1/2
  kMultiphotonDominated, // A <= 0
  kFiniteSize,           // bracket went non-positive
  kBoundsCollapse,       // decoy bounds gave no single-photon contribution
  kNoDetections,
};

const char* to_string(ZeroKeyCause cause);

struct KeyRateResult {
  double key_bits = 0.0;
  double n_sent = 0.0;
  double n_detected = 0.0;
  double m_sifted = 0.0;
  double qber = 0.0;
  double qber_adjusted = std::numeric_limits<double>::quiet_NaN();  // E~; NaN on the decoy path
  double correction = 0.0;           // A, or Q1_L on the decoy path
  double e1_upper = std::numeric_limits<double>::quiet_NaN();       // E1^U; NaN on the single-photon path
  double delta = 0.0;
  double eps_bar = 0.0;
  double eps_pa = 0.0;
  ZeroKeyCause cause = ZeroKeyCause::kNone;
};

// E~ = E + sqrt((2 ln(1/eps_PE) + 2 ln(m+1)) / m) / 2.
double adjusted_qber(double qber, double m, double eps_pe);

// A = (p_det - Pm) / p_det, clamped to [0,1].
double multiphoton_correction(double p_det, double pm);

// Per-bit finite-size penalty:
//   Delta = 7 sqrt(log2(2/eps_bar)/m) + (2 log2(1/eps_pa) + log2(2/eps_ec))/m.
double finite_size_delta(double m, double eps_bar, double eps_pa, double eps_ec);

// Full key length; optimizes (eps_bar, eps_pa) unless fixed in params.
KeyRateResult qd_key_length(const QdKeyInput& input, const FiniteKeyParams& params);

}  // namespace satkey

#endif  // SATKEY_KEYRATE_QD_HPP
