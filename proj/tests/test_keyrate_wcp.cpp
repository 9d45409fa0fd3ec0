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

#include "satkey/keyrate_wcp.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "doctest.h"
#include "satkey/errors.hpp"
#include "satkey/link_model.hpp"
#include "satkey/numeric.hpp"
#include "satkey/source_models.hpp"

using namespace satkey;

namespace {

double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

constexpr double kHugeN = 1e30;  // effectively infinite statistics

// Observables for a lossy channel with vacuum yield y0, exact expectations.
DecoyObservables exact_channel(double mu, double nu, double eta, double y0,
                               double e_d, double n_total, double k_mu) {
  DecoyObservables obs;
  obs.n_total = n_total;
  obs.n_sent_mu = k_mu * n_total;
  obs.n_sent_nu = (1.0 - k_mu) * n_total;
  auto gain = [&](double x) { return 1.0 - (1.0 - y0) * std::exp(-x * eta); };
  auto qber = [&](double x) {
    double ps = 1.0 - std::exp(-x * eta);
    return (e_d * ps + 0.5 * y0) / (ps + y0);
  };
  obs.q_mu = gain(mu);
  obs.q_nu = gain(nu);
  obs.e_mu = y0 > 0.0 || obs.q_mu > 0.0 ? qber(mu) : 0.0;
  obs.e_nu = y0 > 0.0 || obs.q_nu > 0.0 ? qber(nu) : 0.0;
  obs.n_mu = obs.n_sent_mu * obs.q_mu;
  return obs;
}

// Brute-force feasibility search: minimize Y1 over yield vectors Y0..Y9
// consistent with the two observed gains, with Y0 capped at the same upper
// bound the analytic formula uses (without that cap the adversary could
// trade all single-photon yield against vacuum yield and Y1 = 0 would be
// feasible). The minimum of a linear objective under two equality
// constraints and box bounds is attained with at most two coordinates away
// from their bounds, so enumerating basic pairs with the rest pinned at a
// bound covers every vertex.
double brute_force_min_y1(double mu, double nu, double q_mu, double q_nu,
                          double y0_max) {
  constexpr int kOrders = 10;
  std::array<double, kOrders> pmu{}, pnu{};
  double tmu = std::exp(-mu), tnu = std::exp(-nu);
  for (int n = 0; n < kOrders; ++n) {
    pmu[static_cast<size_t>(n)] = tmu;
    pnu[static_cast<size_t>(n)] = tnu;
    tmu *= mu / (n + 1);
    tnu *= nu / (n + 1);
  }

  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kOrders; ++i) {
    for (int j = i + 1; j < kOrders; ++j) {
      for (int pattern = 0; pattern < (1 << (kOrders - 2)); ++pattern) {
        std::array<double, kOrders> y{};
        int bit = 0;
        double rem_mu = q_mu, rem_nu = q_nu;
        for (int n = 0; n < kOrders; ++n) {
          if (n == i || n == j) continue;
          double upper = n == 0 ? y0_max : 1.0;
          double v = ((pattern >> bit) & 1) ? upper : 0.0;
          ++bit;
          y[static_cast<size_t>(n)] = v;
          rem_mu -= pmu[static_cast<size_t>(n)] * v;
          rem_nu -= pnu[static_cast<size_t>(n)] * v;
        }
        // Solve the remaining 2x2 system for y_i, y_j.
        double a = pmu[static_cast<size_t>(i)], b = pmu[static_cast<size_t>(j)];
        double c = pnu[static_cast<size_t>(i)], d = pnu[static_cast<size_t>(j)];
        double det = a * d - b * c;
        if (std::abs(det) < 1e-18) continue;
        double yi = (rem_mu * d - b * rem_nu) / det;
        double yj = (a * rem_nu - rem_mu * c) / det;
        double hi_i = i == 0 ? y0_max : 1.0;
        if (yi < -1e-9 || yi > hi_i + 1e-9 || yj < -1e-9 || yj > 1.0 + 1e-9)
          continue;
        y[static_cast<size_t>(i)] = yi;
        y[static_cast<size_t>(j)] = yj;
        best = std::min(best, y[1]);
      }
    }
  }
  return best;
}

}  // namespace

TEST_CASE("two-sided quantile matches the reference value") {
  CHECK(std::abs(two_sided_quantile(1e-10) - 6.4669510747324180) < 1e-6);
  CHECK(std::abs(two_sided_quantile(0.01) - 2.5758293035489004) < 1e-9);
}

TEST_CASE("finite statistics widening") {
  // Deviation magnitude against the arithmetic oracle u sqrt(X/N).
  double up = apply_finite_statistics(3e-4, 6.9e9, 1e-10, WidenDirection::kUp);
  CHECK(rel_err(up - 3e-4, 1.3484525140836000e-6) < 1e-6);

  // N -> infinity: adjustment vanishes.
  double far = apply_finite_statistics(3e-4, kHugeN, 1e-10, WidenDirection::kUp);
  CHECK(std::abs(far - 3e-4) < 1e-15);

  // Interval property: the bracket contains the observation, clamped to [0,1].
  for (double x : {0.0, 1e-6, 0.3, 0.999999}) {
    double hi = apply_finite_statistics(x, 1e6, 1e-10, WidenDirection::kUp);
    double lo = apply_finite_statistics(x, 1e6, 1e-10, WidenDirection::kDown);
    CHECK(hi >= x);
    CHECK(lo <= x);
    CHECK(hi <= 1.0);
    CHECK(lo >= 0.0);
  }

  // Hoeffding-style alternative is wider for small observables.
  double g = apply_finite_statistics(1e-5, 1e9, 1e-10, WidenDirection::kUp);
  double h = apply_finite_statistics(1e-5, 1e9, 1e-10, WidenDirection::kUp,
                                     FluctuationBound::kHoeffding);
  CHECK(h > g);
}

TEST_CASE("decoy bounds recover the single-photon yield on a clean channel") {
  double mu = 0.5, nu = 0.1;
  // Closed-form small-eta limit of the bound on this channel:
  //   Y1_L / eta -> (mu/(mu nu - nu^2)) (nu e^nu - nu^2 e^mu / mu).
  double c0 = (mu / (mu * nu - nu * nu)) *
              (nu * std::exp(nu) - (nu * nu / mu) * std::exp(mu));
  DecoyConfig cfg;  // Y0 = 0
  for (double eta : {1e-5, 1e-4, 1e-3}) {
    DecoyObservables obs = exact_channel(mu, nu, eta, 0.0, 0.0, kHugeN, 0.9);
    DecoyBounds b = decoy_bounds(obs, mu, nu, 1e-10, cfg);
    double true_y1 = eta;
    CHECK(b.y1_lower <= true_y1 * (1.0 + 1e-12));  // safe side
    CHECK(b.y1_lower / true_y1 > 0.95);            // and reasonably tight
    if (eta <= 1e-5) CHECK(rel_err(b.y1_lower / eta, c0) < 1e-6);
    CHECK(rel_err(b.q1_lower, b.y1_lower * mu * std::exp(-mu)) < 1e-12);
  }
}

TEST_CASE("degenerate decoy collapses the bounds") {
  DecoyObservables obs = exact_channel(0.5, 0.0, 1e-3, 0.0, 0.02, kHugeN, 0.9);
  CHECK_THROWS_AS(decoy_bounds(obs, 0.5, 0.0, 1e-10, {}), Error);
  try {
    decoy_bounds(obs, 0.5, 0.0, 1e-10, {});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kBoundsCollapse);
  }
}

TEST_CASE("analytic Y1 lower bound never exceeds the brute-force minimum") {
  // Reference scenario at 25 dB channel loss with calibrated receiver
  // defaults and infinite statistics.
  ChannelSpec ch;
  ch.loss_db = 25.0;
  ReceiverSpec rx;
  double eta = end_to_end_transmittance(ch, rx);
  double y0 = background_click_prob(ch, rx);
  DecoyObservables obs = exact_channel(0.5, 0.1, eta, y0, 0.02, kHugeN, 0.9);

  DecoyConfig cfg;
  cfg.y0_upper_base = y0;
  DecoyBounds b = decoy_bounds(obs, 0.5, 0.1, 1e-10, cfg);

  double lp_min = brute_force_min_y1(0.5, 0.1, obs.q_mu, obs.q_nu, b.y0_upper);
  CHECK(std::isfinite(lp_min));
  CHECK(b.y1_lower <= lp_min + 1e-9);
  // The bound is also not absurdly loose on this channel.
  CHECK(b.y1_lower > 0.5 * lp_min);
}

TEST_CASE("noiseless limit of the key length") {
  double eta = 1e-3;
  DecoyObservables obs = exact_channel(0.5, 0.1, eta, 0.0, 0.0, kHugeN, 0.9);
  DecoyBounds b = decoy_bounds(obs, 0.5, 0.1, 1e-10, {});
  CHECK(b.e1_upper == 0.0);
  FiniteKeyParams p;
  p.f = 1.0;
  KeyRateResult r = wcp_key_length(obs, b, p, 0.9);
  CHECK(r.key_bits > 0.0);
  CHECK(rel_err(r.key_bits, obs.n_total * 0.9 * 0.5 * b.q1_lower) < 1e-3);
}

TEST_CASE("key length decreases with signal QBER") {
  ChannelSpec ch;
  ch.loss_db = 25.0;
  ReceiverSpec rx;
  double eta = end_to_end_transmittance(ch, rx);
  double y0 = background_click_prob(ch, rx);
  double n_total = 7.64e9;
  DecoyObservables obs = exact_channel(0.5, 0.1, eta, y0, 0.02, n_total, 0.9);
  DecoyConfig cfg;
  cfg.y0_upper_base = y0;
  DecoyBounds b = decoy_bounds(obs, 0.5, 0.1, 1e-10, cfg);
  FiniteKeyParams p;
  KeyRateResult base = wcp_key_length(obs, b, p, 0.9);
  CHECK(base.key_bits > 0.0);

  DecoyObservables worse = obs;
  worse.e_mu = obs.e_mu * 2.0;
  KeyRateResult degraded = wcp_key_length(worse, b, p, 0.9);
  CHECK(degraded.key_bits < base.key_bits);
}

TEST_CASE("finite-size rate approaches the asymptotic decoy rate") {
  ChannelSpec ch;
  ch.loss_db = 25.0;
  ReceiverSpec rx;
  double eta = end_to_end_transmittance(ch, rx);
  double y0 = background_click_prob(ch, rx);
  const double mu = 0.5, nu = 0.1, k_mu = 0.9;
  FiniteKeyParams p;

  // Asymptote: exact observables, no statistical widening, no penalty.
  DecoyObservables exact = exact_channel(mu, nu, eta, y0, 0.02, kHugeN, k_mu);
  DecoyConfig cfg;
  cfg.y0_upper_base = y0;
  DecoyBounds limit = decoy_bounds(exact, mu, nu, 1e-10, cfg);
  double asymptotic_rate =
      k_mu * p.q *
      (limit.q1_lower * (1.0 - binary_entropy(limit.e1_upper)) -
       exact.q_mu * p.f * binary_entropy(exact.e_mu));

  double prev_gap = 1.0;
  for (double n_total : {7.64e9, 7.64e12, 7.64e15}) {
    DecoyObservables obs = exact_channel(mu, nu, eta, y0, 0.02, n_total, k_mu);
    DecoyBounds b = decoy_bounds(obs, mu, nu, 1e-10, cfg);
    KeyRateResult r = wcp_key_length(obs, b, p, k_mu);
    double gap = std::abs(r.key_bits / n_total - asymptotic_rate) / asymptotic_rate;
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
  CHECK(prev_gap < 1e-3);
}

TEST_CASE("bad inputs are rejected") {
  DecoyObservables obs;
  obs.q_mu = 1.5;
  CHECK_THROWS_AS(obs.validate(), Error);

  DecoyObservables ok = exact_channel(0.5, 0.1, 1e-3, 0.0, 0.02, 1e9, 0.9);
  CHECK_THROWS_AS(decoy_bounds(ok, 0.1, 0.5, 1e-10, {}), Error);  // nu >= mu

  DecoyBounds b;
  b.q1_lower = 1e-4;
  b.e1_upper = 0.01;
  FiniteKeyParams p;
  CHECK_THROWS_AS(wcp_key_length(ok, b, p, 1.5), Error);  // K_mu > 1
}
