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

#include <cmath>

#include "satkey/errors.hpp"
#include "satkey/numeric.hpp"
#include "satkey/optimizer.hpp"

namespace satkey {

void DecoyObservables::validate() const {
  for (double g : {q_mu, q_nu}) {
    if (!(g >= 0.0 && g <= 1.0))
      throw Error(ErrorCode::kInvalidArgument, "gains must lie in [0,1]");
  }
  for (double e : {e_mu, e_nu}) {
    if (!(e >= 0.0 && e <= 0.5))
      throw Error(ErrorCode::kInvalidArgument, "QBERs must lie in [0, 1/2]");
  }
  if (n_sent_mu < 0.0 || n_sent_nu < 0.0 || n_total < 0.0 || n_mu < 0.0)
    throw Error(ErrorCode::kInvalidArgument, "counts must be non-negative");
}

double apply_finite_statistics(double observable, double n_sent, double eps_pe,
                               WidenDirection direction, FluctuationBound bound) {
  if (!(n_sent >= 1.0))
    throw Error(ErrorCode::kInvalidArgument, "N_sent must be >= 1");
  double dev;
  if (bound == FluctuationBound::kNormalQuantile) {
    dev = two_sided_quantile(eps_pe) * std::sqrt(observable / n_sent);
  } else {
    dev = std::sqrt(std::log(2.0 / eps_pe) / (2.0 * n_sent));
  }
  double x = direction == WidenDirection::kUp ? observable + dev : observable - dev;
  return clamp01(x);
}

DecoyBounds decoy_bounds(const DecoyObservables& obs, double mu, double nu,
                         double eps_pe, const DecoyConfig& cfg) {
  obs.validate();
  if (!(nu >= 0.0 && nu < mu))
    throw Error(ErrorCode::kInvalidArgument, "require 0 <= nu < mu");
  if (nu == 0.0)
    throw Error(ErrorCode::kBoundsCollapse,
                "degenerate decoy intensity nu = 0: single-photon bounds collapse");

  // Gains in subtractive positions widen up, additive positions down.
  double q_mu_up = apply_finite_statistics(obs.q_mu, obs.n_sent_mu, eps_pe,
                                           WidenDirection::kUp, cfg.bound);
  double q_nu_dn = apply_finite_statistics(obs.q_nu, obs.n_sent_nu, eps_pe,
                                           WidenDirection::kDown, cfg.bound);
  double error_gain_up =
      apply_finite_statistics(obs.e_nu * obs.q_nu, cfg.sifting_q * obs.n_sent_nu,
                              eps_pe, WidenDirection::kUp, cfg.bound);

  DecoyBounds b;
  b.y0_lower = cfg.y0_lower;
  b.y0_upper = cfg.y0_upper_base > 0.0
                   ? apply_finite_statistics(cfg.y0_upper_base, obs.n_total, eps_pe,
                                             WidenDirection::kUp, cfg.bound)
                   : 0.0;

  double denom = mu * nu - nu * nu;
  b.y1_lower = (mu / denom) *
               (q_nu_dn * std::exp(nu) - q_mu_up * std::exp(mu) * (nu * nu) / (mu * mu) -
                ((mu * mu - nu * nu) / (mu * mu)) * b.y0_upper);
  if (b.y1_lower <= 0.0)
    throw Error(ErrorCode::kBoundsCollapse,
                "no provable single-photon contribution (Y1 lower bound <= 0)");
  b.y1_lower = clamp01(b.y1_lower);
  b.q1_lower = b.y1_lower * mu * std::exp(-mu);

  double numer = error_gain_up * std::exp(nu);
  if (cfg.subtract_vacuum_error) numer -= 0.5 * b.y0_lower;
  b.e1_upper = numer / (b.y1_lower * nu);
  if (b.e1_upper < 0.0) b.e1_upper = 0.0;
  return b;
}

KeyRateResult wcp_key_length(const DecoyObservables& obs, const DecoyBounds& bounds,
                             const FiniteKeyParams& params, double k_mu) {
  params.validate();
  obs.validate();
  if (!(k_mu > 0.0 && k_mu <= 1.0))
    throw Error(ErrorCode::kInvalidArgument, "require 0 < K_mu <= 1");

  KeyRateResult res;
  res.n_sent = obs.n_total;
  res.n_detected = obs.n_mu;
  res.m_sifted = params.q * obs.n_mu;
  res.qber = obs.e_mu;
  res.correction = bounds.q1_lower;
  res.e1_upper = bounds.e1_upper;
  if (res.m_sifted < 1.0) {
    res.cause = ZeroKeyCause::kNoDetections;
    return res;
  }
  if (bounds.e1_upper >= 0.5) {
    res.cause = ZeroKeyCause::kNoiseDominated;
    return res;
  }

  double m = res.m_sifted;
  auto bracket = [&](double eb, double ep) {
    double delta = finite_size_delta(m, eb, ep, params.eps_ec);
    return bounds.q1_lower * (1.0 - binary_entropy(bounds.e1_upper)) -
           obs.q_mu * params.f * binary_entropy(obs.e_mu) - obs.q_mu * delta;
  };
  auto key = [&](double eb, double ep) {
    double br = bracket(eb, ep);
    return br > 0.0 ? obs.n_total * k_mu * params.q * br : 0.0;
  };

  double eb = params.eps_bar;
  double ep = params.eps_pa;
  if (params.optimize_epsilons()) {
    EpsilonSplit split =
        optimize_epsilons(key, params.eps_total, params.eps_ec);
    eb = split.eps_bar;
    ep = split.eps_pa;
  }
  res.delta = finite_size_delta(m, eb, ep, params.eps_ec);
  res.eps_bar = eb;
  res.eps_pa = ep;
  res.key_bits = key(eb, ep);
  if (res.key_bits <= 0.0) res.cause = ZeroKeyCause::kFiniteSize;
  return res;
}

}  // namespace satkey
