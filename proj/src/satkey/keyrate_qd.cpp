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

#include "satkey/keyrate_qd.hpp"

#include <cmath>

#include "satkey/errors.hpp"
#include "satkey/numeric.hpp"
#include "satkey/optimizer.hpp"

namespace satkey {

bool FiniteKeyParams::optimize_epsilons() const {
  return std::isnan(eps_bar) || std::isnan(eps_pa);
}

void FiniteKeyParams::validate() const {
  for (double e : {eps_ec, eps_pe, eps_total}) {
    if (!(e > 0.0 && e < 1.0))
      throw Error(ErrorCode::kInvalidArgument, "epsilons must lie in (0,1)");
  }
  if (f < 1.0)
    throw Error(ErrorCode::kInvalidArgument, "error-correction inefficiency f must be >= 1");
  if (!(q > 0.0 && q <= 1.0))
    throw Error(ErrorCode::kInvalidArgument, "sifting ratio q must lie in (0,1]");
  if (!optimize_epsilons()) {
    if (!(1.0 - eps_ec > eps_bar && eps_bar > eps_pa && eps_pa >= 0.0))
      throw Error(ErrorCode::kInvalidArgument,
                  "require 1 - eps_EC > eps_bar > eps_PA >= 0");
  }
}

const char* to_string(ZeroKeyCause cause) {
  switch (cause) {
    case ZeroKeyCause::kNone: return "";
    case ZeroKeyCause::kNoiseDominated: return "noise-dominated";
    case ZeroKeyCause::kMultiphotonDominated: return "multiphoton-dominated";
    case ZeroKeyCause::kFiniteSize: return "finite-size";
    case ZeroKeyCause::kBoundsCollapse: return "bounds-collapse";
    case ZeroKeyCause::kNoDetections: return "no-detections";
  }
  return "";
}

double adjusted_qber(double qber, double m, double eps_pe) {
  if (!(m >= 1.0))
    throw Error(ErrorCode::kInsufficientData, "sifted key size m must be >= 1");
  if (!(eps_pe > 0.0 && eps_pe < 1.0))
    throw Error(ErrorCode::kInvalidArgument, "eps_PE must lie in (0,1)");
  return qber +
         0.5 * std::sqrt((2.0 * std::log(1.0 / eps_pe) + 2.0 * std::log(m + 1.0)) / m);
}

double multiphoton_correction(double p_det, double pm) {
  if (!(p_det > 0.0))
    throw Error(ErrorCode::kNoDetections, "p_det must be positive");
  return clamp01((p_det - pm) / p_det);
}

double finite_size_delta(double m, double eps_bar, double eps_pa, double eps_ec) {
  if (!(m >= 1.0))
    throw Error(ErrorCode::kInsufficientData, "sample size m must be >= 1");
  for (double e : {eps_bar, eps_pa, eps_ec}) {
    if (!(e > 0.0 && e < 1.0))
      throw Error(ErrorCode::kInvalidArgument, "epsilons must lie in (0,1)");
  }
  return 7.0 * std::sqrt(std::log2(2.0 / eps_bar) / m) +
         (2.0 * std::log2(1.0 / eps_pa) + std::log2(2.0 / eps_ec)) / m;
}

namespace {

struct QdBracket {
  double key_bits = 0.0;
  double delta = 0.0;
  ZeroKeyCause cause = ZeroKeyCause::kNone;
};

QdBracket qd_bracket(const QdKeyInput& in, const FiniteKeyParams& p,
                     double qber_adjusted, double a, double eps_bar,
                     double eps_pa) {
  QdBracket out;
  out.delta = finite_size_delta(in.m, eps_bar, eps_pa, p.eps_ec);
  if (a <= 0.0) {
    out.cause = ZeroKeyCause::kMultiphotonDominated;
    return out;
  }
  double x = qber_adjusted / a;
  if (x >= 0.5) {
    out.cause = ZeroKeyCause::kNoiseDominated;
    return out;
  }
  double bracket =
      1.0 - binary_entropy(x) - p.f * binary_entropy(in.qber) - out.delta;
  if (bracket <= 0.0) {
    out.cause = ZeroKeyCause::kFiniteSize;
    return out;
  }
  out.key_bits = in.n * p.q * a * bracket;
  return out;
}

}  // namespace

KeyRateResult qd_key_length(const QdKeyInput& input, const FiniteKeyParams& params) {
  params.validate();
  KeyRateResult res;
  res.n_detected = input.n;
  res.m_sifted = input.m;
  res.qber = input.qber;
  if (input.n < 1.0 || input.m < 1.0) {
    res.cause = ZeroKeyCause::kNoDetections;
    return res;
  }
  if (!(input.qber >= 0.0 && input.qber <= 0.5))
    throw Error(ErrorCode::kInvalidArgument, "QBER must lie in [0, 1/2]");
  if (input.m > input.n)
    throw Error(ErrorCode::kInconsistent, "sifted size m cannot exceed n");

  res.qber_adjusted = adjusted_qber(input.qber, input.m, params.eps_pe);
  res.correction = multiphoton_correction(input.p_det, input.pm);

  auto evaluate = [&](double eb, double ep) {
    return qd_bracket(input, params, res.qber_adjusted, res.correction, eb, ep);
  };

  double eb = params.eps_bar;
  double ep = params.eps_pa;
  if (params.optimize_epsilons()) {
    EpsilonSplit split = optimize_epsilons(
        [&](double b, double a) { return evaluate(b, a).key_bits; },
        params.eps_total, params.eps_ec);
    eb = split.eps_bar;
    ep = split.eps_pa;
  }
  QdBracket bracket = evaluate(eb, ep);
  res.key_bits = bracket.key_bits;
  res.delta = bracket.delta;
  res.eps_bar = eb;
  res.eps_pa = ep;
  res.cause = bracket.cause;
  return res;
}

}  // namespace satkey
