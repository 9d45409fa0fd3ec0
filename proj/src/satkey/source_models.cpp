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

#include "satkey/source_models.hpp"

#include <cmath>
#include <string>

#include "satkey/errors.hpp"
#include "satkey/numeric.hpp"

namespace satkey {

namespace {
constexpr double kSumSlack = 1e-12;
constexpr double kRCouplingTol = 1e-9;
}  // namespace

PhotonNumberDistribution PhotonNumberDistribution::make(double p0, double p1,
                                                        double p2) {
  for (double p : {p0, p1, p2}) {
    if (!(p >= 0.0 && p <= 1.0))
      throw Error(ErrorCode::kInvalidArgument,
                  "photon-number probabilities must lie in [0,1]");
  }
  if (p0 + p1 + p2 > 1.0 + kSumSlack)
    throw Error(ErrorCode::kInvalidArgument,
                "photon-number probabilities exceed 1 beyond the declared tail slack");
  return PhotonNumberDistribution{p0, p1, p2};
}

QdSourceSpec QdSourceSpec::from_internal_loss(double rep_rate_hz, double loss_db,
                                              double pm) {
  if (rep_rate_hz <= 0.0)
    throw Error(ErrorCode::kInvalidArgument, "rep_rate must be positive");
  double r = loss_db_to_linear(loss_db);
  if (!(pm >= 0.0 && pm <= r))
    throw Error(ErrorCode::kInconsistent, "require 0 <= Pm <= R");
  return QdSourceSpec{rep_rate_hz, loss_db, r, pm};
}

QdSourceSpec QdSourceSpec::from_brightness(double rep_rate_hz, double r,
                                           double pm) {
  if (rep_rate_hz <= 0.0)
    throw Error(ErrorCode::kInvalidArgument, "rep_rate must be positive");
  if (!(r > 0.0 && r <= 1.0))
    throw Error(ErrorCode::kInvalidArgument, "R must lie in (0,1]");
  if (!(pm >= 0.0 && pm <= r))
    throw Error(ErrorCode::kInconsistent, "require 0 <= Pm <= R");
  return QdSourceSpec{rep_rate_hz, -10.0 * std::log10(r), r, pm};
}

PhotonNumberDistribution QdSourceSpec::distribution() const {
  // Cross-check the definitional coupling R = 10^(-loss/10) before use.
  if (std::abs(r - loss_db_to_linear(internal_loss_db)) > kRCouplingTol)
    throw Error(ErrorCode::kInconsistent,
                "R and internal_loss_db disagree beyond 1e-9");
  return qd_distribution(r, pm);
}

void WcpSourceSpec::validate() const {
  if (rep_rate_hz <= 0.0)
    throw Error(ErrorCode::kInvalidArgument, "rep_rate must be positive");
  if (!(nu >= 0.0 && nu < mu))
    throw Error(ErrorCode::kInvalidArgument, "require 0 <= nu < mu");
  if (!(k_mu > 0.0 && k_mu <= 1.0))
    throw Error(ErrorCode::kInvalidArgument, "require 0 < K_mu <= 1");
}

void HbtMeasurement::validate() const {
  if (!(n_coincident <= n_solitary && n_solitary <= n_slots))
    throw Error(ErrorCode::kInvalidArgument, "require N_C <= N_S <= N");
  if (!(eta > 0.0 && eta <= 1.0))
    throw Error(ErrorCode::kInvalidArgument, "eta must lie in (0,1]");
}

PoissonPmf poisson_distribution(double mu, int n_max) {
  if (mu < 0.0)
    throw Error(ErrorCode::kDomain, "mean photon number must be >= 0");
  if (n_max < 2)
    throw Error(ErrorCode::kInvalidArgument, "n_max must be >= 2");
  PoissonPmf pmf;
  pmf.p.resize(static_cast<size_t>(n_max) + 1);
  double term = std::exp(-mu);
  double sum = 0.0;
  for (int i = 0; i <= n_max; ++i) {
    pmf.p[static_cast<size_t>(i)] = term;
    sum += term;
    term *= mu / static_cast<double>(i + 1);
  }
  pmf.tail = 1.0 - sum;
  if (pmf.tail < 0.0) pmf.tail = 0.0;
  return pmf;
}

PhotonNumberDistribution qd_distribution(double r, double pm) {
  if (!(r >= 0.0 && r <= 1.0))
    throw Error(ErrorCode::kInvalidArgument, "R must lie in [0,1]");
  if (!(pm >= 0.0))
    throw Error(ErrorCode::kInvalidArgument, "Pm must be >= 0");
  if (pm > r)
    throw Error(ErrorCode::kInconsistent,
                "multi-photon bound exceeds non-empty-pulse probability");
  return PhotonNumberDistribution::make(1.0 - r, r - pm, pm);
}

namespace {
void check_eta(double eta) {
  if (!(eta > 0.0 && eta <= 1.0))
    throw Error(ErrorCode::kInvalidArgument, "eta must lie in (0,1]");
}
}  // namespace

double coincidence_probability(const PhotonNumberDistribution& dist, double eta) {
  check_eta(eta);
  return 0.5 * dist.p2 * eta * eta;
}

double solitary_probability(const PhotonNumberDistribution& dist, double eta) {
  check_eta(eta);
  return dist.p1 * eta + dist.p2 * eta * (1.5 - eta);
}

double multiphoton_bound(double kappa, double eta, double r) {
  check_eta(eta);
  if (kappa < 0.0)
    throw Error(ErrorCode::kInvalidArgument, "kappa must be >= 0");
  double denom = eta - 3.0 * kappa + 2.0 * kappa * eta;
  if (denom <= 0.0)
    throw Error(ErrorCode::kEstimatorInvalid,
                "kappa too large for this eta: estimator denominator <= 0 "
                "(kappa = " + std::to_string(kappa) + ", eta = " + std::to_string(eta) + ")");
  return 2.0 * kappa * r / denom;
}

double p2_from_kappa(double kappa, double eta, double p1) {
  return multiphoton_bound(kappa, eta, p1);
}

double kappa_from_counts(const HbtMeasurement& m) {
  m.validate();
  if (m.n_solitary == 0)
    throw Error(ErrorCode::kInsufficientData,
                "no solitary clicks recorded; kappa undefined");
  return static_cast<double>(m.n_coincident) / static_cast<double>(m.n_solitary);
}

}  // namespace satkey
