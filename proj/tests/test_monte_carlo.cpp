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

#include "satkey/monte_carlo.hpp"

#include <cmath>

#include "doctest.h"
#include "satkey/errors.hpp"
#include "satkey/scenario.hpp"

using namespace satkey;
using namespace satkey::mc;

namespace {

// 5 binomial standard errors around the expected count.
bool within_sigma(double observed, double n, double p, double sigmas) {
  double sd = std::sqrt(n * p * (1.0 - p));
  return std::abs(observed - n * p) <= sigmas * std::max(sd, 1.0);
}

SimConfig qd_config(double loss_db, std::uint64_t slots, std::uint64_t seed) {
  SimConfig cfg;
  cfg.seed = seed;
  cfg.num_slots = slots;
  cfg.source = QdSourceSpec::from_internal_loss(76.4e6, 15.0, kQdPmQuoted);
  cfg.channel.loss_db = loss_db;
  return cfg;
}

}  // namespace

TEST_CASE("reproducibility: identical seed and config, identical tallies") {
  SimConfig cfg = qd_config(20.0, 9'000'000, 42);  // spans multiple chunks
  SimOutcome a = simulate_pass(cfg);
  SimOutcome b = simulate_pass(cfg);
  CHECK(a.detected_slots == b.detected_slots);
  CHECK(a.sifted == b.sifted);
  CHECK(a.errors == b.errors);
  CHECK(a.double_clicks == b.double_clicks);
  CHECK(a.detections_per_detector == b.detections_per_detector);

  SimConfig other = cfg;
  other.seed = 43;
  SimOutcome c = simulate_pass(other);
  CHECK(a.detected_slots != c.detected_slots);
}

TEST_CASE("serial and parallel chunk execution tally identically") {
  SimConfig cfg = qd_config(20.0, 13'000'000, 2026);  // four chunks
  cfg.max_threads = 1;
  SimOutcome serial = simulate_pass(cfg);
  cfg.max_threads = 4;
  SimOutcome parallel = simulate_pass(cfg);
  CHECK(serial.detected_slots == parallel.detected_slots);
  CHECK(serial.sifted == parallel.sifted);
  CHECK(serial.errors == parallel.errors);
  CHECK(serial.double_clicks == parallel.double_clicks);
  CHECK(serial.detections_per_detector == parallel.detections_per_detector);
}

TEST_CASE("opaque channel: no clicks at all") {
  SimConfig cfg = qd_config(600.0, 200'000, 7);
  cfg.channel.background_rate_hz = 0.0;
  SimOutcome out = simulate_pass(cfg);
  CHECK(out.detected_slots == 0);
  CHECK(out.sifted == 0);
  CHECK(out.errors == 0);
}

TEST_CASE("ideal apparatus: half the slots sift, zero error") {
  SimConfig cfg;
  cfg.seed = 5;
  cfg.num_slots = 200'000;
  cfg.source = QdSourceSpec::from_brightness(76.4e6, 1.0, 0.0);
  cfg.channel.loss_db = 0.0;
  cfg.channel.background_rate_hz = 0.0;
  cfg.receiver.detector_efficiency = 1.0;
  cfg.receiver.optical_loss_db = 0.0;
  cfg.receiver.intrinsic_error = 0.0;
  SimOutcome out = simulate_pass(cfg);
  CHECK(out.detected_slots == cfg.num_slots);
  CHECK(within_sigma(static_cast<double>(out.sifted),
                     static_cast<double>(cfg.num_slots), 0.5, 5.0));
  CHECK(out.errors == 0);
  CHECK(out.observed_qber == 0.0);
}

TEST_CASE("pass statistics match the analytic link model within 5 sigma") {
  SimConfig cfg = qd_config(20.0, 10'000'000, 42);
  const auto& qd = std::get<QdSourceSpec>(cfg.source);
  SlotStatistics expect =
      qd_slot_statistics(qd.distribution(), cfg.channel, cfg.receiver, qd.rep_rate_hz);
  SimOutcome out = simulate_pass(cfg);

  double slots = static_cast<double>(cfg.num_slots);
  CHECK(within_sigma(static_cast<double>(out.detected_slots), slots, expect.p_det, 5.0));

  double e_sd = std::sqrt(expect.qber * (1.0 - expect.qber) /
                          static_cast<double>(out.sifted));
  CHECK(std::abs(out.observed_qber - expect.qber) <= 5.0 * e_sd);

  // Detector counts are symmetric across the four arms.
  for (auto d : out.detections_per_detector)
    CHECK(within_sigma(static_cast<double>(d), slots, expect.p_det / 4.0, 5.0));

  // Multi-photon and background are rare enough that triple clicks are
  // essentially absent at bench-scale statistics.
  CHECK(static_cast<double>(out.three_way_coincidences) <= 1e-9 * slots + 5.0);
}

TEST_CASE("hbt: no two-photon slots, no coincidences") {
  auto dist = PhotonNumberDistribution::make(0.9, 0.1, 0.0);
  HbtMeasurement m = simulate_hbt(dist, 0.5, 500'000, 0.0, 11);
  CHECK(m.n_coincident == 0);
  CHECK(m.n_solitary > 0);
}

TEST_CASE("hbt: pure two-photon source splits 50:50") {
  auto dist = PhotonNumberDistribution::make(0.0, 0.0, 1.0);
  HbtMeasurement m = simulate_hbt(dist, 1.0, 200'000, 0.0, 13);
  CHECK(m.n_coincident + m.n_solitary == m.n_slots);
  CHECK(within_sigma(static_cast<double>(m.n_coincident),
                     static_cast<double>(m.n_slots), 0.5, 5.0));
}

TEST_CASE("hbt statistics track the analytic C and S") {
  auto dist = PhotonNumberDistribution::make(1.0 - 0.033 - 1.2e-5, 0.033, 1.2e-5);
  double eta = 0.06;
  double c = coincidence_probability(dist, eta);
  double s = solitary_probability(dist, eta);
  std::uint64_t slots = 400'000'000;  // few hundred expected coincidences
  HbtMeasurement m = simulate_hbt(dist, eta, slots, 0.0, 17);
  CHECK(within_sigma(static_cast<double>(m.n_coincident),
                     static_cast<double>(slots), c, 5.0));
  CHECK(within_sigma(static_cast<double>(m.n_solitary),
                     static_cast<double>(slots), s, 5.0));

  // kappa lands within 3 relative standard errors of C/S.
  double kappa_hat = kappa_from_counts(m);
  double kappa = c / s;
  double sd = kappa * std::sqrt(1.0 / static_cast<double>(m.n_coincident) +
                                1.0 / static_cast<double>(m.n_solitary));
  CHECK(std::abs(kappa_hat - kappa) <= 3.0 * sd);
}

TEST_CASE("recovered p2 sits within 3 standard errors") {
  double p1 = 0.03, p2 = 1e-5, eta = 0.06;
  auto dist = PhotonNumberDistribution::make(1.0 - p1 - p2, p1, p2);
  std::uint64_t slots = 600'000'000;
  HbtMeasurement m = simulate_hbt(dist, eta, slots, 0.0, 23);
  double kappa_hat = kappa_from_counts(m);
  double p2_hat = p2_from_kappa(kappa_hat, eta, p1);
  double sd_rel = std::sqrt(1.0 / static_cast<double>(m.n_coincident) +
                            1.0 / static_cast<double>(m.n_solitary));
  CHECK(std::abs(p2_hat - p2) <= 3.0 * p2 * sd_rel);
}

TEST_CASE("empirical pipeline: ideal source yields key, dead channel does not") {
  SimConfig ideal;
  ideal.seed = 3;
  ideal.num_slots = 1'000'000;
  ideal.source = QdSourceSpec::from_brightness(76.4e6, 1.0, 0.0);
  ideal.channel.loss_db = 0.0;
  ideal.channel.background_rate_hz = 0.0;
  ideal.receiver.detector_efficiency = 1.0;
  ideal.receiver.optical_loss_db = 0.0;
  ideal.receiver.intrinsic_error = 0.0;
  FiniteKeyParams params;
  CHECK(empirical_key_pipeline(ideal, params).key_bits > 0.0);

  // Past the loss tolerance of the 15 dB-internal-loss device.
  SimConfig dead = qd_config(30.0, 4'000'000, 9);
  KeyRateResult r = empirical_key_pipeline(dead, params);
  CHECK(r.key_bits == 0.0);
  CHECK(r.cause != ZeroKeyCause::kNone);
}

TEST_CASE("empirical and analytic key lengths agree at 20 dB") {
  FiniteKeyParams params;
  Scenario scenario = builtin_scenario("qd76-15db");
  double analytic = evaluate_analytic(scenario, 20.0).key_bits;
  REQUIRE(analytic > 0.0);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    // 3e8 slots keep the sampled-QBER noise well inside the 10% band.
    SimConfig cfg = qd_config(20.0, 300'000'000, seed);
    double empirical = empirical_key_pipeline(cfg, params).key_bits;
    CHECK(std::abs(empirical - analytic) / analytic < 0.10);
  }
}

TEST_CASE("wcp empirical pipeline approaches the analytic value") {
  Scenario scenario = builtin_scenario("wcp76");
  double analytic = evaluate_analytic(scenario, 18.0).key_bits;
  REQUIRE(analytic > 0.0);

  SimConfig cfg;
  cfg.seed = 31;
  cfg.num_slots = 30'000'000;
  cfg.source = std::get<WcpSourceSpec>(scenario.source);
  cfg.channel = scenario.channel;
  cfg.channel.loss_db = 18.0;
  cfg.receiver = scenario.receiver;
  KeyRateResult r = empirical_key_pipeline(cfg, scenario.params);
  CHECK(r.key_bits > 0.0);
  CHECK(std::abs(r.key_bits - analytic) / analytic < 0.25);
}

TEST_CASE("double-click policy switch") {
  // A bright two-photon source, no errors: discarding double clicks must
  // never sift more than assigning them.
  SimConfig cfg;
  cfg.seed = 77;
  cfg.num_slots = 300'000;
  cfg.source = QdSourceSpec::from_brightness(76.4e6, 1.0, 1.0);  // always 2 photons
  cfg.channel.loss_db = 0.0;
  cfg.channel.background_rate_hz = 0.0;
  cfg.receiver.detector_efficiency = 1.0;
  cfg.receiver.optical_loss_db = 0.0;
  // A large intrinsic error makes same-basis double clicks common.
  cfg.receiver.intrinsic_error = 0.25;

  cfg.double_click = DoubleClickPolicy::kRandomAssign;
  SimOutcome assign = simulate_pass(cfg);
  cfg.double_click = DoubleClickPolicy::kDiscard;
  SimOutcome discard = simulate_pass(cfg);
  CHECK(assign.sifted > discard.sifted);
  CHECK(assign.double_clicks > 0);
}

TEST_CASE("invalid configs are rejected") {
  SimConfig cfg = qd_config(20.0, 0, 1);
  CHECK_THROWS_AS(simulate_pass(cfg), Error);
  auto dist = PhotonNumberDistribution::make(0.9, 0.1, 0.0);
  CHECK_THROWS_AS(simulate_hbt(dist, 0.0, 100, 0.0, 1), Error);
  CHECK_THROWS_AS(simulate_hbt(dist, 0.5, 0, 0.0, 1), Error);
}
