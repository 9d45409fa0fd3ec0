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
// Pulse-level stochastic oracle for the analytic link and key-rate models:
// slot-by-slot QKD pass simulation (detections, sifting, QBER) and HBT bench
// simulation (coincidence/solitary counts), chunk-parallel with per-chunk
// derived seeds so serial and parallel runs tally identically.

#ifndef SATKEY_MONTE_CARLO_HPP
#define SATKEY_MONTE_CARLO_HPP

#include <array>
#include <cstdint>
#include <variant>

#include "satkey/keyrate_qd.hpp"
#include "satkey/keyrate_wcp.hpp"
#include "satkey/link_model.hpp"
#include "satkey/source_models.hpp"

namespace satkey {
namespace mc {

enum class DoubleClickPolicy {
  kRandomAssign,  // squash same-basis double clicks to a random bit
  kDiscard,
};

using SourceModel = std::variant<QdSourceSpec, WcpSourceSpec>;

struct SimConfig {
  std::uint64_t seed = 1;
  std::uint64_t num_slots = 1'000'000;
  SourceModel source;
  ChannelSpec channel;
  ReceiverSpec receiver;
  DoubleClickPolicy double_click = DoubleClickPolicy::kRandomAssign;
  unsigned max_threads = 0;  // 0 = hardware concurrency; tallies are
                             // identical for any value

  void validate() const;
};

struct SimOutcome {
  std::array<std::uint64_t, 4> detections_per_detector{};
  std::uint64_t detected_slots = 0;  // slots with at least one click
  std::uint64_t double_clicks = 0;   // slots with two or more clicks
  std::uint64_t three_way_coincidences = 0;
  std::uint64_t sifted = 0;
  std::uint64_t errors = 0;
  double observed_qber = 0.0;

  // Per-intensity tallies; only the signal entries are populated for the
  // single-photon source.
  std::uint64_t sent_signal = 0, sent_decoy = 0;
  std::uint64_t detected_signal = 0, detected_decoy = 0;
  std::uint64_t sifted_signal = 0, sifted_decoy = 0;
  std::uint64_t errors_signal = 0, errors_decoy = 0;

  SimOutcome& operator+=(const SimOutcome& other);
};

// Simulates one slot per pulse: photon number from the source statistics,
// independent survival at eta_tot, passive basis choice, polarization
// analysis with wrong-detector probability e_d, per-detector background and
// dark clicks. Reproducible: identical (seed, config) gives identical
// tallies, serial or parallel.
SimOutcome simulate_pass(const SimConfig& cfg);

// Two-detector beam-splitter bench: each photon is detected with
// probability eta and routed to either APD with probability 1/2; photons of
// a two-photon slot are treated independently at the splitter. Slots are
// classified as coincident (both APDs click) or solitary (exactly one).
HbtMeasurement simulate_hbt(const PhotonNumberDistribution& dist, double eta,
                            std::uint64_t num_slots, double window_dark_prob,
                            std::uint64_t seed);

// Runs simulate_pass, derives (n, m, E) or decoy observables from the
// tallies, extrapolates the per-slot estimates to the configured pass
// length, and invokes the matching key-length operation.
KeyRateResult empirical_key_pipeline(const SimConfig& cfg,
                                     const FiniteKeyParams& params);

}  // namespace mc
}  // namespace satkey

#endif  // SATKEY_MONTE_CARLO_HPP
