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
// Scenario configuration (sectioned key = value files plus built-ins),
// channel-loss sweeps and the machine-readable CSV table they produce.

#ifndef SATKEY_SCENARIO_HPP
#define SATKEY_SCENARIO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "satkey/keyrate_wcp.hpp"
#include "satkey/monte_carlo.hpp"

namespace satkey {

enum class RunMode { kAnalytic, kMonteCarlo, kBoth };

struct SweepSpec {
  double start_db = 20.0;
  double stop_db = 40.0;
  double step_db = 0.25;

  void validate() const;  // start <= stop, step > 0
  std::vector<double> points() const;
};

struct Scenario {
  std::string name;
  std::string description;
  mc::SourceModel source;
  ChannelSpec channel;
  ReceiverSpec receiver;
  FiniteKeyParams params;
  FluctuationBound bound = FluctuationBound::kNormalQuantile;
  SweepSpec sweep;
  RunMode mode = RunMode::kAnalytic;
  std::uint64_t seed = 42;
  std::uint64_t mc_slots = 10'000'000;

  double rep_rate_hz() const;
  void validate() const;
};

// One row of a sweep table. Fields that do not apply to a source type
// (qber_adjusted for decoy, e1_upper for single-photon) are NaN and emitted
// as blank CSV fields.
struct SweepRow {
  double loss_db = 0.0;
  double key_bits = 0.0;
  double n_sent = 0.0;
  double n_detected = 0.0;
  double m_sifted = 0.0;
  double qber = 0.0;
  double qber_adjusted = 0.0;
  double correction = 0.0;  // A or Q1_L
  double e1_upper = 0.0;
  double delta = 0.0;
  double eps_bar = 0.0;
  double eps_pa = 0.0;
  std::string zero_key_cause;
};

// Built-in scenarios covering the reference comparison curves.
std::vector<std::string> builtin_scenario_names();
Scenario builtin_scenario(const std::string& name);

// Parses and validates a scenario file; diagnostics carry line numbers.
Scenario load_scenario(const std::string& path);

// Builtin name first, then filesystem path.
Scenario resolve_scenario(const std::string& name_or_path);

// Analytic single-point evaluation at the given channel loss.
KeyRateResult evaluate_analytic(const Scenario& scenario, double loss_db);

// Monte Carlo single-point evaluation (seed offset decorrelates sweep points).
KeyRateResult evaluate_monte_carlo(const Scenario& scenario, double loss_db,
                                   std::uint64_t seed);

// One row per sweep point, in loss order; rows never abort the sweep, zero
// key carries a cause flag. Points are evaluated in parallel.
std::vector<SweepRow> run_sweep(const Scenario& scenario, RunMode mode);

std::string to_csv(const std::vector<SweepRow>& rows);
std::vector<SweepRow> parse_csv(const std::string& text);

// Writes the table to path (overwrite). I/O failures name the path.
void emit_csv(const std::vector<SweepRow>& rows, const std::string& path);

}  // namespace satkey

#endif  // SATKEY_SCENARIO_HPP
