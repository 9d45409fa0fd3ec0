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

#include "satkey.h"

#include <cstdio>
#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "satkey/errors.hpp"
#include "satkey/monte_carlo.hpp"
#include "satkey/scenario.hpp"
#include "satkey/source_models.hpp"

struct sk_scenario {
  satkey::Scenario impl;
};

struct sk_sweep {
  std::vector<satkey::SweepRow> rows;
};

namespace {

thread_local std::string g_last_error;

sk_status set_error(const satkey::Error& e) {
  g_last_error = e.what();
  return static_cast<sk_status>(static_cast<int>(e.code()));
}

sk_status set_error(const std::exception& e) {
  g_last_error = e.what();
  return SK_ERR_INTERNAL;
}

template <typename Fn>
sk_status guarded(Fn&& fn) {
  try {
    fn();
    return SK_OK;
  } catch (const satkey::Error& e) {
    return set_error(e);
  } catch (const std::bad_alloc& e) {
    return set_error(e);
  } catch (const std::exception& e) {
    return set_error(e);
  }
}

sk_status require(bool ok, const char* message) {
  if (ok) return SK_OK;
  g_last_error = message;
  return SK_ERR_INVALID_ARGUMENT;
}

satkey::RunMode to_run_mode(sk_run_mode mode) {
  switch (mode) {
    case SK_MODE_ANALYTIC: return satkey::RunMode::kAnalytic;
    case SK_MODE_MONTE_CARLO: return satkey::RunMode::kMonteCarlo;
    case SK_MODE_BOTH: return satkey::RunMode::kBoth;
  }
  throw satkey::Error(satkey::ErrorCode::kInvalidArgument, "bad run mode");
}

void fill_row(const satkey::SweepRow& src, sk_sweep_row* dst) {
  dst->loss_db = src.loss_db;
  dst->key_bits = src.key_bits;
  dst->n_sent = src.n_sent;
  dst->n_detected = src.n_detected;
  dst->m_sifted = src.m_sifted;
  dst->qber = src.qber;
  dst->qber_adjusted = src.qber_adjusted;
  dst->correction_a_or_q1l = src.correction;
  dst->e1_upper = src.e1_upper;
  dst->delta = src.delta;
  dst->eps_bar = src.eps_bar;
  dst->eps_pa = src.eps_pa;
  std::snprintf(dst->zero_key_cause, sizeof(dst->zero_key_cause), "%s",
                src.zero_key_cause.c_str());
}

satkey::SweepRow row_from_key_result(double loss_db, const satkey::KeyRateResult& r) {
  satkey::SweepRow row;
  row.loss_db = loss_db;
  row.key_bits = r.key_bits;
  row.n_sent = r.n_sent;
  row.n_detected = r.n_detected;
  row.m_sifted = r.m_sifted;
  row.qber = r.qber;
  row.qber_adjusted = r.qber_adjusted;
  row.correction = r.correction;
  row.e1_upper = r.e1_upper;
  row.delta = r.delta;
  row.eps_bar = r.eps_bar;
  row.eps_pa = r.eps_pa;
  row.zero_key_cause = satkey::to_string(r.cause);
  return row;
}

}  // namespace

extern "C" {

const char* sk_version(void) { return "1.0.0"; }

const char* sk_last_error(void) { return g_last_error.c_str(); }

size_t sk_builtin_count(void) { return satkey::builtin_scenario_names().size(); }

const char* sk_builtin_name(size_t index) {
  static thread_local std::string name;
  auto names = satkey::builtin_scenario_names();
  if (index >= names.size()) return nullptr;
  name = names[index];
  return name.c_str();
}

const char* sk_builtin_description(size_t index) {
  static thread_local std::string desc;
  auto names = satkey::builtin_scenario_names();
  if (index >= names.size()) return nullptr;
  desc = satkey::builtin_scenario(names[index]).description;
  return desc.c_str();
}

sk_status sk_scenario_builtin(const char* name, sk_scenario** out) {
  sk_status pre = require(name && out, "name and out must be non-null");
  if (pre != SK_OK) return pre;
  return guarded([&] { *out = new sk_scenario{satkey::builtin_scenario(name)}; });
}

sk_status sk_scenario_load(const char* path, sk_scenario** out) {
  sk_status pre = require(path && out, "path and out must be non-null");
  if (pre != SK_OK) return pre;
  return guarded([&] { *out = new sk_scenario{satkey::load_scenario(path)}; });
}

sk_status sk_scenario_resolve(const char* name_or_path, sk_scenario** out) {
  sk_status pre = require(name_or_path && out, "name_or_path and out must be non-null");
  if (pre != SK_OK) return pre;
  return guarded(
      [&] { *out = new sk_scenario{satkey::resolve_scenario(name_or_path)}; });
}

void sk_scenario_free(sk_scenario* scenario) { delete scenario; }

const char* sk_scenario_name(const sk_scenario* scenario) {
  return scenario ? scenario->impl.name.c_str() : nullptr;
}

sk_run_mode sk_scenario_mode(const sk_scenario* scenario) {
  if (!scenario) return SK_MODE_ANALYTIC;
  switch (scenario->impl.mode) {
    case satkey::RunMode::kAnalytic: return SK_MODE_ANALYTIC;
    case satkey::RunMode::kMonteCarlo: return SK_MODE_MONTE_CARLO;
    case satkey::RunMode::kBoth: return SK_MODE_BOTH;
  }
  return SK_MODE_ANALYTIC;
}

sk_status sk_scenario_set_seed(sk_scenario* scenario, uint64_t seed) {
  sk_status pre = require(scenario != nullptr, "scenario must be non-null");
  if (pre != SK_OK) return pre;
  scenario->impl.seed = seed;
  return SK_OK;
}

sk_status sk_scenario_set_mc_slots(sk_scenario* scenario, uint64_t slots) {
  sk_status pre = require(scenario != nullptr, "scenario must be non-null");
  if (pre != SK_OK) return pre;
  sk_status ok = require(slots >= 1, "mc_slots must be >= 1");
  if (ok != SK_OK) return ok;
  scenario->impl.mc_slots = slots;
  return SK_OK;
}

sk_status sk_run_sweep(const sk_scenario* scenario, sk_run_mode mode,
                       sk_sweep** out) {
  sk_status pre = require(scenario && out, "scenario and out must be non-null");
  if (pre != SK_OK) return pre;
  return guarded([&] {
    *out = new sk_sweep{satkey::run_sweep(scenario->impl, to_run_mode(mode))};
  });
}

size_t sk_sweep_size(const sk_sweep* sweep) { return sweep ? sweep->rows.size() : 0; }

sk_status sk_sweep_row_at(const sk_sweep* sweep, size_t index, sk_sweep_row* out) {
  sk_status pre = require(sweep && out, "sweep and out must be non-null");
  if (pre != SK_OK) return pre;
  sk_status in_range = require(index < sweep->rows.size(), "row index out of range");
  if (in_range != SK_OK) return in_range;
  fill_row(sweep->rows[index], out);
  return SK_OK;
}

sk_status sk_sweep_write_csv(const sk_sweep* sweep, const char* path) {
  sk_status pre = require(sweep && path, "sweep and path must be non-null");
  if (pre != SK_OK) return pre;
  return guarded([&] { satkey::emit_csv(sweep->rows, path); });
}

void sk_sweep_free(sk_sweep* sweep) { delete sweep; }

sk_status sk_evaluate(const sk_scenario* scenario, sk_run_mode mode,
                      double loss_db, sk_sweep_row* out) {
  sk_status pre = require(scenario && out, "scenario and out must be non-null");
  if (pre != SK_OK) return pre;
  return guarded([&] {
    satkey::KeyRateResult r =
        to_run_mode(mode) == satkey::RunMode::kAnalytic
            ? satkey::evaluate_analytic(scenario->impl, loss_db)
            : satkey::evaluate_monte_carlo(scenario->impl, loss_db,
                                           scenario->impl.seed);
    fill_row(row_from_key_result(loss_db, r), out);
  });
}

sk_status sk_simulate_hbt(double p1, double p2, double eta, double dark_prob,
                          uint64_t num_slots, uint64_t seed, sk_hbt_result* out) {
  sk_status pre = require(out != nullptr, "out must be non-null");
  if (pre != SK_OK) return pre;
  return guarded([&] {
    auto dist = satkey::PhotonNumberDistribution::make(1.0 - p1 - p2, p1, p2);
    satkey::HbtMeasurement m =
        satkey::mc::simulate_hbt(dist, eta, num_slots, dark_prob, seed);
    out->n_coincident = m.n_coincident;
    out->n_solitary = m.n_solitary;
    out->n_slots = m.n_slots;
    out->kappa = satkey::kappa_from_counts(m);
    out->p2_recovered = satkey::p2_from_kappa(out->kappa, eta, p1);
    out->pm_bound = satkey::multiphoton_bound(out->kappa, eta, p1 + p2);
  });
}

sk_status sk_multiphoton_bound(double kappa, double eta, double r, double* out) {
  sk_status pre = require(out != nullptr, "out must be non-null");
  if (pre != SK_OK) return pre;
  return guarded([&] { *out = satkey::multiphoton_bound(kappa, eta, r); });
}

}  // extern "C"
