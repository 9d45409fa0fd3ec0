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
// Command-line front end. Talks to the satkey shared library exclusively
// through its public C interface.
//
// Exit codes: 0 success, 2 configuration/usage error, 3 runtime error.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "satkey.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

int exit_code_for(sk_status status) {
  switch (status) {
    case SK_OK:
      return kExitOk;
    case SK_ERR_INVALID_ARGUMENT:
    case SK_ERR_INCONSISTENT:
    case SK_ERR_PARSE:
      return kExitConfig;
    default:
      return kExitRuntime;
  }
}

int fail(sk_status status, const char* where) {
  std::fprintf(stderr, "satkey: %s: %s\n", where, sk_last_error());
  return exit_code_for(status);
}

// Everything that goes wrong while assembling a scenario is the user's
// configuration, including an unreadable file.
int fail_config(const char* where) {
  std::fprintf(stderr, "satkey: %s: %s\n", where, sk_last_error());
  return kExitConfig;
}

void print_rows(const sk_sweep* sweep) {
  std::printf("%10s %16s %14s %10s %12s  %s\n", "loss_db", "key_bits", "qber",
              "A_or_Q1L", "delta", "cause");
  size_t n = sk_sweep_size(sweep);
  for (size_t i = 0; i < n; ++i) {
    sk_sweep_row row;
    if (sk_sweep_row_at(sweep, i, &row) != SK_OK) continue;
    std::printf("%10.2f %16.1f %14.6g %10.4f %12.6g  %s\n", row.loss_db,
                row.key_bits, row.qber, row.correction_a_or_q1l, row.delta,
                row.zero_key_cause);
  }
}

std::string with_suffix(const std::string& path, const char* tag) {
  size_t dot = path.rfind('.');
  if (dot == std::string::npos || path.find('/', dot) != std::string::npos)
    return path + tag;
  return path.substr(0, dot) + tag + path.substr(dot);
}

int run_command(const std::string& scenario_arg, const std::string& mode_arg,
                std::uint64_t seed, bool seed_set, const std::string& out_path) {
  sk_scenario* scenario = nullptr;
  sk_status st = sk_scenario_resolve(scenario_arg.c_str(), &scenario);
  if (st != SK_OK) return fail_config("loading scenario");
  if (seed_set) sk_scenario_set_seed(scenario, seed);

  sk_run_mode mode = sk_scenario_mode(scenario);
  if (mode_arg == "analytic") mode = SK_MODE_ANALYTIC;
  else if (mode_arg == "mc") mode = SK_MODE_MONTE_CARLO;
  else if (mode_arg == "both") mode = SK_MODE_BOTH;
  else if (!mode_arg.empty()) {
    std::fprintf(stderr, "satkey: unknown mode '%s'\n", mode_arg.c_str());
    sk_scenario_free(scenario);
    return kExitConfig;
  }

  struct Pass {
    sk_run_mode mode;
    const char* label;
    std::string out;
  };
  std::vector<Pass> passes;
  if (mode == SK_MODE_BOTH) {
    passes.push_back({SK_MODE_ANALYTIC, "analytic", out_path});
    passes.push_back(
        {SK_MODE_MONTE_CARLO, "monte-carlo",
         out_path.empty() ? out_path : with_suffix(out_path, ".mc")});
  } else {
    passes.push_back(
        {mode, mode == SK_MODE_ANALYTIC ? "analytic" : "monte-carlo", out_path});
  }

  int rc = kExitOk;
  for (const Pass& pass : passes) {
    sk_sweep* sweep = nullptr;
    st = sk_run_sweep(scenario, pass.mode, &sweep);
    if (st != SK_OK) {
      rc = fail(st, "running sweep");
      break;
    }
    std::printf("# scenario %s (%s)\n", sk_scenario_name(scenario), pass.label);
    print_rows(sweep);
    if (!pass.out.empty()) {
      st = sk_sweep_write_csv(sweep, pass.out.c_str());
      if (st != SK_OK) {
        rc = fail(st, "writing CSV");
        sk_sweep_free(sweep);
        break;
      }
      std::printf("# wrote %s\n", pass.out.c_str());
    }
    sk_sweep_free(sweep);
  }
  sk_scenario_free(scenario);
  return rc;
}

int list_command() {
  size_t n = sk_builtin_count();
  for (size_t i = 0; i < n; ++i)
    std::printf("%-12s %s\n", sk_builtin_name(i), sk_builtin_description(i));
  return kExitOk;
}

int hbt_command(double p1, double p2, double eta, double dark,
                std::uint64_t slots, std::uint64_t seed) {
  sk_hbt_result res;
  sk_status st = sk_simulate_hbt(p1, p2, eta, dark, slots, seed, &res);
  if (st != SK_OK) return fail(st, "hbt simulation");
  std::printf("n_slots       = %" PRIu64 "\n", res.n_slots);
  std::printf("n_coincident  = %" PRIu64 "\n", res.n_coincident);
  std::printf("n_solitary    = %" PRIu64 "\n", res.n_solitary);
  std::printf("kappa         = %.12g\n", res.kappa);
  std::printf("p2_recovered  = %.12g\n", res.p2_recovered);
  std::printf("pm_bound      = %.12g\n", res.pm_bound);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"satellite BB84 finite-size key estimation"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "evaluate a scenario loss sweep");
  std::string scenario_arg, mode_arg, out_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  run->add_option("--scenario", scenario_arg, "built-in name or scenario file path")
      ->required();
  run->add_option("--mode", mode_arg, "analytic | mc | both");
  auto* seed_opt = run->add_option("--seed", seed, "Monte Carlo master seed");
  run->add_option("--out", out_path, "CSV output path");

  // list-scenarios
  auto* list = app.add_subcommand("list-scenarios", "print built-in scenarios");

  // hbt
  auto* hbt = app.add_subcommand("hbt", "simulate a coincidence bench and bound Pm");
  double p1 = 0.033, p2 = 1.2e-5, eta = 0.06, dark = 0.0;
  std::uint64_t slots = 1000000, hbt_seed = 1;
  hbt->add_option("--p1", p1, "single-photon probability per slot")->required();
  hbt->add_option("--p2", p2, "two-photon probability per slot")->required();
  hbt->add_option("--eta", eta, "bench detection efficiency")->required();
  hbt->add_option("--dark", dark, "dark-count probability per APD per window");
  hbt->add_option("--slots", slots, "number of simulated slots")->required();
  hbt->add_option("--seed", hbt_seed, "random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  seed_set = seed_opt->count() > 0;
  if (run->parsed()) return run_command(scenario_arg, mode_arg, seed, seed_set, out_path);
  if (list->parsed()) return list_command();
  if (hbt->parsed()) return hbt_command(p1, p2, eta, dark, slots, hbt_seed);
  return kExitConfig;
}
