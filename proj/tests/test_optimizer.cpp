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

#include "satkey/optimizer.hpp"

#include <cmath>

#include "doctest.h"
#include "satkey/errors.hpp"
#include "satkey/keyrate_qd.hpp"
#include "satkey/link_model.hpp"
#include "satkey/rng.hpp"
#include "satkey/source_models.hpp"

using namespace satkey;

namespace {
constexpr double kEpsTotal = 1e-9;
constexpr double kEpsEc = 1e-10;
}  // namespace

TEST_CASE("constant objective returns a feasible point") {
  EpsilonSplit s = optimize_epsilons([](double, double) { return 42.0; },
                                     kEpsTotal, kEpsEc);
  CHECK(s.key_bits == 42.0);
  CHECK(s.eps_bar > s.eps_pa);
  CHECK(s.eps_pa >= 0.0);
  CHECK(s.eps_bar + s.eps_pa <= kEpsTotal - kEpsEc);
  CHECK(s.eps_bar < 1.0 - kEpsEc);
}

TEST_CASE("penalty-only objective pushes epsilons up") {
  auto objective = [](double eb, double ep) {
    return -finite_size_delta(1e6, eb, ep, kEpsEc);
  };
  EpsilonSplit s = optimize_epsilons(objective, kEpsTotal, kEpsEc);
  // Reference point: equal split of the free budget.
  double half = (kEpsTotal - kEpsEc) / 2.0;
  double at_equal_split = finite_size_delta(1e6, half, half, kEpsEc);
  CHECK(-s.key_bits <= at_equal_split);
}

TEST_CASE("optimizer dominates the naive split on full scenarios") {
  Xoshiro256pp rng(99);
  int done = 0;
  while (done < 10) {
    double loss_db = 15.0 + 15.0 * rng.next_double();
    double r = 0.01 + 0.39 * rng.next_double();

    ChannelSpec ch;
    ch.loss_db = loss_db;
    ReceiverSpec rx;
    auto dist = qd_distribution(r, 4.5e-6);
    SlotStatistics st = qd_slot_statistics(dist, ch, rx, 76.4e6);
    PassCounts counts = pass_counts(76.4e6, 100.0, 0.5, st.p_det);
    QdKeyInput in;
    in.n = counts.n_detected;
    in.m = counts.m_sifted;
    in.qber = st.qber;
    in.p_det = st.p_det;
    in.pm = 4.5e-6;

    FiniteKeyParams optimized;
    KeyRateResult best = qd_key_length(in, optimized);

    FiniteKeyParams naive;
    naive.eps_bar = (kEpsTotal - kEpsEc) / 2.0 * (1.0 + 1e-6);
    naive.eps_pa = (kEpsTotal - kEpsEc) / 2.0 * (1.0 - 1e-6);
    KeyRateResult ref = qd_key_length(in, naive);

    CHECK(best.key_bits >= ref.key_bits);
    ++done;
  }
}

TEST_CASE("determinism") {
  auto objective = [](double eb, double ep) {
    return -finite_size_delta(2.5e5, eb, ep, kEpsEc);
  };
  EpsilonSplit a = optimize_epsilons(objective, kEpsTotal, kEpsEc);
  EpsilonSplit b = optimize_epsilons(objective, kEpsTotal, kEpsEc);
  CHECK(a.eps_bar == b.eps_bar);
  CHECK(a.eps_pa == b.eps_pa);
  CHECK(a.key_bits == b.key_bits);
}

TEST_CASE("flat zero objective returns the least penalizing corner") {
  EpsilonSplit s = optimize_epsilons([](double, double) { return 0.0; },
                                     kEpsTotal, kEpsEc);
  CHECK(s.key_bits == 0.0);
  CHECK(s.eps_bar > s.eps_pa);
  // Corner: the budget is nearly exhausted.
  CHECK(s.eps_bar + s.eps_pa > 0.5 * (kEpsTotal - kEpsEc));
}

TEST_CASE("infeasible budget") {
  CHECK_THROWS_AS(
      optimize_epsilons([](double, double) { return 1.0; }, 1e-10, 1e-10), Error);
  try {
    optimize_epsilons([](double, double) { return 1.0; }, 1e-10, 1e-10);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInfeasible);
  }
}
