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

#ifndef SATKEY_OPTIMIZER_HPP
#define SATKEY_OPTIMIZER_HPP

#include <functional>

namespace satkey {

struct EpsilonSplit {
  double eps_bar = 0.0;
  double eps_pa = 0.0;
  double key_bits = 0.0;
};

// Maximizes key_length_fn(eps_bar, eps_pa) over the feasible region
//   eps_bar > eps_pa >= grid floor,  eps_bar + eps_pa <= eps_total - eps_ec,
//   eps_bar < 1 - eps_ec,
// by a deterministic logarithmic grid search (60 x 60 points over
// [1e-15, eps_total - eps_ec]) followed by three rounds of 10x zoom around
// the incumbent. Ties break toward the smallest eps_bar, then eps_pa.
// If every feasible point yields zero key, returns the least-penalizing
// corner (largest feasible epsilons) with key_bits = 0.
//
// The objective must be deterministic; evaluation order never affects the
// returned incumbent.
EpsilonSplit optimize_epsilons(const std::function<double(double, double)>& key_length_fn,
                               double eps_total, double eps_ec);

}  // namespace satkey

#endif  // SATKEY_OPTIMIZER_HPP
