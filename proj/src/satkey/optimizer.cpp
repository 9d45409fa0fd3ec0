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
#include <vector>

#include "satkey/errors.hpp"

namespace satkey {

namespace {

constexpr int kGridPoints = 60;
constexpr int kZoomRounds = 3;
constexpr double kGridFloor = 1e-15;

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(static_cast<size_t>(n));
  double llo = std::log10(lo);
  double lhi = std::log10(hi);
  for (int i = 0; i < n; ++i)
    g[static_cast<size_t>(i)] =
        std::pow(10.0, llo + (lhi - llo) * i / static_cast<double>(n - 1));
  return g;
}

}  // namespace

EpsilonSplit optimize_epsilons(const std::function<double(double, double)>& key_length_fn,
                               double eps_total, double eps_ec) {
  if (!(eps_total > eps_ec))
    throw Error(ErrorCode::kInfeasible, "epsilon budget requires eps_total > eps_EC");
  double eps_free = eps_total - eps_ec;
  if (eps_free <= kGridFloor)
    throw Error(ErrorCode::kInfeasible, "epsilon budget leaves no room above the grid floor");

  auto feasible = [&](double eb, double ep) {
    return eb > ep && ep >= 0.0 && eb + ep <= eps_free && eb < 1.0 - eps_ec;
  };

  EpsilonSplit best;
  bool have_best = false;
  auto consider = [&](double eb, double ep) {
    if (!feasible(eb, ep)) return;
    double L = key_length_fn(eb, ep);
    if (!have_best || L > best.key_bits ||
        (L == best.key_bits &&
         (eb < best.eps_bar || (eb == best.eps_bar && ep < best.eps_pa)))) {
      best = EpsilonSplit{eb, ep, L};
      have_best = true;
    }
  };

  double lo_b = kGridFloor, hi_b = eps_free;
  double lo_p = kGridFloor, hi_p = eps_free;
  for (int round = 0; round <= kZoomRounds; ++round) {
    for (double eb : log_grid(lo_b, hi_b, kGridPoints))
      for (double ep : log_grid(lo_p, hi_p, kGridPoints)) consider(eb, ep);

    if (!have_best)
      throw Error(ErrorCode::kInfeasible, "no feasible epsilon split on the grid");

    if (round == 0 && best.key_bits <= 0.0) {
      // Flat-zero objective: report the least-penalizing corner instead of
      // zooming into an arbitrary point.
      EpsilonSplit corner;
      bool have_corner = false;
      for (double eb : log_grid(lo_b, hi_b, kGridPoints)) {
        for (double ep : log_grid(lo_p, hi_p, kGridPoints)) {
          if (!feasible(eb, ep)) continue;
          if (!have_corner || eb > corner.eps_bar ||
              (eb == corner.eps_bar && ep > corner.eps_pa)) {
            corner = EpsilonSplit{eb, ep, 0.0};
            have_corner = true;
          }
        }
      }
      return corner;
    }

    // 10x zoom of the log-space window around the incumbent.
    double span_b = (std::log10(hi_b) - std::log10(lo_b)) / 10.0;
    double span_p = (std::log10(hi_p) - std::log10(lo_p)) / 10.0;
    lo_b = std::max(kGridFloor, best.eps_bar * std::pow(10.0, -span_b / 2.0));
    hi_b = std::min(eps_free, best.eps_bar * std::pow(10.0, span_b / 2.0));
    lo_p = std::max(kGridFloor, best.eps_pa * std::pow(10.0, -span_p / 2.0));
    hi_p = std::min(eps_free, best.eps_pa * std::pow(10.0, span_p / 2.0));
  }
  return best;
}

}  // namespace satkey
