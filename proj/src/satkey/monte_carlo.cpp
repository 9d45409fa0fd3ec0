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

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <thread>
#include <vector>

#include "satkey/errors.hpp"
#include "satkey/rng.hpp"

namespace satkey {
namespace mc {

namespace {

constexpr std::uint64_t kChunkSlots = 1ULL << 22;
constexpr int kPoissonMax = 40;

// Detector layout: 0,1 carry bits 0,1 of basis 0; 2,3 of basis 1.
inline int detector_index(int basis, int bit) { return basis * 2 + bit; }

struct PoissonCdf {
  std::array<double, kPoissonMax + 1> cdf{};

  explicit PoissonCdf(double mu) {
    PoissonPmf pmf = poisson_distribution(mu, kPoissonMax);
    double acc = 0.0;
    for (int i = 0; i <= kPoissonMax; ++i) {
      acc += pmf.p[static_cast<size_t>(i)];
      cdf[static_cast<size_t>(i)] = acc;
    }
  }

  int sample(double u) const {
    for (int i = 0; i <= kPoissonMax; ++i)
      if (u < cdf[static_cast<size_t>(i)]) return i;
    return kPoissonMax;
  }
};

struct PassContext {
  bool is_qd = false;
  double p0 = 0.0, p01 = 0.0;  // QD photon-count CDF
  double k_mu = 1.0;
  PoissonCdf signal_cdf{0.0};
  PoissonCdf decoy_cdf{0.0};
  double eta = 0.0;
  double e_d = 0.0;
  double bg_per_detector = 0.0;
  double p_any_bg = 0.0;
  DoubleClickPolicy policy = DoubleClickPolicy::kRandomAssign;
};

// Number of detectors is fixed at four (two bases, two bits); the receiver
// spec's num_detectors only shapes the background budget.
void run_pass_chunk(const PassContext& ctx, Xoshiro256pp rng, std::uint64_t slots,
                    SimOutcome& out) {
  for (std::uint64_t s = 0; s < slots; ++s) {
    int photons;
    bool is_signal = true;
    if (ctx.is_qd) {
      double u = rng.next_double();
      photons = u < ctx.p0 ? 0 : (u < ctx.p01 ? 1 : 2);
      ++out.sent_signal;
    } else {
      is_signal = rng.next_double() < ctx.k_mu;
      if (is_signal)
        ++out.sent_signal;
      else
        ++out.sent_decoy;
      double u = rng.next_double();
      photons = is_signal ? ctx.signal_cdf.sample(u) : ctx.decoy_cdf.sample(u);
    }

    int alice_basis = -1;  // sampled on first use
    int alice_bit = 0;
    auto alice = [&]() {
      if (alice_basis < 0) {
        alice_basis = rng.bernoulli(0.5) ? 1 : 0;
        alice_bit = rng.bernoulli(0.5) ? 1 : 0;
      }
    };

    unsigned mask = 0;
    for (int k = 0; k < photons; ++k) {
      if (!rng.bernoulli(ctx.eta)) continue;
      alice();
      int bob_basis = rng.bernoulli(0.5) ? 1 : 0;
      int bit;
      if (bob_basis == alice_basis) {
        bit = rng.bernoulli(ctx.e_d) ? 1 - alice_bit : alice_bit;
      } else {
        bit = rng.bernoulli(0.5) ? 1 : 0;
      }
      mask |= 1u << detector_index(bob_basis, bit);
    }

    if (ctx.p_any_bg > 0.0 && rng.next_double() < ctx.p_any_bg) {
      unsigned bg = 0;
      do {
        bg = 0;
        for (int d = 0; d < 4; ++d)
          if (rng.bernoulli(ctx.bg_per_detector)) bg |= 1u << d;
      } while (bg == 0);
      mask |= bg;
    }

    if (mask == 0) continue;
    ++out.detected_slots;
    if (is_signal)
      ++out.detected_signal;
    else
      ++out.detected_decoy;
    int clicks = std::popcount(mask);
    for (int d = 0; d < 4; ++d)
      if (mask & (1u << d)) ++out.detections_per_detector[static_cast<size_t>(d)];
    if (clicks >= 2) ++out.double_clicks;
    if (clicks >= 3) ++out.three_way_coincidences;

    unsigned basis0 = mask & 0b0011u;
    unsigned basis1 = (mask >> 2) & 0b0011u;
    int bob_basis;
    if (basis0 != 0 && basis1 != 0) {
      bob_basis = rng.bernoulli(0.5) ? 1 : 0;
    } else {
      bob_basis = basis0 != 0 ? 0 : 1;
    }
    alice();
    if (bob_basis != alice_basis) continue;

    unsigned in_basis = bob_basis == 0 ? basis0 : basis1;
    int bob_bit;
    if (in_basis == 0b11u) {
      if (ctx.policy == DoubleClickPolicy::kDiscard) continue;
      bob_bit = rng.bernoulli(0.5) ? 1 : 0;
    } else {
      bob_bit = in_basis == 0b10u ? 1 : 0;
    }
    ++out.sifted;
    bool err = bob_bit != alice_bit;
    if (err) ++out.errors;
    if (is_signal) {
      ++out.sifted_signal;
      if (err) ++out.errors_signal;
    } else {
      ++out.sifted_decoy;
      if (err) ++out.errors_decoy;
    }
  }
}

// Deterministic chunk-parallel driver: chunk i always uses the generator
// derived from (seed, i), whatever thread runs it.
template <typename ChunkFn>
void run_chunked(std::uint64_t num_slots, unsigned max_threads, ChunkFn&& fn) {
  std::uint64_t num_chunks = (num_slots + kChunkSlots - 1) / kChunkSlots;
  unsigned hw = max_threads != 0 ? max_threads : std::thread::hardware_concurrency();
  unsigned threads = std::min<std::uint64_t>(hw == 0 ? 1 : hw, num_chunks);
  if (threads <= 1) {
    for (std::uint64_t c = 0; c < num_chunks; ++c) {
      std::uint64_t begin = c * kChunkSlots;
      fn(c, std::min(kChunkSlots, num_slots - begin));
    }
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        std::uint64_t c = next.fetch_add(1);
        if (c >= num_chunks) return;
        std::uint64_t begin = c * kChunkSlots;
        fn(c, std::min(kChunkSlots, num_slots - begin));
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

void SimConfig::validate() const {
  if (num_slots < 1)
    throw Error(ErrorCode::kInvalidArgument, "num_slots must be >= 1");
  channel.validate();
  receiver.validate();
}

SimOutcome& SimOutcome::operator+=(const SimOutcome& o) {
  for (size_t d = 0; d < detections_per_detector.size(); ++d)
    detections_per_detector[d] += o.detections_per_detector[d];
  detected_slots += o.detected_slots;
  double_clicks += o.double_clicks;
  three_way_coincidences += o.three_way_coincidences;
  sifted += o.sifted;
  errors += o.errors;
  sent_signal += o.sent_signal;
  sent_decoy += o.sent_decoy;
  detected_signal += o.detected_signal;
  detected_decoy += o.detected_decoy;
  sifted_signal += o.sifted_signal;
  sifted_decoy += o.sifted_decoy;
  errors_signal += o.errors_signal;
  errors_decoy += o.errors_decoy;
  return *this;
}

SimOutcome simulate_pass(const SimConfig& cfg) {
  cfg.validate();
  PassContext ctx;
  ctx.eta = end_to_end_transmittance(cfg.channel, cfg.receiver);
  ctx.e_d = cfg.receiver.intrinsic_error;
  ctx.policy = cfg.double_click;
  double nd = static_cast<double>(cfg.receiver.num_detectors);
  ctx.bg_per_detector =
      cfg.channel.background_rate_hz * cfg.receiver.coincidence_window_s / nd +
      cfg.receiver.dark_count_prob;
  ctx.p_any_bg = 1.0 - std::pow(1.0 - ctx.bg_per_detector, 4.0);

  if (const auto* qd = std::get_if<QdSourceSpec>(&cfg.source)) {
    PhotonNumberDistribution dist = qd->distribution();
    ctx.is_qd = true;
    ctx.p0 = dist.p0;
    ctx.p01 = dist.p0 + dist.p1;
  } else {
    const auto& wcp = std::get<WcpSourceSpec>(cfg.source);
    wcp.validate();
    ctx.is_qd = false;
    ctx.k_mu = wcp.k_mu;
    ctx.signal_cdf = PoissonCdf(wcp.mu);
    ctx.decoy_cdf = PoissonCdf(wcp.nu);
  }

  std::uint64_t num_chunks = (cfg.num_slots + kChunkSlots - 1) / kChunkSlots;
  std::vector<SimOutcome> partial(num_chunks);
  run_chunked(cfg.num_slots, cfg.max_threads,
              [&](std::uint64_t c, std::uint64_t slots) {
    run_pass_chunk(ctx, Xoshiro256pp::for_chunk(cfg.seed, c), slots, partial[c]);
  });

  SimOutcome total;
  for (const auto& p : partial) total += p;
  total.observed_qber =
      total.sifted > 0 ? static_cast<double>(total.errors) / static_cast<double>(total.sifted)
                       : 0.0;
  return total;
}

HbtMeasurement simulate_hbt(const PhotonNumberDistribution& dist, double eta,
                            std::uint64_t num_slots, double window_dark_prob,
                            std::uint64_t seed) {
  if (!(eta > 0.0 && eta <= 1.0))
    throw Error(ErrorCode::kInvalidArgument, "eta must lie in (0,1]");
  if (num_slots < 1)
    throw Error(ErrorCode::kInvalidArgument, "num_slots must be >= 1");
  if (!(window_dark_prob >= 0.0 && window_dark_prob < 1.0))
    throw Error(ErrorCode::kInvalidArgument, "dark probability must lie in [0,1)");

  const double p0 = dist.p0;
  const double p01 = dist.p0 + dist.p1;
  std::uint64_t num_chunks = (num_slots + kChunkSlots - 1) / kChunkSlots;
  struct Tally {
    std::uint64_t nc = 0, ns = 0;
  };
  std::vector<Tally> partial(num_chunks);

  run_chunked(num_slots, 0, [&](std::uint64_t c, std::uint64_t slots) {
    Xoshiro256pp rng = Xoshiro256pp::for_chunk(seed, c);
    Tally& t = partial[c];
    for (std::uint64_t s = 0; s < slots; ++s) {
      double u = rng.next_double();
      int photons = u < p0 ? 0 : (u < p01 ? 1 : 2);
      bool apd0 = false, apd1 = false;
      for (int k = 0; k < photons; ++k) {
        if (!rng.bernoulli(eta)) continue;
        if (rng.bernoulli(0.5))
          apd0 = true;
        else
          apd1 = true;
      }
      if (window_dark_prob > 0.0) {
        apd0 = apd0 || rng.bernoulli(window_dark_prob);
        apd1 = apd1 || rng.bernoulli(window_dark_prob);
      }
      if (apd0 && apd1)
        ++t.nc;
      else if (apd0 || apd1)
        ++t.ns;
    }
  });

  HbtMeasurement m;
  m.n_slots = num_slots;
  m.eta = eta;
  for (const auto& t : partial) {
    m.n_coincident += t.nc;
    m.n_solitary += t.ns;
  }
  return m;
}

KeyRateResult empirical_key_pipeline(const SimConfig& cfg,
                                     const FiniteKeyParams& params) {
  SimOutcome out = simulate_pass(cfg);
  double slots = static_cast<double>(cfg.num_slots);

  if (const auto* qd = std::get_if<QdSourceSpec>(&cfg.source)) {
    double p_det_hat = static_cast<double>(out.detected_slots) / slots;
    PassCounts counts =
        pass_counts(qd->rep_rate_hz, cfg.channel.pass_duration_s, params.q, p_det_hat);
    QdKeyInput in;
    in.n = counts.n_detected;
    in.m = counts.m_sifted;
    in.qber = out.observed_qber;
    in.p_det = p_det_hat;
    in.pm = qd->pm;
    KeyRateResult res = qd_key_length(in, params);
    res.n_sent = counts.n_sent;
    return res;
  }

  const auto& wcp = std::get<WcpSourceSpec>(cfg.source);
  auto ratio = [](std::uint64_t a, std::uint64_t b) {
    return b > 0 ? static_cast<double>(a) / static_cast<double>(b) : 0.0;
  };
  DecoyObservables obs;
  obs.n_total = wcp.rep_rate_hz * cfg.channel.pass_duration_s;
  obs.n_sent_mu = wcp.k_mu * obs.n_total;
  obs.n_sent_nu = (1.0 - wcp.k_mu) * obs.n_total;
  obs.q_mu = ratio(out.detected_signal, out.sent_signal);
  obs.q_nu = ratio(out.detected_decoy, out.sent_decoy);
  obs.e_mu = std::min(0.5, ratio(out.errors_signal, out.sifted_signal));
  obs.e_nu = std::min(0.5, ratio(out.errors_decoy, out.sifted_decoy));
  obs.n_mu = obs.n_sent_mu * obs.q_mu;

  DecoyConfig dcfg;
  dcfg.y0_upper_base = background_click_prob(cfg.channel, cfg.receiver);
  dcfg.sifting_q = params.q;
  DecoyBounds bounds = decoy_bounds(obs, wcp.mu, wcp.nu, params.eps_pe, dcfg);
  return wcp_key_length(obs, bounds, params, wcp.k_mu);
}

}  // namespace mc
}  // namespace satkey
