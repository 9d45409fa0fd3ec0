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
// Converts a physical link description into per-slot detection and error
// probabilities and expected per-pass count statistics for either source.

#ifndef SATKEY_LINK_MODEL_HPP
#define SATKEY_LINK_MODEL_HPP

#include "satkey/source_models.hpp"

namespace satkey {

struct ReceiverSpec {
  // Defaults reproduce the reference loss-tolerance curves when the sweep
  // axis is read as channel-only loss: 60% detectors behind ~3.5 dB of
  // receiver optics.
  double detector_efficiency = 0.6;
  double optical_loss_db = 3.5;
  int num_detectors = 4;
  double coincidence_window_s = 5e-9;
  double dark_count_prob = 0.0;  // per detector per window
  double intrinsic_error = 0.02;  // e_d, wrong-detector probability

  void validate() const;
};

struct ChannelSpec {
  double loss_db = 30.0;
  double background_rate_hz = 500.0;  // total across detectors
  double pass_duration_s = 100.0;

  void validate() const;
};

// Per-slot probabilities and expected per-pass counts.
struct SlotStatistics {
  double p_signal = 0.0;      // detection probability from source photons alone
  double p_background = 0.0;  // background/dark click probability
  double p_det = 0.0;         // total per-slot detection probability
  double qber = 0.0;          // expected E
  double n_sent = 0.0;        // slots per pass
  double n_detected = 0.0;    // expected detections per pass
};

struct PassCounts {
  double n_sent = 0.0;
  double n_detected = 0.0;
  double m_sifted = 0.0;
};

// p_bg = background_rate * window + num_detectors * dark, clamped to [0,1].
double background_click_prob(const ChannelSpec& channel, const ReceiverSpec& rx);

// 10^(-loss/10) * 10^(-rx_optical_loss/10) * detector_efficiency.
double end_to_end_transmittance(const ChannelSpec& channel, const ReceiverSpec& rx);

// Gain of a phase-randomized coherent pulse: Q = 1 - (1 - p_bg) e^(-mu eta).
double wcp_gain(double mu, double eta_tot, double p_bg);

// Gain of the truncated Fock-state source:
// Q = 1 - (1 - p_bg) [p0 + p1 (1-eta) + p2 (1-eta)^2].
double qd_gain(const PhotonNumberDistribution& dist, double eta_tot, double p_bg);

// E = (e_d p_signal + p_bg/2) / (p_signal + p_bg).
// Throws kNoDetections when the denominator vanishes.
double qber_expected(double p_signal, double p_bg, double e_d);

// Expected (sent, detected, sifted) for a pass.
PassCounts pass_counts(double rep_rate_hz, double duration_s, double q,
                       double p_det);

// Assembled per-slot statistics for each source type.
SlotStatistics qd_slot_statistics(const PhotonNumberDistribution& dist,
                                  const ChannelSpec& channel,
                                  const ReceiverSpec& rx, double rep_rate_hz);
SlotStatistics wcp_slot_statistics(double mean_photon_number,
                                   const ChannelSpec& channel,
                                   const ReceiverSpec& rx, double rep_rate_hz);

}  // namespace satkey

#endif  // SATKEY_LINK_MODEL_HPP
