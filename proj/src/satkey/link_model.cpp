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

#include "satkey/link_model.hpp"

#include <cmath>

#include "satkey/errors.hpp"
#include "satkey/numeric.hpp"

namespace satkey {

void ReceiverSpec::validate() const {
  if (!(detector_efficiency > 0.0 && detector_efficiency <= 1.0))
    throw Error(ErrorCode::kInvalidArgument, "detector_efficiency must lie in (0,1]");
  if (optical_loss_db < 0.0)
    throw Error(ErrorCode::kInvalidArgument, "receiver optical loss must be >= 0 dB");
  if (num_detectors < 2)
    throw Error(ErrorCode::kInvalidArgument, "num_detectors must be >= 2");
  if (!(coincidence_window_s > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "coincidence window must be positive");
  if (!(dark_count_prob >= 0.0 && dark_count_prob <= 1.0))
    throw Error(ErrorCode::kInvalidArgument, "dark_count_prob must lie in [0,1]");
  if (!(intrinsic_error >= 0.0 && intrinsic_error <= 1.0))
    throw Error(ErrorCode::kInvalidArgument, "intrinsic_error must lie in [0,1]");
}

void ChannelSpec::validate() const {
  if (loss_db < 0.0)
    throw Error(ErrorCode::kInvalidArgument, "channel loss must be >= 0 dB");
  if (background_rate_hz < 0.0)
    throw Error(ErrorCode::kInvalidArgument, "background rate must be >= 0");
  if (!(pass_duration_s > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "pass duration must be positive");
}

double background_click_prob(const ChannelSpec& channel, const ReceiverSpec& rx) {
  channel.validate();
  rx.validate();
  double p = channel.background_rate_hz * rx.coincidence_window_s +
             static_cast<double>(rx.num_detectors) * rx.dark_count_prob;
  return clamp01(p);
}

double end_to_end_transmittance(const ChannelSpec& channel, const ReceiverSpec& rx) {
  channel.validate();
  rx.validate();
  return loss_db_to_linear(channel.loss_db) *
         loss_db_to_linear(rx.optical_loss_db) * rx.detector_efficiency;
}

double wcp_gain(double mu, double eta_tot, double p_bg) {
  if (mu < 0.0) throw Error(ErrorCode::kDomain, "mean photon number must be >= 0");
  return 1.0 - (1.0 - p_bg) * std::exp(-mu * eta_tot);
}

double qd_gain(const PhotonNumberDistribution& dist, double eta_tot, double p_bg) {
  double no_click = dist.p0 + dist.p1 * (1.0 - eta_tot) +
                    dist.p2 * (1.0 - eta_tot) * (1.0 - eta_tot);
  return 1.0 - (1.0 - p_bg) * no_click;
}

double qber_expected(double p_signal, double p_bg, double e_d) {
  if (!(p_signal + p_bg > 0.0))
    throw Error(ErrorCode::kNoDetections, "no detections: p_signal + p_bg = 0");
  return (e_d * p_signal + 0.5 * p_bg) / (p_signal + p_bg);
}

PassCounts pass_counts(double rep_rate_hz, double duration_s, double q,
                       double p_det) {
  if (!(rep_rate_hz > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "rep_rate must be positive");
  PassCounts c;
  c.n_sent = rep_rate_hz * duration_s;
  c.n_detected = c.n_sent * p_det;
  c.m_sifted = q * c.n_detected;
  return c;
}

SlotStatistics qd_slot_statistics(const PhotonNumberDistribution& dist,
                                  const ChannelSpec& channel,
                                  const ReceiverSpec& rx, double rep_rate_hz) {
  double eta = end_to_end_transmittance(channel, rx);
  double p_bg = background_click_prob(channel, rx);
  SlotStatistics s;
  s.p_signal = qd_gain(dist, eta, 0.0);
  s.p_background = p_bg;
  s.p_det = qd_gain(dist, eta, p_bg);
  s.qber = qber_expected(s.p_signal, p_bg, rx.intrinsic_error);
  s.n_sent = rep_rate_hz * channel.pass_duration_s;
  s.n_detected = s.n_sent * s.p_det;
  return s;
}

SlotStatistics wcp_slot_statistics(double mean_photon_number,
                                   const ChannelSpec& channel,
                                   const ReceiverSpec& rx, double rep_rate_hz) {
  double eta = end_to_end_transmittance(channel, rx);
  double p_bg = background_click_prob(channel, rx);
  SlotStatistics s;
  s.p_signal = wcp_gain(mean_photon_number, eta, 0.0);
  s.p_background = p_bg;
  s.p_det = wcp_gain(mean_photon_number, eta, p_bg);
  s.qber = qber_expected(s.p_signal, p_bg, rx.intrinsic_error);
  s.n_sent = rep_rate_hz * channel.pass_duration_s;
  s.n_detected = s.n_sent * s.p_det;
  return s;
}

}  // namespace satkey
