#pragma once

namespace laesim {

// Large-scale air-to-ground channel constants. Probabilistic LoS/NLoS model:
// free-space path loss plus an excess-loss term weighted by the LoS
// probability of the elevation angle. Small-scale fading is out of scope.
struct ChannelParams {
  double carrier_freq_hz = 2.5e9;
  double altitude_m = 100.0;
  double eta_los_db = 0.1;    // excess LoS loss
  double eta_nlos_db = 21.0;  // excess NLoS loss
  double env_a = 4.88;        // environment parameter (suburban)
  double env_b = 0.43;        // environment parameter (suburban)
  double noise_power_w = 3.1622776601683794e-13;  // -95 dBm
  double avg_tx_power_w = 0.1;
  double light_speed_mps = 2.998e8;

  void validate() const;
};

// Named profile with the suburban environment constants.
ChannelParams suburban_channel();

// LoS probability at the given elevation angle (degrees, [0, 90]).
double los_probability(double elevation_deg, const ChannelParams& params);

// Path loss in dB at the given UAV-user distance: free-space term plus the
// LoS-probability-weighted excess losses.
double path_loss_db(double distance_m, double p_los, const ChannelParams& params);

// Average uplink rate in bit/s over `bandwidth_hz` at the given path loss.
double avg_rate_bps(double bandwidth_hz, double loss_db, const ChannelParams& params);

}  // namespace laesim
