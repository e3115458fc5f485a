#include "laesim/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace laesim {

void ChannelParams::validate() const {
  if (carrier_freq_hz <= 0 || altitude_m <= 0 || eta_nlos_db <= 0 || env_a <= 0 ||
      env_b <= 0 || noise_power_w <= 0 || avg_tx_power_w < 0 || light_speed_mps <= 0)
    throw std::invalid_argument("ChannelParams: non-positive field");
  if (eta_los_db < 0) throw std::invalid_argument("ChannelParams: eta_los_db < 0");
}

ChannelParams suburban_channel() {
  return ChannelParams{};  // defaults are the suburban profile
}

double los_probability(double elevation_deg, const ChannelParams& params) {
  if (elevation_deg < 0.0 || elevation_deg > 90.0)
    throw std::invalid_argument("los_probability: elevation must be in [0, 90] degrees");
  return 1.0 / (1.0 + params.env_a * std::exp(-params.env_b * (elevation_deg - params.env_a)));
}

double path_loss_db(double distance_m, double p_los, const ChannelParams& params) {
  if (distance_m <= 0.0) throw std::invalid_argument("path_loss_db: distance must be positive");
  if (p_los < 0.0 || p_los > 1.0) throw std::invalid_argument("path_loss_db: p_los outside [0, 1]");
  const double fspl =
      20.0 * std::log10(4.0 * std::numbers::pi * params.carrier_freq_hz * distance_m /
                        params.light_speed_mps);
  return fspl + p_los * params.eta_los_db + (1.0 - p_los) * params.eta_nlos_db;
}

double avg_rate_bps(double bandwidth_hz, double loss_db, const ChannelParams& params) {
  if (bandwidth_hz <= 0.0) throw std::invalid_argument("avg_rate_bps: bandwidth must be positive");
  const double snr = params.avg_tx_power_w * std::pow(10.0, -loss_db / 10.0) / params.noise_power_w;
  return bandwidth_hz * std::log2(1.0 + snr);
}

}  // namespace laesim
