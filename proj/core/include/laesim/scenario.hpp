#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "laesim/auction.hpp"
#include "laesim/channel.hpp"
#include "laesim/env.hpp"
#include "laesim/kvconfig.hpp"
#include "laesim/rng.hpp"

namespace laesim {

// Everything that defines one experiment environment: dimensions, channel,
// task-draw choice sets, budgets, and utility constants.
struct ScenarioConfig {
  std::size_t n_sps = 5;
  std::size_t n_hotspots = 6;
  std::size_t n_services = 4;
  std::size_t horizon = 30;
  ChannelParams channel;
  std::vector<std::int64_t> user_count_choices = {20, 30, 40, 50};
  std::vector<double> data_size_choices_bits = {2.0e7, 2.4e7, 2.8e7, 3.2e7, 3.6e7, 4.0e7};
  std::vector<double> cycles_per_bit_choices = {1000, 1200, 1400, 1600};
  Grid2<double> budgets_compute_hz;    // N x K
  Grid2<double> budgets_bandwidth_hz;  // N x K
  UtilityParams utility;               // N x K constants + penalty delay
  double delay_cap_s = 0.0;            // bound on realizable single-cell delays
  std::uint64_t seed = 1;

  void validate() const;
};

// Reference magnitudes used to keep observation features O(1).
struct ObservationScales {
  double cycles_scale = 1.0;
  double bits_scale = 1.0;
  double users_scale = 1.0;
};

ObservationScales reference_scales(const ScenarioConfig& config);

// Worst single-cell delay with peak demand served at 10% of the per-cell
// budget slice (budget / H). Used to size the penalty delay.
double default_delay_cap(const ScenarioConfig& config);

// Draws all hotspot states for one time step: user counts and per-task
// (size, cycles/bit, service) all uniform over their choice sets.
std::vector<HotspotState> sample_hotspots(const ScenarioConfig& config, RngStream& rng,
                                          std::size_t time_index = 0);

// Builds a config from flat key-value text. Unknown keys in `kv` that start
// with "scenario." or match known names are consumed; scalar budget/cost
// keys broadcast over (N, K). Missing keys keep Table-1 defaults.
ScenarioConfig scenario_from_kv(const KvMap& kv);

// Canonical flat dump (inverse of scenario_from_kv for scalar-symmetric
// configs).
KvMap scenario_to_kv(const ScenarioConfig& config);

}  // namespace laesim
