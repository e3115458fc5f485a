#include "laesim/scenario.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace laesim {

namespace {

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// All (n, k) entries equal; used for the scalar-broadcast kv round trip.
double uniform_entry(const Grid2<double>& g, const char* what) {
  if (g.size() == 0) throw std::invalid_argument(std::string(what) + ": empty grid");
  for (double v : g.data())
    if (v != g.data()[0])
      throw std::invalid_argument(std::string(what) + ": non-uniform grid has no scalar dump");
  return g.data()[0];
}

}  // namespace

void ScenarioConfig::validate() const {
  if (n_sps < 2) throw std::invalid_argument("ScenarioConfig: need at least 2 SPs");
  if (n_hotspots < 1 || n_services < 1 || horizon < 1)
    throw std::invalid_argument("ScenarioConfig: dimensions must be positive");
  channel.validate();
  if (user_count_choices.empty() || data_size_choices_bits.empty() || cycles_per_bit_choices.empty())
    throw std::invalid_argument("ScenarioConfig: empty choice set");
  for (auto c : user_count_choices)
    if (c < 0) throw std::invalid_argument("ScenarioConfig: negative user count choice");
  for (double c : data_size_choices_bits)
    if (c <= 0) throw std::invalid_argument("ScenarioConfig: non-positive data size choice");
  for (double c : cycles_per_bit_choices)
    if (c <= 0) throw std::invalid_argument("ScenarioConfig: non-positive cycles/bit choice");
  if (budgets_compute_hz.rows() != n_sps || budgets_compute_hz.cols() != n_services ||
      budgets_bandwidth_hz.rows() != n_sps || budgets_bandwidth_hz.cols() != n_services)
    throw std::invalid_argument("ScenarioConfig: budget grid shape mismatch");
  for (double b : budgets_compute_hz.data())
    if (b <= 0) throw std::invalid_argument("ScenarioConfig: non-positive compute budget");
  for (double b : budgets_bandwidth_hz.data())
    if (b <= 0) throw std::invalid_argument("ScenarioConfig: non-positive bandwidth budget");
  if (utility.unit_cost_w.rows() != n_sps || utility.unit_cost_w.cols() != n_services)
    throw std::invalid_argument("ScenarioConfig: utility grid shape mismatch");
  utility.validate(delay_cap_s);
}

ObservationScales reference_scales(const ScenarioConfig& config) {
  const double max_users =
      static_cast<double>(*std::max_element(config.user_count_choices.begin(),
                                            config.user_count_choices.end()));
  const double max_bits = *std::max_element(config.data_size_choices_bits.begin(),
                                            config.data_size_choices_bits.end());
  const double max_cpb = *std::max_element(config.cycles_per_bit_choices.begin(),
                                           config.cycles_per_bit_choices.end());
  ObservationScales s;
  s.users_scale = std::max(1.0, max_users);
  s.bits_scale = std::max(1.0, max_users * max_bits);
  s.cycles_scale = std::max(1.0, max_users * max_bits * max_cpb);
  return s;
}

double default_delay_cap(const ScenarioConfig& config) {
  const ObservationScales s = reference_scales(config);
  const double min_f =
      *std::min_element(config.budgets_compute_hz.data().begin(), config.budgets_compute_hz.data().end());
  const double min_b = *std::min_element(config.budgets_bandwidth_hz.data().begin(),
                                         config.budgets_bandwidth_hz.data().end());
  const double h = static_cast<double>(config.n_hotspots);
  const double alloc_f = 0.1 * min_f / h;
  const double alloc_b = 0.1 * min_b / h;
  return total_delay(alloc_f, alloc_b, s.cycles_scale, s.bits_scale, config.channel);
}

std::vector<HotspotState> sample_hotspots(const ScenarioConfig& config, RngStream& rng,
                                          std::size_t time_index) {
  std::vector<HotspotState> states(config.n_hotspots);
  for (std::size_t h = 0; h < config.n_hotspots; ++h) {
    HotspotState& state = states[h];
    state.hotspot_id = h;
    state.time_index = time_index;
    const std::int64_t count = rng.pick(config.user_count_choices);
    state.tasks.resize(static_cast<std::size_t>(count));
    for (TaskSpec& task : state.tasks) {
      task.data_bits = rng.pick(config.data_size_choices_bits);
      task.cycles_per_bit = rng.pick(config.cycles_per_bit_choices);
      task.service_type =
          static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(config.n_services) - 1));
    }
  }
  return states;
}

ScenarioConfig scenario_from_kv(const KvMap& kv) {
  ScenarioConfig c;
  c.n_sps = static_cast<std::size_t>(kv_get_int(kv, "n_sps", 5));
  c.n_hotspots = static_cast<std::size_t>(kv_get_int(kv, "n_hotspots", 6));
  c.n_services = static_cast<std::size_t>(kv_get_int(kv, "n_services", 4));
  c.horizon = static_cast<std::size_t>(kv_get_int(kv, "horizon", 30));
  c.seed = static_cast<std::uint64_t>(kv_get_int(kv, "seed", 1));

  c.channel.carrier_freq_hz = kv_get_double(kv, "channel.carrier_freq_hz", c.channel.carrier_freq_hz);
  c.channel.altitude_m = kv_get_double(kv, "channel.altitude_m", c.channel.altitude_m);
  c.channel.eta_los_db = kv_get_double(kv, "channel.eta_los_db", c.channel.eta_los_db);
  c.channel.eta_nlos_db = kv_get_double(kv, "channel.eta_nlos_db", c.channel.eta_nlos_db);
  c.channel.env_a = kv_get_double(kv, "channel.env_a", c.channel.env_a);
  c.channel.env_b = kv_get_double(kv, "channel.env_b", c.channel.env_b);
  c.channel.noise_power_w = kv_get_double(kv, "channel.noise_power_w", c.channel.noise_power_w);
  c.channel.avg_tx_power_w = kv_get_double(kv, "channel.avg_tx_power_w", c.channel.avg_tx_power_w);
  c.channel.light_speed_mps = kv_get_double(kv, "channel.light_speed_mps", c.channel.light_speed_mps);

  c.user_count_choices = kv_get_int_list(kv, "user_count_choices", c.user_count_choices);
  c.data_size_choices_bits = kv_get_double_list(kv, "data_size_choices_bits", c.data_size_choices_bits);
  c.cycles_per_bit_choices = kv_get_double_list(kv, "cycles_per_bit_choices", c.cycles_per_bit_choices);

  const double f_budget = kv_get_double(kv, "budget_compute_hz", 8.0e11);
  const double b_budget = kv_get_double(kv, "budget_bandwidth_hz", 8.0e8);
  c.budgets_compute_hz = Grid2<double>(c.n_sps, c.n_services, f_budget);
  c.budgets_bandwidth_hz = Grid2<double>(c.n_sps, c.n_services, b_budget);

  const double unit_cost = kv_get_double(kv, "utility.unit_cost_w", 381.0);
  const double bonus = kv_get_double(kv, "utility.winner_bonus_j", 3000.0);
  c.utility.unit_cost_w = Grid2<double>(c.n_sps, c.n_services, unit_cost);
  c.utility.winner_bonus_j = Grid2<double>(c.n_sps, c.n_services, bonus);

  c.delay_cap_s = kv_get_double(kv, "delay_cap_s", 0.0);
  if (c.delay_cap_s <= 0.0) c.delay_cap_s = default_delay_cap(c);
  c.utility.penalty_delay_s = kv_get_double(kv, "utility.penalty_delay_s", 0.0);
  if (c.utility.penalty_delay_s <= 0.0) c.utility.penalty_delay_s = 100.0 * c.delay_cap_s;

  c.validate();
  return c;
}

KvMap scenario_to_kv(const ScenarioConfig& config) {
  KvMap kv;
  kv["n_sps"] = std::to_string(config.n_sps);
  kv["n_hotspots"] = std::to_string(config.n_hotspots);
  kv["n_services"] = std::to_string(config.n_services);
  kv["horizon"] = std::to_string(config.horizon);
  kv["seed"] = std::to_string(config.seed);
  kv["channel.carrier_freq_hz"] = format_number(config.channel.carrier_freq_hz);
  kv["channel.altitude_m"] = format_number(config.channel.altitude_m);
  kv["channel.eta_los_db"] = format_number(config.channel.eta_los_db);
  kv["channel.eta_nlos_db"] = format_number(config.channel.eta_nlos_db);
  kv["channel.env_a"] = format_number(config.channel.env_a);
  kv["channel.env_b"] = format_number(config.channel.env_b);
  kv["channel.noise_power_w"] = format_number(config.channel.noise_power_w);
  kv["channel.avg_tx_power_w"] = format_number(config.channel.avg_tx_power_w);
  kv["channel.light_speed_mps"] = format_number(config.channel.light_speed_mps);
  auto join = [](const auto& values) {
    std::string out;
    for (const auto& v : values) {
      if (!out.empty()) out += ",";
      if constexpr (std::is_floating_point_v<std::decay_t<decltype(v)>>)
        out += format_number(v);
      else
        out += std::to_string(v);
    }
    return out;
  };
  kv["user_count_choices"] = join(config.user_count_choices);
  kv["data_size_choices_bits"] = join(config.data_size_choices_bits);
  kv["cycles_per_bit_choices"] = join(config.cycles_per_bit_choices);
  kv["budget_compute_hz"] = format_number(uniform_entry(config.budgets_compute_hz, "budget_compute_hz"));
  kv["budget_bandwidth_hz"] =
      format_number(uniform_entry(config.budgets_bandwidth_hz, "budget_bandwidth_hz"));
  kv["utility.unit_cost_w"] = format_number(uniform_entry(config.utility.unit_cost_w, "unit_cost_w"));
  kv["utility.winner_bonus_j"] =
      format_number(uniform_entry(config.utility.winner_bonus_j, "winner_bonus_j"));
  kv["utility.penalty_delay_s"] = format_number(config.utility.penalty_delay_s);
  kv["delay_cap_s"] = format_number(config.delay_cap_s);
  return kv;
}

}  // namespace laesim
