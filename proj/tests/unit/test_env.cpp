#include <doctest.h>

#include <cmath>
#include <map>

#include "laesim/env.hpp"
#include "laesim/scenario.hpp"

using namespace laesim;

namespace {

ScenarioConfig small_scenario() {
  ScenarioConfig c;
  c.n_sps = 2;
  c.n_hotspots = 2;
  c.n_services = 2;
  c.horizon = 4;
  c.user_count_choices = {2, 4};
  c.data_size_choices_bits = {2e7, 4e7};
  c.cycles_per_bit_choices = {1000, 1600};
  c.budgets_compute_hz = Grid2<double>(2, 2, 8e11);
  c.budgets_bandwidth_hz = Grid2<double>(2, 2, 8e8);
  c.utility.unit_cost_w = Grid2<double>(2, 2, 381.0);
  c.utility.winner_bonus_j = Grid2<double>(2, 2, 3000.0);
  c.delay_cap_s = default_delay_cap(c);
  c.utility.penalty_delay_s = 100.0 * c.delay_cap_s;
  c.validate();
  return c;
}

}  // namespace

TEST_CASE("delay operations") {
  CHECK(comp_delay_s(2e10, 1e11) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(comp_delay_s(0.0, 0.0) == 0.0);
  CHECK(comp_delay_s(5.0, 5.0) == 1.0);
  CHECK_THROWS_AS(comp_delay_s(1.0, 0.0), std::domain_error);

  CHECK(comm_delay_s(1e7, 1.14578429756e7) == doctest::Approx(0.872765).epsilon(1e-6));
  CHECK(comm_delay_s(0.0, 0.0) == 0.0);
  CHECK_THROWS_AS(comm_delay_s(1.0, 0.0), std::domain_error);

  // homogeneity: scaling demand and allocation together leaves delay fixed
  for (double scale : {0.5, 3.0, 1e4}) {
    CHECK(comp_delay_s(2e10 * scale, 1e11 * scale) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(comm_delay_s(1e7 * scale, 2e6 * scale) == doctest::Approx(5.0).epsilon(1e-12));
  }
}

TEST_CASE("aggregate_demand") {
  HotspotState state;
  state.hotspot_id = 0;
  state.tasks = {{2e7, 1000.0, 0}};
  const DemandSummary one = aggregate_demand(state, 2);
  CHECK(one.required_cycles.at(0, 0) == doctest::Approx(2e10));
  CHECK(one.total_bits.at(0, 0) == doctest::Approx(2e7));
  CHECK(one.required_cycles.at(0, 1) == 0.0);
  CHECK(one.user_counts[0] == 1.0);

  // empty hotspot: all-zero row
  HotspotState empty;
  const DemandSummary zero = aggregate_demand(empty, 3);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(zero.required_cycles.at(0, k) == 0.0);
    CHECK(zero.total_bits.at(0, k) == 0.0);
  }

  // additivity over same-cell tasks
  HotspotState two = state;
  two.tasks.push_back({4e7, 1600.0, 0});
  const DemandSummary sum = aggregate_demand(two, 2);
  CHECK(sum.required_cycles.at(0, 0) == doctest::Approx(2e10 + 6.4e10));
  CHECK(sum.total_bits.at(0, 0) == doctest::Approx(6e7));

  // out-of-range service index rejected
  HotspotState bad;
  bad.tasks = {{1e6, 10.0, 5}};
  CHECK_THROWS_AS(aggregate_demand(bad, 2), std::invalid_argument);
}

TEST_CASE("aggregate_demand conserves one-hot totals") {
  ScenarioConfig cfg = small_scenario();
  RngStream rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const auto states = sample_hotspots(cfg, rng);
    const DemandSummary d = aggregate_demand(states, cfg.n_services);
    for (std::size_t h = 0; h < cfg.n_hotspots; ++h) {
      double direct = 0.0;
      for (const TaskSpec& task : states[h].tasks) direct += task.data_bits * task.cycles_per_bit;
      double summed = 0.0;
      for (std::size_t k = 0; k < cfg.n_services; ++k) {
        summed += d.required_cycles.at(h, k);
        CHECK((d.required_cycles.at(h, k) == 0.0) == (d.total_bits.at(h, k) == 0.0));
      }
      CHECK(summed == doctest::Approx(direct).epsilon(1e-12));
    }
  }
}

TEST_CASE("sample_hotspots determinism and frequencies") {
  const ScenarioConfig cfg = small_scenario();

  RngStream a(123), b(123);
  const auto sa = sample_hotspots(cfg, a);
  const auto sb = sample_hotspots(cfg, b);
  REQUIRE(sa.size() == sb.size());
  for (std::size_t h = 0; h < sa.size(); ++h) {
    REQUIRE(sa[h].tasks.size() == sb[h].tasks.size());
    for (std::size_t i = 0; i < sa[h].tasks.size(); ++i) {
      CHECK(sa[h].tasks[i].data_bits == sb[h].tasks[i].data_bits);
      CHECK(sa[h].tasks[i].cycles_per_bit == sb[h].tasks[i].cycles_per_bit);
      CHECK(sa[h].tasks[i].service_type == sb[h].tasks[i].service_type);
    }
  }

  // frequency of each choice stays within +-2% of uniform over many draws
  RngStream rng(9);
  std::map<std::int64_t, std::size_t> count_freq;
  std::map<std::size_t, std::size_t> service_freq;
  std::size_t hotspot_draws = 0, task_draws = 0;
  for (int rep = 0; rep < 50000 / 2; ++rep) {
    for (const HotspotState& s : sample_hotspots(cfg, rng)) {
      ++hotspot_draws;
      ++count_freq[static_cast<std::int64_t>(s.tasks.size())];
      for (const TaskSpec& t : s.tasks) {
        ++task_draws;
        ++service_freq[t.service_type];
      }
    }
  }
  for (const auto& [count, freq] : count_freq) {
    const double expected = 1.0 / static_cast<double>(cfg.user_count_choices.size());
    CHECK(std::abs(static_cast<double>(freq) / static_cast<double>(hotspot_draws) - expected) <
          0.02);
  }
  REQUIRE(service_freq.size() == cfg.n_services);
  for (const auto& [service, freq] : service_freq) {
    const double expected = 1.0 / static_cast<double>(cfg.n_services);
    CHECK(std::abs(static_cast<double>(freq) / static_cast<double>(task_draws) - expected) < 0.02);
  }
}
