#include <doctest.h>

#include <cmath>

#include "laesim/channel.hpp"

using namespace laesim;

TEST_CASE("los probability, suburban profile") {
  const ChannelParams p = suburban_channel();
  // directly overhead the link is effectively always line of sight
  CHECK(los_probability(90.0, p) == doctest::Approx(1.0).epsilon(1e-12));
  // exponent vanishes at elevation == env_a
  CHECK(los_probability(p.env_a, p) == doctest::Approx(1.0 / 5.88).epsilon(1e-12));
  // zero env_a collapses the denominator
  ChannelParams degenerate = p;
  degenerate.env_a = 1e-300;
  CHECK(los_probability(30.0, degenerate) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(los_probability(-1.0, p), std::invalid_argument);
  CHECK_THROWS_AS(los_probability(90.5, p), std::invalid_argument);
}

TEST_CASE("path loss at 100 m / 2.5 GHz") {
  const ChannelParams p = suburban_channel();
  CHECK(path_loss_db(100.0, 1.0, p) == doctest::Approx(80.5063648836375).epsilon(1e-12));
  CHECK(path_loss_db(100.0, 0.0, p) == doctest::Approx(101.406364883637).epsilon(1e-12));
  // unit log argument: d such that 4 pi f d / c == 1, no excess loss
  ChannelParams clean = p;
  clean.eta_los_db = 0.0;
  const double d_unit = clean.light_speed_mps / (4.0 * 3.14159265358979323846 * clean.carrier_freq_hz);
  CHECK(path_loss_db(d_unit, 1.0, clean) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(path_loss_db(0.0, 1.0, p), std::invalid_argument);
  CHECK_THROWS_AS(path_loss_db(-5.0, 1.0, p), std::invalid_argument);
}

TEST_CASE("average rate") {
  const ChannelParams p = suburban_channel();
  CHECK(avg_rate_bps(1e6, 80.51, p) == doctest::Approx(1.14578429756e7).epsilon(1e-9));
  ChannelParams silent = p;
  silent.avg_tx_power_w = 0.0;
  CHECK(avg_rate_bps(1e6, 80.51, silent) == 0.0);
  // linear in bandwidth at fixed SNR
  CHECK(avg_rate_bps(2e6, 95.0, p) == doctest::Approx(2.0 * avg_rate_bps(1e6, 95.0, p)).epsilon(1e-12));
  CHECK_THROWS_AS(avg_rate_bps(0.0, 80.0, p), std::invalid_argument);
}

TEST_CASE("path loss and rate monotonicity") {
  const ChannelParams p = suburban_channel();
  double prev = path_loss_db(10.0, 0.5, p);
  for (double d = 20.0; d <= 500.0; d += 10.0) {
    const double loss = path_loss_db(d, 0.5, p);
    CHECK(loss > prev);
    prev = loss;
  }
  // more NLoS weight means more loss when eta_nlos > eta_los
  CHECK(path_loss_db(100.0, 0.3, p) > path_loss_db(100.0, 0.7, p));
  // rate decreasing in loss
  CHECK(avg_rate_bps(1e6, 90.0, p) < avg_rate_bps(1e6, 80.0, p));
}
