#include <doctest.h>

#include <cmath>
#include <limits>

#include "laesim/auction.hpp"
#include "laesim/channel.hpp"

using namespace laesim;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

UtilityParams single_cell_utility(std::size_t n_sps, double penalty = 100.0) {
  UtilityParams u;
  u.unit_cost_w = Grid2<double>(n_sps, 1, 381.0);
  u.winner_bonus_j = Grid2<double>(n_sps, 1, 3000.0);
  u.penalty_delay_s = penalty;
  return u;
}

// hand-built single-cell result
AuctionResult make_result(const std::vector<double>& committed, const std::vector<double>& actual) {
  const std::size_t n = committed.size();
  AuctionResult r;
  r.committed_delay_s = Grid3<double>(n, 1, 1);
  r.actual_delay_s = Grid3<double>(n, 1, 1);
  r.win = Grid3<std::uint8_t>(n, 1, 1);
  r.verified = Grid3<std::uint8_t>(n, 1, 1);
  r.winner_index = Grid2<int>(1, 1, -1);
  const CellResolution cell = resolve(committed);
  r.winner_index.at(0, 0) = cell.winner;
  for (std::size_t i = 0; i < n; ++i) {
    r.committed_delay_s.at(i, 0, 0) = committed[i];
    r.actual_delay_s.at(i, 0, 0) = actual[i];
    r.win.at(i, 0, 0) = cell.win[i];
    r.verified.at(i, 0, 0) = verify(committed[i], actual[i]) ? 1 : 0;
  }
  return r;
}

}  // namespace

TEST_CASE("resolve: argmin with index tie-break") {
  CHECK(resolve({0.5, 0.3, 0.9}).winner == 1);
  CHECK(resolve({0.3, 0.3}).winner == 0);
  const CellResolution nobody = resolve({kInf, kInf, kInf});
  CHECK(nobody.winner == -1);
  for (auto w : nobody.win) CHECK(w == 0);
  // argmin is invariant under positive affine rescaling
  CHECK(resolve({10.0 + 2.0 * 0.5, 10.0 + 2.0 * 0.3, 10.0 + 2.0 * 0.9}).winner == 1);
  CHECK_THROWS_AS(resolve({-0.1, 0.2}), std::invalid_argument);
}

TEST_CASE("verify is boundary inclusive") {
  CHECK(verify(1.0, 1.0));
  CHECK_FALSE(verify(1.0, 1.2));
  CHECK(verify(1.0, 0.8));
}

TEST_CASE("total_delay combines the oracle parts") {
  const ChannelParams ch = suburban_channel();
  // comm at 1 MHz against the 100 m suburban loss, plus 0.2 s of compute
  const double delay = total_delay(1e11, 1e6, 2e10, 2e7, ch);
  CHECK(delay == doctest::Approx(0.2 + 1.74552924513 * (1.14578429756e7 / avg_rate_bps(1e6, path_loss_db(100.0, los_probability(90.0, ch), ch), ch))).epsilon(1e-6));
  CHECK(delay == doctest::Approx(1.94554).epsilon(1e-4));
  CHECK(total_delay(1.0, 1.0, 0.0, 0.0, ch) == 0.0);
  // doubling both resources halves the delay
  CHECK(total_delay(2e11, 2e6, 2e10, 2e7, ch) == doctest::Approx(delay / 2.0).epsilon(1e-12));
  CHECK_THROWS_AS(total_delay(0.0, 1e6, 1.0, 1.0, ch), std::domain_error);
  CHECK(cell_delay_or_inf(0.0, 1e6, 1.0, 1.0, ch) == kInf);
}

TEST_CASE("sp_utility per the bonus/verification rules") {
  const UtilityParams u = single_cell_utility(2);
  // win, verified: -(381*2 - 3000) = 2238
  CHECK(sp_utility(make_result({2.0, 3.0}, {2.0, 3.0}), 0, u) == doctest::Approx(2238.0));
  // lost: plain cost on actual delay
  CHECK(sp_utility(make_result({2.0, 3.0}, {2.0, 3.0}), 1, u) == doctest::Approx(-1143.0));
  // win but overbid: bonus revoked
  CHECK(sp_utility(make_result({1.5, 3.0}, {2.0, 3.0}), 0, u) == doctest::Approx(-762.0));
}

TEST_CASE("modified_utility charges the penalty to losers") {
  const UtilityParams u = single_cell_utility(2, 100.0);
  const AuctionResult r = make_result({2.0, 3.0}, {2.0, 3.0});
  CHECK(modified_utility(r, 0, u) == doctest::Approx(-762.0));
  CHECK(modified_utility(r, 1, u) == doctest::Approx(-38100.0));
}

TEST_CASE("potential value") {
  const UtilityParams u = single_cell_utility(2, 100.0);
  const AuctionResult r = make_result({2.0, 3.0}, {2.0, 3.0});
  CHECK(potential_value(r, u) == doctest::Approx(-102.0));
  // all-lose cell: N * penalty
  const AuctionResult none = make_result({kInf, kInf}, {kInf, kInf});
  CHECK(potential_value(none, u) == doctest::Approx(-200.0));
  // winner delay shorter by delta raises the potential by delta
  const AuctionResult faster = make_result({1.5, 3.0}, {1.5, 3.0});
  CHECK(potential_value(faster, u) - potential_value(r, u) == doctest::Approx(0.5));
}

TEST_CASE("run_auction end to end") {
  const ChannelParams ch = suburban_channel();
  DemandSummary demand;
  demand.required_cycles = Grid2<double>(1, 1, 2e10);
  demand.total_bits = Grid2<double>(1, 1, 2e7);
  demand.user_counts = {1.0};

  BidMatrix strong(1, 1), weak(1, 1);
  strong.compute_hz.at(0, 0) = 2e11;
  strong.bandwidth_hz.at(0, 0) = 2e6;
  weak.compute_hz.at(0, 0) = 1e11;
  weak.bandwidth_hz.at(0, 0) = 1e6;

  const AuctionResult r = run_auction({strong, weak}, demand, ch);
  r.validate();
  CHECK(r.winner_index.at(0, 0) == 0);
  CHECK(r.win.at(0, 0, 0) == 1);
  CHECK(r.win.at(1, 0, 0) == 0);
  CHECK(r.verified.at(0, 0, 0) == 1);
  CHECK(r.actual_delay_s.at(0, 0, 0) == doctest::Approx(r.committed_delay_s.at(0, 0, 0)));

  // overbidding: declared twice the resources, deployed the weak ones
  const AuctionResult dishonest = run_auction({strong, weak}, {weak, weak}, demand, ch);
  dishonest.validate();
  CHECK(dishonest.winner_index.at(0, 0) == 0);
  CHECK(dishonest.verified.at(0, 0, 0) == 0);

  BidMatrix nothing(1, 1);
  const AuctionResult r2 = run_auction({nothing, weak}, demand, ch);
  r2.validate();
  CHECK(r2.winner_index.at(0, 0) == 1);
  CHECK(r2.committed_delay_s.at(0, 0, 0) == kInf);

  // budget validation
  std::vector<double> budget_f = {1e11};
  std::vector<double> budget_b = {1e6};
  CHECK_NOTHROW(weak.validate(budget_f, budget_b));
  CHECK_THROWS_AS(strong.validate(budget_f, budget_b), std::invalid_argument);
}

TEST_CASE("exactly one winner per contested cell") {
  const ChannelParams ch = suburban_channel();
  DemandSummary demand;
  demand.required_cycles = Grid2<double>(2, 2, 1e10);
  demand.total_bits = Grid2<double>(2, 2, 1e7);
  demand.user_counts = {1.0, 1.0};
  RngStream rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<BidMatrix> bids(3, BidMatrix(2, 2));
    for (auto& bid : bids)
      for (std::size_t h = 0; h < 2; ++h)
        for (std::size_t k = 0; k < 2; ++k) {
          bid.compute_hz.at(h, k) = rng.uniform(1e10, 4e11);
          bid.bandwidth_hz.at(h, k) = rng.uniform(1e6, 4e8);
        }
    run_auction(bids, demand, ch).validate();
  }
}
