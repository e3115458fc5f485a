#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "laesim/channel.hpp"
#include "laesim/env.hpp"
#include "laesim/grid.hpp"

namespace laesim {

// One SP's sealed bid: a (compute, bandwidth) allocation pair per
// (hotspot, service) cell. Column sums per service are capped by the SP's
// deployment budgets.
struct BidMatrix {
  Grid2<double> compute_hz;    // H x K
  Grid2<double> bandwidth_hz;  // H x K

  BidMatrix() = default;
  BidMatrix(std::size_t n_hotspots, std::size_t n_services)
      : compute_hz(n_hotspots, n_services), bandwidth_hz(n_hotspots, n_services) {}

  // Checks non-negativity and the per-service budget constraints.
  void validate(const std::vector<double>& budget_compute_hz,
                const std::vector<double>& budget_bandwidth_hz) const;
};

// Cost/bonus constants of the utility model. Costs and bonuses are per
// (SP, service); the penalty delay is shared.
struct UtilityParams {
  Grid2<double> unit_cost_w;     // N x K
  Grid2<double> winner_bonus_j;  // N x K
  double penalty_delay_s = 0.0;

  void validate(double delay_cap_s) const;
};

// Outcome of the H*K simultaneous sealed-bid auctions at one time step.
struct AuctionResult {
  Grid3<double> committed_delay_s;   // N x H x K, +inf encodes "no bid"
  Grid3<double> actual_delay_s;      // N x H x K
  Grid3<std::uint8_t> win;           // N x H x K
  Grid3<std::uint8_t> verified;      // N x H x K
  Grid2<int> winner_index;           // H x K, -1 when nobody bid

  std::size_t n_sps() const { return committed_delay_s.n(); }
  std::size_t n_hotspots() const { return committed_delay_s.rows(); }
  std::size_t n_services() const { return committed_delay_s.cols(); }

  void validate() const;
};

// Winner of one cell given the N committed delays: lowest delay wins, ties
// break toward the lowest SP index, and a cell where every entry is +inf has
// no winner.
struct CellResolution {
  int winner = -1;
  std::vector<std::uint8_t> win;
};
CellResolution resolve(const std::vector<double>& committed_delays);

// Overbid verification: a committed delay is honored iff the realized delay
// does not exceed it (boundary inclusive).
bool verify(double committed_delay_s, double actual_delay_s);

// Total (communication + processing) delay of serving one cell's demand with
// the given allocation pair. Throws on a zero allocation against positive
// demand; run_auction encodes that case as an infinite-delay no-bid instead.
double total_delay(double compute_hz, double bandwidth_hz, double required_cycles,
                   double total_bits, const ChannelParams& channel);

// Same quantity but total on the closed domain: returns +inf for a zero
// allocation against positive demand.
double cell_delay_or_inf(double compute_hz, double bandwidth_hz, double required_cycles,
                         double total_bits, const ChannelParams& channel);

// Runs all H*K auctions. `declared` carries the committed bids; `deployed`
// the realized allocations. Authentic SPs pass the same matrix for both.
AuctionResult run_auction(const std::vector<BidMatrix>& declared,
                          const std::vector<BidMatrix>& deployed, const DemandSummary& demand,
                          const ChannelParams& channel);

// Authentic-bidding shorthand: declared == deployed.
AuctionResult run_auction(const std::vector<BidMatrix>& bids, const DemandSummary& demand,
                          const ChannelParams& channel);

// SP utility: bonuses for verified wins minus costs charged on the actual
// delay. Cells the SP did not bid on contribute nothing.
double sp_utility(const AuctionResult& result, std::size_t n, const UtilityParams& params);

// Penalty-reformulated utility: cost of the actual delay when winning, cost
// of the penalty delay otherwise.
double modified_utility(const AuctionResult& result, std::size_t n, const UtilityParams& params);

// Weighted potential of the stage game: negative sum over SPs and cells of
// the winner's delay or the penalty delay.
double potential_value(const AuctionResult& result, const UtilityParams& params);

}  // namespace laesim
