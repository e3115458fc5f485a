#include "laesim/auction.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace laesim {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void BidMatrix::validate(const std::vector<double>& budget_compute_hz,
                         const std::vector<double>& budget_bandwidth_hz) const {
  if (!compute_hz.same_shape(bandwidth_hz))
    throw std::invalid_argument("BidMatrix: shape mismatch between resources");
  const std::size_t n_services = compute_hz.cols();
  if (budget_compute_hz.size() != n_services || budget_bandwidth_hz.size() != n_services)
    throw std::invalid_argument("BidMatrix: budget vector length mismatch");
  for (std::size_t k = 0; k < n_services; ++k) {
    double f_sum = 0.0, b_sum = 0.0;
    for (std::size_t h = 0; h < compute_hz.rows(); ++h) {
      if (compute_hz.at(h, k) < 0.0 || bandwidth_hz.at(h, k) < 0.0)
        throw std::invalid_argument("BidMatrix: negative allocation");
      f_sum += compute_hz.at(h, k);
      b_sum += bandwidth_hz.at(h, k);
    }
    // Small slack absorbs accumulation error in fraction-built bids.
    if (f_sum > budget_compute_hz[k] * (1.0 + 1e-12) ||
        b_sum > budget_bandwidth_hz[k] * (1.0 + 1e-12))
      throw std::invalid_argument("BidMatrix: budget constraint violated");
  }
}

void UtilityParams::validate(double delay_cap_s) const {
  if (!unit_cost_w.same_shape(winner_bonus_j))
    throw std::invalid_argument("UtilityParams: shape mismatch");
  for (std::size_t i = 0; i < unit_cost_w.size(); ++i) {
    if (unit_cost_w.data()[i] < 0.0 || winner_bonus_j.data()[i] < 0.0)
      throw std::invalid_argument("UtilityParams: negative constant");
  }
  if (penalty_delay_s <= delay_cap_s)
    throw std::invalid_argument("UtilityParams: penalty delay must exceed the delay cap");
}

void AuctionResult::validate() const {
  for (std::size_t h = 0; h < n_hotspots(); ++h) {
    for (std::size_t k = 0; k < n_services(); ++k) {
      int winners = 0;
      bool any_bid = false;
      for (std::size_t n = 0; n < n_sps(); ++n) {
        winners += win.at(n, h, k);
        any_bid = any_bid || std::isfinite(committed_delay_s.at(n, h, k));
        const bool v = actual_delay_s.at(n, h, k) <= committed_delay_s.at(n, h, k);
        if (v != static_cast<bool>(verified.at(n, h, k)))
          throw std::logic_error("AuctionResult: verification flag inconsistent");
      }
      if (any_bid ? winners != 1 : winners != 0)
        throw std::logic_error("AuctionResult: winner count inconsistent");
      if (any_bid && (winner_index.at(h, k) < 0 ||
                      !win.at(static_cast<std::size_t>(winner_index.at(h, k)), h, k)))
        throw std::logic_error("AuctionResult: winner index inconsistent");
    }
  }
}

CellResolution resolve(const std::vector<double>& committed_delays) {
  CellResolution out;
  out.win.assign(committed_delays.size(), 0);
  double best = kInf;
  for (std::size_t n = 0; n < committed_delays.size(); ++n) {
    const double d = committed_delays[n];
    if (d < 0.0 || std::isnan(d))
      throw std::invalid_argument("resolve: committed delays must be >= 0");
    if (d < best) {
      best = d;
      out.winner = static_cast<int>(n);
    }
  }
  if (out.winner >= 0) out.win[static_cast<std::size_t>(out.winner)] = 1;
  return out;
}

bool verify(double committed_delay_s, double actual_delay_s) {
  return actual_delay_s <= committed_delay_s;
}

double total_delay(double compute_hz, double bandwidth_hz, double required_cycles,
                   double total_bits, const ChannelParams& channel) {
  const double comp = comp_delay_s(required_cycles, compute_hz);
  double comm = 0.0;
  if (total_bits > 0.0) {
    const double p_los = los_probability(90.0, channel);
    const double loss = path_loss_db(channel.altitude_m, p_los, channel);
    comm = comm_delay_s(total_bits, avg_rate_bps(bandwidth_hz, loss, channel));
  }
  return comp + comm;
}

double cell_delay_or_inf(double compute_hz, double bandwidth_hz, double required_cycles,
                         double total_bits, const ChannelParams& channel) {
  if ((required_cycles > 0.0 && compute_hz <= 0.0) || (total_bits > 0.0 && bandwidth_hz <= 0.0))
    return kInf;
  return total_delay(compute_hz, bandwidth_hz, required_cycles, total_bits, channel);
}

AuctionResult run_auction(const std::vector<BidMatrix>& declared,
                          const std::vector<BidMatrix>& deployed, const DemandSummary& demand,
                          const ChannelParams& channel) {
  if (declared.size() != deployed.size() || declared.empty())
    throw std::invalid_argument("run_auction: bid list size mismatch");
  const std::size_t n_sps = declared.size();
  const std::size_t n_hotspots = demand.n_hotspots();
  const std::size_t n_services = demand.n_services();

  AuctionResult res;
  res.committed_delay_s = Grid3<double>(n_sps, n_hotspots, n_services);
  res.actual_delay_s = Grid3<double>(n_sps, n_hotspots, n_services);
  res.win = Grid3<std::uint8_t>(n_sps, n_hotspots, n_services);
  res.verified = Grid3<std::uint8_t>(n_sps, n_hotspots, n_services);
  res.winner_index = Grid2<int>(n_hotspots, n_services, -1);

  std::vector<double> committed(n_sps);
  for (std::size_t h = 0; h < n_hotspots; ++h) {
    for (std::size_t k = 0; k < n_services; ++k) {
      const double cycles = demand.required_cycles.at(h, k);
      const double bits = demand.total_bits.at(h, k);
      for (std::size_t n = 0; n < n_sps; ++n) {
        const double c = cell_delay_or_inf(declared[n].compute_hz.at(h, k),
                                           declared[n].bandwidth_hz.at(h, k), cycles, bits, channel);
        const double a = cell_delay_or_inf(deployed[n].compute_hz.at(h, k),
                                           deployed[n].bandwidth_hz.at(h, k), cycles, bits, channel);
        res.committed_delay_s.at(n, h, k) = c;
        res.actual_delay_s.at(n, h, k) = a;
        res.verified.at(n, h, k) = verify(c, a) ? 1 : 0;
        committed[n] = c;
      }
      const CellResolution cell = resolve(committed);
      res.winner_index.at(h, k) = cell.winner;
      for (std::size_t n = 0; n < n_sps; ++n) res.win.at(n, h, k) = cell.win[n];
    }
  }
  return res;
}

AuctionResult run_auction(const std::vector<BidMatrix>& bids, const DemandSummary& demand,
                          const ChannelParams& channel) {
  return run_auction(bids, bids, demand, channel);
}

double sp_utility(const AuctionResult& result, std::size_t n, const UtilityParams& params) {
  double total = 0.0;
  for (std::size_t h = 0; h < result.n_hotspots(); ++h) {
    for (std::size_t k = 0; k < result.n_services(); ++k) {
      const double actual = result.actual_delay_s.at(n, h, k);
      if (!std::isfinite(actual)) continue;  // no deployment, no service episode
      const double cost = params.unit_cost_w.at(n, k) * actual;
      const double bonus = params.winner_bonus_j.at(n, k) *
                           static_cast<double>(result.win.at(n, h, k)) *
                           static_cast<double>(result.verified.at(n, h, k));
      total -= cost - bonus;
    }
  }
  return total;
}

double modified_utility(const AuctionResult& result, std::size_t n, const UtilityParams& params) {
  double total = 0.0;
  for (std::size_t h = 0; h < result.n_hotspots(); ++h) {
    for (std::size_t k = 0; k < result.n_services(); ++k) {
      const double t = result.win.at(n, h, k) ? result.actual_delay_s.at(n, h, k)
                                              : params.penalty_delay_s;
      total -= params.unit_cost_w.at(n, k) * t;
    }
  }
  return total;
}

double potential_value(const AuctionResult& result, const UtilityParams& params) {
  double total = 0.0;
  for (std::size_t n = 0; n < result.n_sps(); ++n) {
    for (std::size_t h = 0; h < result.n_hotspots(); ++h) {
      for (std::size_t k = 0; k < result.n_services(); ++k) {
        total -= result.win.at(n, h, k) ? result.actual_delay_s.at(n, h, k)
                                        : params.penalty_delay_s;
      }
    }
  }
  return total;
}

}  // namespace laesim
