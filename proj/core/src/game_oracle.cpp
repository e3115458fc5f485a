#include "laesim/game_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace laesim::oracle {

namespace {

// delay[sp][cell][pair], authentic-bidding delays
using DelayTable = std::vector<std::vector<std::vector<double>>>;

DelayTable build_delay_table(const DiscreteGame& g) {
  DelayTable table(g.n_sps);
  for (std::size_t sp = 0; sp < g.n_sps; ++sp) {
    table[sp].resize(g.n_cells());
    for (std::size_t h = 0; h < g.n_hotspots; ++h) {
      for (std::size_t k = 0; k < g.n_services; ++k) {
        const std::size_t cell = g.cell_of(h, k);
        const double cycles = g.demand.required_cycles.at(h, k);
        const double bits = g.demand.total_bits.at(h, k);
        for (const AllocationPair& pair : g.pairs[sp][cell])
          table[sp][cell].push_back(
              total_delay(pair.compute_hz, pair.bandwidth_hz, cycles, bits, g.channel));
      }
    }
  }
  return table;
}

// Minimum delay and its SP index over everyone but `skip`.
struct OthersBest {
  double delay = std::numeric_limits<double>::infinity();
  std::size_t sp = 0;
};

OthersBest others_best(const DelayTable& delays, const Profile& profile, std::size_t cell,
                       std::size_t skip) {
  OthersBest best;
  for (std::size_t sp = 0; sp < profile.size(); ++sp) {
    if (sp == skip) continue;
    const double d = delays[sp][cell][profile[sp][cell]];
    if (d < best.delay) {
      best.delay = d;
      best.sp = sp;
    }
  }
  return best;
}

bool beats(double own_delay, std::size_t own_sp, const OthersBest& rival) {
  return own_delay < rival.delay || (own_delay == rival.delay && own_sp < rival.sp);
}

// Odometer over the per-cell pair indices of `sps`; calls fn for each joint
// assignment. Profile must be pre-sized.
template <typename Fn>
void enumerate_choices(const DiscreteGame& g, const std::vector<std::size_t>& sps,
                       Profile& profile, Fn&& fn) {
  std::vector<std::pair<std::size_t, std::size_t>> slots;  // (sp, cell)
  for (std::size_t sp : sps)
    for (std::size_t cell = 0; cell < g.n_cells(); ++cell) {
      slots.emplace_back(sp, cell);
      profile[sp][cell] = 0;
    }
  while (true) {
    fn();
    std::size_t i = 0;
    for (; i < slots.size(); ++i) {
      auto [sp, cell] = slots[i];
      if (++profile[sp][cell] < g.pairs[sp][cell].size()) break;
      profile[sp][cell] = 0;
    }
    if (i == slots.size()) return;
  }
}

std::size_t checked_mul(std::size_t a, std::size_t b) {
  if (b != 0 && a > std::numeric_limits<std::size_t>::max() / b)
    return std::numeric_limits<std::size_t>::max();
  return a * b;
}

std::size_t joint_profile_count(const DiscreteGame& g, std::size_t skip_sp) {
  std::size_t total = 1;
  for (std::size_t sp = 0; sp < g.n_sps; ++sp)
    if (sp != skip_sp) total = checked_mul(total, g.actions_per_sp(sp));
  return total;
}

double effective_bonus(const DiscreteGame& g, MechanismVariant variant, std::size_t sp,
                       std::size_t cell, double actual_delay) {
  const std::size_t k = g.service_of_cell(cell);
  const double v = g.utility.winner_bonus_j.at(sp, k);
  if (variant == MechanismVariant::delay_dependent_bonus)
    return v + 2.0 * g.utility.unit_cost_w.at(sp, k) * actual_delay;
  return v;
}

std::string describe_profile(const Profile& profile, std::size_t sp) {
  std::ostringstream os;
  os << "sp" << sp << " vs profile [";
  for (std::size_t n = 0; n < profile.size(); ++n) {
    if (n) os << "; ";
    for (std::size_t c = 0; c < profile[n].size(); ++c) {
      if (c) os << ",";
      os << profile[n][c];
    }
  }
  os << "]";
  return os.str();
}

}  // namespace

std::size_t DiscreteGame::actions_per_sp(std::size_t sp) const {
  std::size_t total = 1;
  for (const auto& cell : pairs[sp]) total = checked_mul(total, cell.size());
  return total;
}

void DiscreteGame::validate() const {
  if (n_sps < 2) throw std::invalid_argument("DiscreteGame: need at least 2 SPs");
  if (pairs.size() != n_sps) throw std::invalid_argument("DiscreteGame: pair list size mismatch");
  if (demand.n_hotspots() != n_hotspots || demand.n_services() != n_services)
    throw std::invalid_argument("DiscreteGame: demand shape mismatch");
  for (std::size_t h = 0; h < n_hotspots; ++h)
    for (std::size_t k = 0; k < n_services; ++k)
      if (demand.required_cycles.at(h, k) <= 0.0 || demand.total_bits.at(h, k) <= 0.0)
        throw std::invalid_argument("DiscreteGame: demand must be positive in every cell");
  for (const auto& sp_pairs : pairs) {
    if (sp_pairs.size() != n_cells())
      throw std::invalid_argument("DiscreteGame: per-cell list count mismatch");
    for (const auto& cell : sp_pairs) {
      if (cell.empty()) throw std::invalid_argument("DiscreteGame: empty candidate list");
      for (const AllocationPair& p : cell)
        if (p.compute_hz <= 0.0 || p.bandwidth_hz <= 0.0)
          throw std::invalid_argument("DiscreteGame: candidate allocations must be positive");
    }
  }
}

Profile random_profile(const DiscreteGame& game, RngStream& rng) {
  Profile profile(game.n_sps, std::vector<std::size_t>(game.n_cells(), 0));
  for (std::size_t sp = 0; sp < game.n_sps; ++sp)
    for (std::size_t cell = 0; cell < game.n_cells(); ++cell)
      profile[sp][cell] = static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<std::int64_t>(game.pairs[sp][cell].size()) - 1));
  return profile;
}

DemandSummary uniform_demand(std::size_t n_hotspots, std::size_t n_services, double cycles,
                             double bits) {
  DemandSummary d;
  d.required_cycles = Grid2<double>(n_hotspots, n_services, cycles);
  d.total_bits = Grid2<double>(n_hotspots, n_services, bits);
  d.user_counts.assign(n_hotspots, 1.0);
  return d;
}

namespace {

DiscreteGame finish_game(DiscreteGame&& g, double unit_cost_w, double winner_bonus_j) {
  g.utility.unit_cost_w = Grid2<double>(g.n_sps, g.n_services, unit_cost_w);
  g.utility.winner_bonus_j = Grid2<double>(g.n_sps, g.n_services, winner_bonus_j);
  double worst = 0.0;
  const DelayTable delays = build_delay_table(g);
  for (const auto& per_sp : delays)
    for (const auto& per_cell : per_sp)
      for (double d : per_cell) worst = std::max(worst, d);
  g.utility.penalty_delay_s = 100.0 * worst;
  g.utility.validate(worst);
  g.validate();
  return std::move(g);
}

}  // namespace

DiscreteGame make_single_cell_game(std::size_t n_sps, std::size_t f_levels, std::size_t b_levels,
                                   double budget_compute_hz, double budget_bandwidth_hz,
                                   const DemandSummary& demand, const ChannelParams& channel,
                                   double unit_cost_w, double winner_bonus_j) {
  if (f_levels < 1 || b_levels < 1) throw std::invalid_argument("make_single_cell_game: levels");
  DiscreteGame g;
  g.n_sps = n_sps;
  g.n_hotspots = 1;
  g.n_services = 1;
  g.demand = demand;
  g.channel = channel;
  g.pairs.assign(n_sps, {{}});
  for (std::size_t sp = 0; sp < n_sps; ++sp) {
    for (std::size_t i = 1; i <= f_levels; ++i)
      for (std::size_t j = 1; j <= b_levels; ++j)
        g.pairs[sp][0].push_back(
            {budget_compute_hz * static_cast<double>(i) / static_cast<double>(f_levels),
             budget_bandwidth_hz * static_cast<double>(j) / static_cast<double>(b_levels)});
  }
  return finish_game(std::move(g), unit_cost_w, winner_bonus_j);
}

DiscreteGame make_slice_game(std::size_t n_sps, std::size_t n_hotspots, std::size_t n_services,
                             std::size_t n_levels, double budget_compute_hz,
                             double budget_bandwidth_hz, const DemandSummary& demand,
                             const ChannelParams& channel, double unit_cost_w,
                             double winner_bonus_j) {
  if (n_levels < 1) throw std::invalid_argument("make_slice_game: levels");
  DiscreteGame g;
  g.n_sps = n_sps;
  g.n_hotspots = n_hotspots;
  g.n_services = n_services;
  g.demand = demand;
  g.channel = channel;
  const double f_slice = budget_compute_hz / static_cast<double>(n_hotspots);
  const double b_slice = budget_bandwidth_hz / static_cast<double>(n_hotspots);
  g.pairs.assign(n_sps, std::vector<std::vector<AllocationPair>>(g.n_cells()));
  for (std::size_t sp = 0; sp < n_sps; ++sp) {
    for (std::size_t cell = 0; cell < g.n_cells(); ++cell) {
      for (std::size_t lvl = 1; lvl <= n_levels; ++lvl) {
        const double frac = static_cast<double>(lvl) / static_cast<double>(n_levels);
        g.pairs[sp][cell].push_back({f_slice * frac, b_slice * frac});
      }
    }
  }
  return finish_game(std::move(g), unit_cost_w, winner_bonus_j);
}

AuthenticityReport check_authenticity(const DiscreteGame& game, MechanismVariant variant) {
  game.validate();
  const DelayTable delays = build_delay_table(game);
  AuthenticityReport report;

  // Per-cell lists of dominating pair indices (both resources >=, self
  // included so multi-cell declarations may leave cells untouched).
  std::vector<std::vector<std::vector<std::vector<std::size_t>>>> dominators(game.n_sps);
  for (std::size_t sp = 0; sp < game.n_sps; ++sp) {
    dominators[sp].resize(game.n_cells());
    for (std::size_t cell = 0; cell < game.n_cells(); ++cell) {
      const auto& list = game.pairs[sp][cell];
      dominators[sp][cell].resize(list.size());
      for (std::size_t a = 0; a < list.size(); ++a)
        for (std::size_t d = 0; d < list.size(); ++d)
          if (list[d].compute_hz >= list[a].compute_hz &&
              list[d].bandwidth_hz >= list[a].bandwidth_hz)
            dominators[sp][cell][a].push_back(d);
    }
  }

  for (std::size_t sp = 0; sp < game.n_sps && report.passed; ++sp) {
    // (actual, declared) tuples factorize: product over cells of the
    // per-cell dominator counts summed over actual pairs
    std::size_t tuples = 1;
    for (std::size_t cell = 0; cell < game.n_cells(); ++cell) {
      std::size_t dom_sum = 0;
      for (const auto& doms : dominators[sp][cell]) dom_sum += doms.size();
      tuples = checked_mul(tuples, dom_sum);
    }
    if (checked_mul(joint_profile_count(game, sp), tuples) > game.enumeration_cap * 8)
      throw EnumerationCapExceeded("check_authenticity: joint space exceeds enumeration cap");

    std::vector<std::size_t> others;
    for (std::size_t m = 0; m < game.n_sps; ++m)
      if (m != sp) others.push_back(m);

    Profile profile(game.n_sps, std::vector<std::size_t>(game.n_cells(), 0));
    enumerate_choices(game, others, profile, [&] {
      if (!report.passed) return;
      std::vector<OthersBest> rivals(game.n_cells());
      for (std::size_t cell = 0; cell < game.n_cells(); ++cell)
        rivals[cell] = others_best(delays, profile, cell, sp);

      // actual action of sp, then dominating declared actions
      std::vector<std::size_t> actual(game.n_cells(), 0);
      while (true) {
        std::vector<std::size_t> dom_pos(game.n_cells(), 0);
        while (true) {
          bool differs = false;
          for (std::size_t cell = 0; cell < game.n_cells(); ++cell)
            if (dominators[sp][cell][actual[cell]][dom_pos[cell]] != actual[cell]) differs = true;
          if (differs) {
            ++report.checks;
            double u_true = 0.0, u_false = 0.0;
            bool cell_violation = false;
            for (std::size_t cell = 0; cell < game.n_cells(); ++cell) {
              const std::size_t k = game.service_of_cell(cell);
              const std::size_t declared = dominators[sp][cell][actual[cell]][dom_pos[cell]];
              const double t_act = delays[sp][cell][actual[cell]];
              const double t_decl = delays[sp][cell][declared];
              const bool win_true = beats(t_act, sp, rivals[cell]);
              const bool win_false = beats(t_decl, sp, rivals[cell]);
              const bool verified =
                  variant == MechanismVariant::no_verification ? true : t_act <= t_decl;
              const double cost = game.utility.unit_cost_w.at(sp, k) * t_act;
              const double bonus = effective_bonus(game, variant, sp, cell, t_act);
              const double cell_true = -cost + (win_true ? bonus : 0.0);
              const double cell_false = -cost + (win_false && verified ? bonus : 0.0);
              u_true += cell_true;
              u_false += cell_false;
              if (declared != actual[cell]) {
                if (win_true && !win_false) {
                  report.passed = false;
                  report.violation = "inflated bid lost a won cell: " + describe_profile(profile, sp);
                  return;
                }
                const int case_id = win_true ? 2 : (win_false ? 1 : 0);
                ++report.case_counts[static_cast<std::size_t>(case_id)];
                if (case_id < 2 && cell_false != cell_true) report.equality_pattern_ok = false;
                if (case_id == 2 && !(cell_false < cell_true)) report.equality_pattern_ok = false;
              }
              if (cell_false > cell_true) cell_violation = true;
            }
            if (cell_violation || u_false > u_true + 1e-9 * (1.0 + std::abs(u_true))) {
              report.passed = false;
              std::ostringstream os;
              os << "profitable false bid: " << describe_profile(profile, sp)
                 << " u_true=" << u_true << " u_false=" << u_false;
              report.violation = os.str();
              return;
            }
          }
          std::size_t i = 0;
          for (; i < game.n_cells(); ++i) {
            if (++dom_pos[i] < dominators[sp][i][actual[i]].size()) break;
            dom_pos[i] = 0;
          }
          if (i == game.n_cells()) break;
        }
        std::size_t i = 0;
        for (; i < game.n_cells(); ++i) {
          if (++actual[i] < game.pairs[sp][i].size()) break;
          actual[i] = 0;
        }
        if (i == game.n_cells()) break;
      }
    });
  }
  return report;
}

OrderEquivalenceReport check_order_equivalence(const DiscreteGame& game, MechanismVariant variant) {
  game.validate();
  const DelayTable delays = build_delay_table(game);
  OrderEquivalenceReport report;

  for (std::size_t sp = 0; sp < game.n_sps && report.passed; ++sp) {
    const std::size_t n_actions = game.actions_per_sp(sp);
    if (checked_mul(joint_profile_count(game, sp), checked_mul(n_actions, n_actions)) >
        game.enumeration_cap * 8)
      throw EnumerationCapExceeded("check_order_equivalence: joint space exceeds enumeration cap");

    // materialize sp's action list once
    std::vector<std::vector<std::size_t>> actions;
    {
      std::vector<std::size_t> idx(game.n_cells(), 0);
      while (true) {
        actions.push_back(idx);
        std::size_t i = 0;
        for (; i < game.n_cells(); ++i) {
          if (++idx[i] < game.pairs[sp][i].size()) break;
          idx[i] = 0;
        }
        if (i == game.n_cells()) break;
      }
    }

    std::vector<std::size_t> others;
    for (std::size_t m = 0; m < game.n_sps; ++m)
      if (m != sp) others.push_back(m);

    Profile profile(game.n_sps, std::vector<std::size_t>(game.n_cells(), 0));
    enumerate_choices(game, others, profile, [&] {
      if (!report.passed) return;
      std::vector<OthersBest> rivals(game.n_cells());
      for (std::size_t cell = 0; cell < game.n_cells(); ++cell)
        rivals[cell] = others_best(delays, profile, cell, sp);

      auto utilities = [&](const std::vector<std::size_t>& action) {
        double u = 0.0, u_mod = 0.0;
        for (std::size_t cell = 0; cell < game.n_cells(); ++cell) {
          const std::size_t k = game.service_of_cell(cell);
          const double t = delays[sp][cell][action[cell]];
          const bool win = beats(t, sp, rivals[cell]);
          u += -game.utility.unit_cost_w.at(sp, k) * t +
               (win ? effective_bonus(game, variant, sp, cell, t) : 0.0);
          u_mod -= game.utility.unit_cost_w.at(sp, k) * (win ? t : game.utility.penalty_delay_s);
        }
        return std::pair{u, u_mod};
      };

      for (std::size_t a = 0; a < actions.size() && report.passed; ++a) {
        for (std::size_t b = a + 1; b < actions.size(); ++b) {
          bool a_ge = true, b_ge = true;  // cellwise delay comparisons
          for (std::size_t cell = 0; cell < game.n_cells(); ++cell) {
            const double da = delays[sp][cell][actions[a][cell]];
            const double db = delays[sp][cell][actions[b][cell]];
            if (da < db) a_ge = false;
            if (db < da) b_ge = false;
          }
          if (!a_ge && !b_ge) continue;  // incomparable
          const auto& slow = a_ge ? actions[a] : actions[b];
          const auto& fast = a_ge ? actions[b] : actions[a];
          const auto [u_slow, um_slow] = utilities(slow);
          const auto [u_fast, um_fast] = utilities(fast);
          ++report.checks;
          const double slack = 1e-9 * (1.0 + std::abs(u_slow) + std::abs(u_fast));
          if (u_slow > u_fast + slack || um_slow > um_fast + slack) {
            report.passed = false;
            std::ostringstream os;
            os << "order mismatch: " << describe_profile(profile, sp) << " u=(" << u_slow << ","
               << u_fast << ") modified=(" << um_slow << "," << um_fast << ")";
            report.violation = os.str();
            return;
          }
        }
      }
    });
  }
  return report;
}

namespace {

// Deviator-facing quantities for one profile: modified utility and the SP's
// own share of the potential.
std::pair<double, double> deviator_terms(const DiscreteGame& game, const DelayTable& delays,
                                         const Profile& profile, std::size_t sp) {
  double u_mod = 0.0, share = 0.0;
  for (std::size_t cell = 0; cell < game.n_cells(); ++cell) {
    const std::size_t k = game.service_of_cell(cell);
    const double t = delays[sp][cell][profile[sp][cell]];
    const OthersBest rival = others_best(delays, profile, cell, sp);
    const double term = beats(t, sp, rival) ? t : game.utility.penalty_delay_s;
    u_mod -= game.utility.unit_cost_w.at(sp, k) * term;
    share -= term;
  }
  return {u_mod, share};
}

}  // namespace

PotentialIdentityReport check_potential_identity(const DiscreteGame& game, std::size_t n_samples,
                                                 std::uint64_t seed) {
  game.validate();
  for (std::size_t sp = 0; sp < game.n_sps; ++sp)
    for (std::size_t k = 1; k < game.n_services; ++k)
      if (game.utility.unit_cost_w.at(sp, k) != game.utility.unit_cost_w.at(sp, 0))
        throw std::invalid_argument("check_potential_identity: per-SP cost must be constant over services");

  const DelayTable delays = build_delay_table(game);
  PotentialIdentityReport report;

  auto record = [&](const Profile& profile, std::size_t sp, const std::vector<std::size_t>& alt) {
    const double cost = game.utility.unit_cost_w.at(sp, 0);
    const auto [u_before, share_before] = deviator_terms(game, delays, profile, sp);
    Profile deviated = profile;
    deviated[sp] = alt;
    const auto [u_after, share_after] = deviator_terms(game, delays, deviated, sp);
    const double du = u_after - u_before;
    const double dshare = cost * (share_after - share_before);
    const double residual = std::abs(du - dshare);
    const double denom = std::max(std::abs(du), std::abs(dshare));
    report.max_abs_residual = std::max(report.max_abs_residual, residual);
    if (denom > 0.0) report.max_rel_residual = std::max(report.max_rel_residual, residual / denom);
    ++report.checks;
  };

  // exhaustive when the full deviation space is small enough
  std::size_t total = 0;
  bool exhaustive = true;
  for (std::size_t sp = 0; sp < game.n_sps; ++sp) {
    const std::size_t deviations =
        checked_mul(joint_profile_count(game, sp),
                    checked_mul(game.actions_per_sp(sp), game.actions_per_sp(sp)));
    if (deviations > game.enumeration_cap) exhaustive = false;
    total += deviations;
  }
  if (exhaustive && total <= game.enumeration_cap) {
    std::vector<std::size_t> all(game.n_sps);
    for (std::size_t sp = 0; sp < game.n_sps; ++sp) all[sp] = sp;
    Profile profile(game.n_sps, std::vector<std::size_t>(game.n_cells(), 0));
    enumerate_choices(game, all, profile, [&] {
      for (std::size_t sp = 0; sp < game.n_sps; ++sp) {
        std::vector<std::size_t> alt(game.n_cells(), 0);
        while (true) {
          if (alt != profile[sp]) record(profile, sp, alt);
          std::size_t i = 0;
          for (; i < game.n_cells(); ++i) {
            if (++alt[i] < game.pairs[sp][i].size()) break;
            alt[i] = 0;
          }
          if (i == game.n_cells()) break;
        }
      }
    });
  } else {
    RngStream rng = RngStream::derive(seed, 0x0dac1e);
    for (std::size_t s = 0; s < n_samples; ++s) {
      const Profile profile = random_profile(game, rng);
      const auto sp = static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<std::int64_t>(game.n_sps) - 1));
      std::vector<std::size_t> alt(game.n_cells());
      for (std::size_t cell = 0; cell < game.n_cells(); ++cell)
        alt[cell] = static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<std::int64_t>(game.pairs[sp][cell].size()) - 1));
      record(profile, sp, alt);
    }
  }
  return report;
}

double profile_modified_utility(const DiscreteGame& game, const Profile& profile, std::size_t sp) {
  const DelayTable delays = build_delay_table(game);
  return deviator_terms(game, delays, profile, sp).first;
}

double profile_potential(const DiscreteGame& game, const Profile& profile) {
  const DelayTable delays = build_delay_table(game);
  double total = 0.0;
  for (std::size_t cell = 0; cell < game.n_cells(); ++cell) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t winner = 0;
    for (std::size_t sp = 0; sp < game.n_sps; ++sp) {
      const double d = delays[sp][cell][profile[sp][cell]];
      if (d < best) {
        best = d;
        winner = sp;
      }
    }
    for (std::size_t sp = 0; sp < game.n_sps; ++sp)
      total -= sp == winner ? delays[sp][cell][profile[sp][cell]] : game.utility.penalty_delay_s;
  }
  return total;
}

NeCertificate best_response_dynamics(const DiscreteGame& game, const Profile& start,
                                     std::size_t max_iters) {
  game.validate();
  const DelayTable delays = build_delay_table(game);
  NeCertificate cert;
  cert.profile = start;
  cert.potential_path.push_back(profile_potential(game, cert.profile));

  // Modified utility is separable over cells, so a best response optimizes
  // each cell independently; current choice is kept on ties.
  auto best_response = [&](std::size_t sp, bool apply) {
    double gain = 0.0;
    std::vector<std::size_t> best_action = cert.profile[sp];
    for (std::size_t cell = 0; cell < game.n_cells(); ++cell) {
      const std::size_t k = game.service_of_cell(cell);
      const double cost = game.utility.unit_cost_w.at(sp, k);
      const OthersBest rival = others_best(delays, cert.profile, cell, sp);
      auto cell_utility = [&](std::size_t pair_idx) {
        const double t = delays[sp][cell][pair_idx];
        return -cost * (beats(t, sp, rival) ? t : game.utility.penalty_delay_s);
      };
      const double current = cell_utility(cert.profile[sp][cell]);
      double best = current;
      std::size_t best_idx = cert.profile[sp][cell];
      for (std::size_t p = 0; p < game.pairs[sp][cell].size(); ++p) {
        const double u = cell_utility(p);
        if (u > best) {
          best = u;
          best_idx = p;
        }
      }
      gain += best - current;
      best_action[cell] = best_idx;
    }
    if (apply && gain > 0.0) cert.profile[sp] = best_action;
    return gain;
  };

  for (std::size_t round = 0; round < max_iters; ++round) {
    bool moved = false;
    for (std::size_t sp = 0; sp < game.n_sps; ++sp) {
      if (best_response(sp, /*apply=*/true) > 0.0) {
        moved = true;
        ++cert.improvement_path_len;
        cert.potential_path.push_back(profile_potential(game, cert.profile));
      }
    }
    if (!moved) {
      cert.converged = true;
      break;
    }
  }

  cert.max_unilateral_gain = 0.0;
  for (std::size_t sp = 0; sp < game.n_sps; ++sp)
    cert.max_unilateral_gain = std::max(cert.max_unilateral_gain, best_response(sp, false));
  if (cert.max_unilateral_gain > 0.0) cert.converged = false;
  return cert;
}

StagewiseReport check_stagewise_optimality(const std::vector<DiscreteGame>& stages,
                                           std::size_t max_iters) {
  if (stages.empty()) throw std::invalid_argument("check_stagewise_optimality: no stages");
  StagewiseReport report;
  std::vector<DelayTable> delays;
  for (const DiscreteGame& stage : stages) {
    stage.validate();
    if (stage.n_sps != stages.front().n_sps)
      throw std::invalid_argument("check_stagewise_optimality: SP count varies across stages");
    delays.push_back(build_delay_table(stage));
    const Profile start(stage.n_sps, std::vector<std::size_t>(stage.n_cells(), 0));
    report.stage_equilibria.push_back(best_response_dynamics(stage, start, max_iters));
    if (!report.stage_equilibria.back().converged) {
      report.passed = false;
      report.violation = "stage equilibrium search did not converge";
      return report;
    }
  }

  const std::size_t n_sps = stages.front().n_sps;
  for (std::size_t sp = 0; sp < n_sps; ++sp) {
    std::size_t sequences = 1;
    for (const DiscreteGame& stage : stages)
      sequences = checked_mul(sequences, stage.actions_per_sp(sp));
    if (sequences > stages.front().enumeration_cap)
      throw EnumerationCapExceeded("check_stagewise_optimality: sequence space exceeds cap");

    double ne_total = 0.0;
    // per-stage alternative utilities, enumerated once
    std::vector<std::vector<double>> stage_utils(stages.size());
    for (std::size_t t = 0; t < stages.size(); ++t) {
      const DiscreteGame& stage = stages[t];
      const Profile& ne = report.stage_equilibria[t].profile;
      ne_total += deviator_terms(stage, delays[t], ne, sp).first;
      std::vector<std::size_t> alt(stage.n_cells(), 0);
      while (true) {
        Profile deviated = ne;
        deviated[sp] = alt;
        stage_utils[t].push_back(deviator_terms(stage, delays[t], deviated, sp).first);
        std::size_t i = 0;
        for (; i < stage.n_cells(); ++i) {
          if (++alt[i] < stage.pairs[sp][i].size()) break;
          alt[i] = 0;
        }
        if (i == stage.n_cells()) break;
      }
    }

    // all alternative sequences: odometer over per-stage action ids
    std::vector<std::size_t> seq(stages.size(), 0);
    while (true) {
      double total = 0.0;
      for (std::size_t t = 0; t < stages.size(); ++t) total += stage_utils[t][seq[t]];
      ++report.checks;
      if (total > ne_total + 1e-9 * (1.0 + std::abs(ne_total))) {
        report.passed = false;
        std::ostringstream os;
        os << "sequence beats stagewise equilibria for sp " << sp << ": " << total << " > "
           << ne_total;
        report.violation = os.str();
        return report;
      }
      std::size_t t = 0;
      for (; t < stages.size(); ++t) {
        if (++seq[t] < stage_utils[t].size()) break;
        seq[t] = 0;
      }
      if (t == stages.size()) break;
    }
  }
  return report;
}

}  // namespace laesim::oracle
