#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "laesim/auction.hpp"
#include "laesim/channel.hpp"
#include "laesim/env.hpp"
#include "laesim/rng.hpp"

namespace laesim::oracle {

struct AllocationPair {
  double compute_hz = 0.0;
  double bandwidth_hz = 0.0;
};

// Finite stage game for exhaustive verification. Candidate pairs are listed
// per (SP, cell); an action picks one pair per cell. Lists are pre-filtered:
// every cell's candidates fit inside the per-hotspot budget slice, so any
// joint selection satisfies the per-service budget constraints.
struct DiscreteGame {
  std::size_t n_sps = 0;
  std::size_t n_hotspots = 0;
  std::size_t n_services = 0;
  DemandSummary demand;
  ChannelParams channel;
  UtilityParams utility;
  // pairs[sp][cell] with cell = h * n_services + k
  std::vector<std::vector<std::vector<AllocationPair>>> pairs;
  std::size_t enumeration_cap = 1'000'000;

  std::size_t n_cells() const { return n_hotspots * n_services; }
  std::size_t cell_of(std::size_t h, std::size_t k) const { return h * n_services + k; }
  std::size_t service_of_cell(std::size_t cell) const { return cell % n_services; }
  // product of per-cell list sizes
  std::size_t actions_per_sp(std::size_t sp) const;
  void validate() const;
};

// pair index per (sp, cell)
using Profile = std::vector<std::vector<std::size_t>>;

Profile random_profile(const DiscreteGame& game, RngStream& rng);

// Demand with every cell at the same (cycles, bits) load.
DemandSummary uniform_demand(std::size_t n_hotspots, std::size_t n_services, double cycles,
                             double bits);

// H = K = 1 game over the full budget: f_levels x b_levels fraction pairs
// (1/L, 2/L, ..., 1) per SP.
DiscreteGame make_single_cell_game(std::size_t n_sps, std::size_t f_levels, std::size_t b_levels,
                                   double budget_compute_hz, double budget_bandwidth_hz,
                                   const DemandSummary& demand, const ChannelParams& channel,
                                   double unit_cost_w, double winner_bonus_j);

// General game with `n_levels` diagonal fraction pairs of the per-hotspot
// budget slice in every cell.
DiscreteGame make_slice_game(std::size_t n_sps, std::size_t n_hotspots, std::size_t n_services,
                             std::size_t n_levels, double budget_compute_hz,
                             double budget_bandwidth_hz, const DemandSummary& demand,
                             const ChannelParams& channel, double unit_cost_w,
                             double winner_bonus_j);

struct EnumerationCapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Synthetic mechanism variants used as negative controls.
enum class MechanismVariant {
  standard,
  no_verification,        // pays the bonus regardless of the overbid check
  delay_dependent_bonus,  // bonus grows with the realized delay
};

struct AuthenticityReport {
  bool passed = true;
  std::size_t checks = 0;
  // per-cell transition counts: [still-loses, wins-from-losing, still-wins]
  std::array<std::size_t, 3> case_counts{};
  bool equality_pattern_ok = true;  // cases 1-2 equal, case 3 strictly worse
  std::string violation;
};

// Sweeps every (opponents' profile, actual action, inflated declared action)
// tuple: declared dominates actual cellwise in both resources. With the
// standard mechanism a false bid never pays.
AuthenticityReport check_authenticity(const DiscreteGame& game,
                                      MechanismVariant variant = MechanismVariant::standard);

struct OrderEquivalenceReport {
  bool passed = true;
  std::size_t checks = 0;
  std::string violation;
};

// For every unilateral action pair whose cell delays are uniformly ordered,
// the original and penalty-reformulated utilities must order the same way.
OrderEquivalenceReport check_order_equivalence(const DiscreteGame& game,
                                               MechanismVariant variant = MechanismVariant::standard);

struct PotentialIdentityReport {
  std::size_t checks = 0;
  double max_abs_residual = 0.0;
  double max_rel_residual = 0.0;
};

// Verifies the per-deviator weighted-potential identity
//   delta modified_utility_n == C_n * delta potential_share_n
// where the potential share collects SP n's own winner-delay / penalty terms
// (the quantity whose deltas the stage-game case analysis tracks; the
// all-SPs potential is reported by potential_value and is ordinal only).
// Exhaustive when the deviation count fits the cap, otherwise `n_samples`
// seeded random unilateral deviations. Requires per-SP constant costs.
PotentialIdentityReport check_potential_identity(const DiscreteGame& game, std::size_t n_samples,
                                                 std::uint64_t seed);

struct NeCertificate {
  Profile profile;
  std::size_t improvement_path_len = 0;
  double max_unilateral_gain = 0.0;
  std::vector<double> potential_path;  // full potential after each accepted move
  bool converged = false;
};

// Round-robin best-response dynamics on the modified utility; terminates at
// a profile with no strictly improving unilateral deviation.
NeCertificate best_response_dynamics(const DiscreteGame& game, const Profile& start,
                                     std::size_t max_iters);

struct StagewiseReport {
  bool passed = true;
  std::size_t checks = 0;
  std::string violation;
  std::vector<NeCertificate> stage_equilibria;
};

// Checks that concatenating per-stage equilibria beats every alternative
// unilateral per-stage action sequence in total modified utility.
StagewiseReport check_stagewise_optimality(const std::vector<DiscreteGame>& stages,
                                           std::size_t max_iters);

// Exact total modified utility of `sp` under `profile`.
double profile_modified_utility(const DiscreteGame& game, const Profile& profile, std::size_t sp);

// Full-potential value of `profile` (authentic bidding).
double profile_potential(const DiscreteGame& game, const Profile& profile);

}  // namespace laesim::oracle
