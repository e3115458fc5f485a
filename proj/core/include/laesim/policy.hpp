#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "laesim/auction.hpp"
#include "laesim/env.hpp"
#include "laesim/grid.hpp"
#include "laesim/rng.hpp"
#include "laesim/scenario.hpp"

namespace laesim {

using GradientVector = std::vector<double>;

// Fixed-size encoding of what one SP can see: normalized per-cell demand,
// its own previous-step auction outcomes, normalized user counts, and the
// time fraction. Flattened feature layout (dimension 3HK + H + 1):
//   [Λ_hk, bits_hk] pairs row-major over (h, k) | prev_wins row-major |
//   user_counts | time_frac
struct Observation {
  Grid2<double> demand_cycles;  // H x K, normalized
  Grid2<double> demand_bits;    // H x K, normalized
  Grid2<double> prev_wins;      // H x K, binary
  std::vector<double> user_counts;
  double time_frac = 0.0;

  std::size_t dim() const {
    return 3 * demand_cycles.rows() * demand_cycles.cols() + user_counts.size() + 1;
  }
  std::vector<double> flatten() const;
};

Observation encode_observation(const std::vector<HotspotState>& hotspots,
                               const Grid2<std::uint8_t>& prev_wins, std::size_t t,
                               std::size_t horizon, std::size_t n_services,
                               const ObservationScales& scales);

// Three fully connected layers (tanh, tanh, linear) followed by
// softplus + 1e-3 so every Dirichlet concentration stays positive.
// Output dimension is 2KH: one concentration per (service, resource,
// hotspot), index (k * 2 + resource) * H + h with resource 0 = compute,
// 1 = bandwidth.
struct PolicyParams {
  std::size_t input_dim = 0, hidden_dim = 0, output_dim = 0;
  Grid2<double> w1, w2, w3;  // hidden x input, hidden x hidden, output x hidden
  std::vector<double> b1, b2, b3;

  static PolicyParams init(std::size_t input_dim, std::size_t hidden_dim, std::size_t output_dim,
                           std::uint64_t seed);

  std::size_t param_count() const;
  GradientVector flatten() const;
  static PolicyParams unflatten(std::size_t input_dim, std::size_t hidden_dim,
                                std::size_t output_dim, const GradientVector& flat);
  // params += scale * direction
  void add_scaled(const GradientVector& direction, double scale);
};

constexpr double kConcentrationFloor = 1e-3;
constexpr double kFractionFloor = 1e-8;

// Concentration vector for one observation; throws on non-finite values.
std::vector<double> forward(const PolicyParams& params, const Observation& obs);

// One per-(service, resource) point on the H-simplex each.
struct ActionFractions {
  std::size_t n_hotspots = 0, n_services = 0;
  std::vector<double> values;  // same layout as concentrations

  double at(std::size_t k, std::size_t resource, std::size_t h) const {
    return values[(k * 2 + resource) * n_hotspots + h];
  }
};

// Gamma-draw-and-normalize Dirichlet sampling per block, with a small floor
// and renormalization so downstream logs stay finite.
ActionFractions sample_action(const std::vector<double>& concentrations, std::size_t n_hotspots,
                              std::size_t n_services, RngStream& rng);

// Scales simplex fractions by the SP's per-service budgets; column sums hit
// the budgets exactly.
BidMatrix to_bid(const ActionFractions& fractions, const std::vector<double>& budget_compute_hz,
                 const std::vector<double>& budget_bandwidth_hz);

// One experience slice and a fixed-horizon episode of them.
struct TrajectoryStep {
  Observation obs;
  ActionFractions action;
  double reward = 0.0;
};

struct Trajectory {
  std::vector<TrajectoryStep> steps;
  std::size_t length() const { return steps.size(); }
};

// Sum of Dirichlet log-densities over the 2K blocks.
double log_prob(const std::vector<double>& concentrations, const ActionFractions& fractions);

// Exact reverse-mode gradient of log_prob(forward(params, obs), fractions)
// with respect to every parameter. Flat layout: w1 | b1 | w2 | b2 | w3 | b3,
// matrices row-major.
GradientVector grad_log_prob(const PolicyParams& params, const Observation& obs,
                             const ActionFractions& fractions);

}  // namespace laesim
