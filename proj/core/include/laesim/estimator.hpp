#pragma once

#include <cstddef>
#include <vector>

#include "laesim/policy.hpp"

namespace laesim {

struct EstimatorConfig {
  double discount = 0.9;        // gamma in (0, 1]
  double advantage_eps = 1e-8;  // guard for zero-variance returns

  void validate() const;
};

// Discounted reward-to-go, inclusive of the final step.
std::vector<double> returns(const std::vector<double>& rewards, double discount);

// Per-trajectory standardization with population std and an eps floor;
// constant returns map to all zeros.
std::vector<double> advantages(const std::vector<double>& returns_vec, double eps);

// Episodic policy gradient with per-step normalized returns, ascent sign:
// sum_t A(t) * grad log pi(a_t | o_t).
GradientVector trajectory_gradient(const Trajectory& traj, const PolicyParams& params,
                                   const EstimatorConfig& cfg);

// Mean of per-trajectory gradients over the batch.
GradientVector batch_gradient(const std::vector<Trajectory>& trajs, const PolicyParams& params,
                              const EstimatorConfig& cfg);

// Reported training-loss metric: the descent-signed surrogate
// -(1/B) sum_traj sum_t A(t) * log pi(a_t | o_t).
double surrogate_loss(const std::vector<Trajectory>& trajs, const PolicyParams& params,
                      const EstimatorConfig& cfg);

// Small flat-vector helpers shared by the aggregation path.
double vector_norm(const GradientVector& v);
double vector_distance(const GradientVector& a, const GradientVector& b);
void vector_add_scaled(GradientVector& dst, const GradientVector& src, double scale);

}  // namespace laesim
