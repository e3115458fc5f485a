#pragma once

#include <cstddef>
#include <vector>

#include "laesim/estimator.hpp"

namespace laesim {

struct FilterConfig {
  double delta = 0.5;             // confidence, in (0, 1)
  double omega_eps = 1.0;         // std weight in the dynamic bound
  double byz_fraction_bound = 0.4;  // assumed alpha_B, in [0, 0.5)

  void validate() const;
};

// Outcome of one filtering pass.
struct FilterReport {
  std::vector<std::size_t> good_set;
  std::vector<std::size_t> candidate_set;
  double epsilon = 0.0;         // dynamic variance bound used
  double threshold_used = 0.0;  // threshold of the stage that produced good_set
  int median_index = -1;
  int stage = 0;  // 1 = strict threshold, 2 = lenient
};

// Euclidean distances over unordered distinct pairs, ordered
// (0,1), (0,2), ..., (0,N-1), (1,2), ...
std::vector<double> pairwise_distances(const std::vector<GradientVector>& grads);

// mean + omega * population-std of the pairwise distances.
double dynamic_bound(const std::vector<GradientVector>& grads, double omega);

// Strict-stage gradient threshold 2 * eps * sqrt(V / B), V = 2 ln(2N / delta).
double threshold(double epsilon, std::size_t batch_size, std::size_t n_nodes, double delta);

// Two-stage dynamic-threshold Byzantine filtering. Each stage: keep nodes
// with a strict neighbor majority (self included), take the candidate
// closest to the candidate mean as the median, then admit everything within
// the stage threshold of it. Falls through to the lenient threshold when the
// good set is smaller than (1 - alpha_B) * N.
FilterReport dtbf(const std::vector<GradientVector>& grads, std::size_t batch_size,
                  const FilterConfig& cfg);

// Same staging but with a caller-fixed epsilon (static-screening baseline).
FilterReport dtbf_with_epsilon(const std::vector<GradientVector>& grads, std::size_t batch_size,
                               const FilterConfig& cfg, double epsilon);

}  // namespace laesim
