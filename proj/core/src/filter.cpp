#include "laesim/filter.hpp"

#include <cmath>
#include <stdexcept>

namespace laesim {

void FilterConfig::validate() const {
  if (delta <= 0.0 || delta >= 1.0) throw std::invalid_argument("FilterConfig: delta outside (0, 1)");
  if (omega_eps < 0.0) throw std::invalid_argument("FilterConfig: negative omega_eps");
  if (byz_fraction_bound < 0.0 || byz_fraction_bound >= 0.5)
    throw std::invalid_argument("FilterConfig: alpha_B must be in [0, 0.5)");
}

std::vector<double> pairwise_distances(const std::vector<GradientVector>& grads) {
  if (grads.size() < 2) throw std::invalid_argument("pairwise_distances: need at least 2 gradients");
  std::vector<double> out;
  out.reserve(grads.size() * (grads.size() - 1) / 2);
  for (std::size_t i = 0; i < grads.size(); ++i)
    for (std::size_t j = i + 1; j < grads.size(); ++j)
      out.push_back(vector_distance(grads[i], grads[j]));
  return out;
}

double dynamic_bound(const std::vector<GradientVector>& grads, double omega) {
  const std::vector<double> dists = pairwise_distances(grads);
  const double n = static_cast<double>(dists.size());
  double mean = 0.0;
  for (double d : dists) mean += d;
  mean /= n;
  double var = 0.0;
  for (double d : dists) var += (d - mean) * (d - mean);
  var /= n;
  return mean + omega * std::sqrt(var);
}

double threshold(double epsilon, std::size_t batch_size, std::size_t n_nodes, double delta) {
  if (batch_size < 1) throw std::invalid_argument("threshold: batch size must be >= 1");
  if (delta <= 0.0 || delta >= 1.0) throw std::invalid_argument("threshold: delta outside (0, 1)");
  const double v = 2.0 * std::log(2.0 * static_cast<double>(n_nodes) / delta);
  return 2.0 * epsilon * std::sqrt(v / static_cast<double>(batch_size));
}

namespace {

FilterReport run_stage(const std::vector<GradientVector>& grads, double stage_threshold,
                       int stage_id, double epsilon) {
  const std::size_t n = grads.size();
  FilterReport report;
  report.epsilon = epsilon;
  report.threshold_used = stage_threshold;
  report.stage = stage_id;

  // Step 1: nodes whose neighborhood (self included) is a strict majority.
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t neighbors = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (vector_distance(grads[i], grads[j]) <= stage_threshold) ++neighbors;
    if (2 * neighbors > n) report.candidate_set.push_back(i);
  }
  if (report.candidate_set.empty()) return report;

  // Step 2: candidate closest to the candidate mean; ties to the lowest index.
  GradientVector mean(grads[0].size(), 0.0);
  for (std::size_t i : report.candidate_set) vector_add_scaled(mean, grads[i], 1.0);
  for (double& v : mean) v /= static_cast<double>(report.candidate_set.size());
  double best = -1.0;
  for (std::size_t i : report.candidate_set) {
    const double d = vector_distance(grads[i], mean);
    if (report.median_index < 0 || d < best) {
      best = d;
      report.median_index = static_cast<int>(i);
    }
  }

  // Step 3: everything within the threshold of the median gradient.
  for (std::size_t i = 0; i < n; ++i)
    if (vector_distance(grads[i], grads[static_cast<std::size_t>(report.median_index)]) <=
        stage_threshold)
      report.good_set.push_back(i);
  return report;
}

}  // namespace

FilterReport dtbf_with_epsilon(const std::vector<GradientVector>& grads, std::size_t batch_size,
                               const FilterConfig& cfg, double epsilon) {
  cfg.validate();
  if (grads.size() < 2) throw std::invalid_argument("dtbf: need at least 2 gradients");
  const double strict = threshold(epsilon, batch_size, grads.size(), cfg.delta);
  const double lenient = 2.0 * epsilon;
  const double required =
      (1.0 - cfg.byz_fraction_bound) * static_cast<double>(grads.size()) - 1e-9;

  FilterReport report;
  int stage_id = 0;
  for (double stage_threshold : {strict, lenient}) {
    ++stage_id;
    report = run_stage(grads, stage_threshold, stage_id, epsilon);
    if (static_cast<double>(report.good_set.size()) >= required) return report;
  }
  return report;  // last stage report; caller decides the fallback
}

FilterReport dtbf(const std::vector<GradientVector>& grads, std::size_t batch_size,
                  const FilterConfig& cfg) {
  if (grads.size() < 2) throw std::invalid_argument("dtbf: need at least 2 gradients");
  return dtbf_with_epsilon(grads, batch_size, cfg, dynamic_bound(grads, cfg.omega_eps));
}

}  // namespace laesim
