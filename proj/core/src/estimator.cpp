#include "laesim/estimator.hpp"

#include <cmath>
#include <stdexcept>

namespace laesim {

void EstimatorConfig::validate() const {
  if (discount <= 0.0 || discount > 1.0)
    throw std::invalid_argument("EstimatorConfig: discount must be in (0, 1]");
  if (advantage_eps <= 0.0)
    throw std::invalid_argument("EstimatorConfig: advantage_eps must be positive");
}

std::vector<double> returns(const std::vector<double>& rewards, double discount) {
  if (rewards.empty()) throw std::invalid_argument("returns: empty reward vector");
  std::vector<double> out(rewards.size());
  double acc = 0.0;
  for (std::size_t i = rewards.size(); i-- > 0;) {
    acc = rewards[i] + discount * acc;
    out[i] = acc;
  }
  return out;
}

std::vector<double> advantages(const std::vector<double>& returns_vec, double eps) {
  if (returns_vec.empty()) throw std::invalid_argument("advantages: empty returns");
  const double n = static_cast<double>(returns_vec.size());
  double mean = 0.0;
  for (double r : returns_vec) mean += r;
  mean /= n;
  double var = 0.0;
  for (double r : returns_vec) var += (r - mean) * (r - mean);
  var /= n;
  const double denom = std::max(std::sqrt(var), eps);
  std::vector<double> out(returns_vec.size());
  for (std::size_t i = 0; i < returns_vec.size(); ++i) out[i] = (returns_vec[i] - mean) / denom;
  return out;
}

GradientVector trajectory_gradient(const Trajectory& traj, const PolicyParams& params,
                                   const EstimatorConfig& cfg) {
  cfg.validate();
  if (traj.steps.empty()) throw std::invalid_argument("trajectory_gradient: empty trajectory");
  std::vector<double> rewards(traj.steps.size());
  for (std::size_t t = 0; t < traj.steps.size(); ++t) rewards[t] = traj.steps[t].reward;
  const std::vector<double> adv = advantages(returns(rewards, cfg.discount), cfg.advantage_eps);

  GradientVector total(params.param_count(), 0.0);
  for (std::size_t t = 0; t < traj.steps.size(); ++t) {
    if (adv[t] == 0.0) continue;
    const GradientVector g = grad_log_prob(params, traj.steps[t].obs, traj.steps[t].action);
    vector_add_scaled(total, g, adv[t]);
  }
  return total;
}

GradientVector batch_gradient(const std::vector<Trajectory>& trajs, const PolicyParams& params,
                              const EstimatorConfig& cfg) {
  if (trajs.empty()) throw std::invalid_argument("batch_gradient: empty batch");
  GradientVector total(params.param_count(), 0.0);
  for (const Trajectory& traj : trajs)
    vector_add_scaled(total, trajectory_gradient(traj, params, cfg), 1.0);
  const double inv = 1.0 / static_cast<double>(trajs.size());
  for (double& v : total) v *= inv;
  return total;
}

double surrogate_loss(const std::vector<Trajectory>& trajs, const PolicyParams& params,
                      const EstimatorConfig& cfg) {
  if (trajs.empty()) throw std::invalid_argument("surrogate_loss: empty batch");
  cfg.validate();
  double total = 0.0;
  for (const Trajectory& traj : trajs) {
    std::vector<double> rewards(traj.steps.size());
    for (std::size_t t = 0; t < traj.steps.size(); ++t) rewards[t] = traj.steps[t].reward;
    const std::vector<double> adv = advantages(returns(rewards, cfg.discount), cfg.advantage_eps);
    for (std::size_t t = 0; t < traj.steps.size(); ++t) {
      const std::vector<double> conc = forward(params, traj.steps[t].obs);
      total += adv[t] * log_prob(conc, traj.steps[t].action);
    }
  }
  return -total / static_cast<double>(trajs.size());
}

double vector_norm(const GradientVector& v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

double vector_distance(const GradientVector& a, const GradientVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vector_distance: dim mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

void vector_add_scaled(GradientVector& dst, const GradientVector& src, double scale) {
  if (dst.size() != src.size()) throw std::invalid_argument("vector_add_scaled: dim mismatch");
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += scale * src[i];
}

}  // namespace laesim
