#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "laesim/estimator.hpp"
#include "laesim/filter.hpp"
#include "laesim/policy.hpp"
#include "laesim/scenario.hpp"

namespace laesim {

enum class FilterMode { dtbf, static_bound, none, no_fed };
enum class OptimizerMode { plain, adam };

// Direction of the trajectory-likelihood ratio in the snapshot correction.
// `unbiased` weights the snapshot gradient by p(tau|theta_re)/p(tau|theta_m)
// for minibatches sampled under theta_m; `paper_literal` uses the inverse.
enum class RatioDirection { unbiased, paper_literal };

struct TrainConfig {
  std::size_t epochs = 100;
  std::size_t batch_lo = 16;   // per-epoch batch size drawn uniformly
  std::size_t batch_hi = 16;   // from [batch_lo, batch_hi]
  std::size_t mini_batch = 8;
  double learning_rate = 9e-5;
  OptimizerMode optimizer = OptimizerMode::adam;
  std::vector<std::size_t> byz_node_ids;
  double byz_noise_scale = 10.0;
  FilterMode filter_mode = FilterMode::dtbf;
  RatioDirection ratio_direction = RatioDirection::unbiased;
  double weight_clip = 10.0;
  std::size_t hidden_dim = 64;
  std::size_t snapshot_interval = 0;  // epochs between snapshot callbacks, 0 = off
  EstimatorConfig estimator;
  FilterConfig filter;

  void validate(std::size_t n_sps) const;
};

struct EpochRecord {
  std::size_t epoch = 0;
  double loss = 0.0;
  std::vector<double> total_reward_per_sp;
  double mean_pairwise_grad_distance = 0.0;
  double epsilon = 0.0;
  double threshold = 0.0;
  std::size_t good_count = 0;
  int filter_stage = 0;
  std::size_t inner_steps = 0;
};

enum class NodeKind { honest, byzantine };

// Byzantine nodes roll out and learn honestly; only the gradient they
// transmit is corrupted.
struct NodeState {
  std::size_t node_id = 0;
  NodeKind kind = NodeKind::honest;
  PolicyParams params;
  RngStream rng;
};

struct RolloutStepLog {
  DemandSummary demand;
  AuctionResult result;
};
using RolloutLog = std::vector<std::vector<RolloutStepLog>>;  // [episode][step]

// B joint episodes: every node observes, bids, and collects rewards in the
// same auctions. Returns one trajectory list per node.
std::vector<std::vector<Trajectory>> local_rollout(std::vector<NodeState>& nodes,
                                                   const ScenarioConfig& env,
                                                   std::size_t batch_size, RngStream& env_rng,
                                                   RolloutLog* log = nullptr);

// Batch gradient estimate a node transmits; honest nodes pass it through
// unchanged, Byzantine nodes corrupt it first.
GradientVector local_gradient(NodeState& node, const std::vector<Trajectory>& trajs,
                              const TrainConfig& cfg);

// Isotropic Gaussian corruption with expected norm ~ scale * |grad|.
GradientVector byz_corrupt(const GradientVector& grad, double scale, RngStream& rng);

// Arithmetic mean of the accepted gradients.
GradientVector aggregate(const std::vector<GradientVector>& good_grads);

// Inner-loop length M ~ Geom(B / (B + b)) on {1, 2, ...}.
std::size_t sample_inner_steps(std::size_t batch, std::size_t mini_batch, RngStream& rng);

// Self-play minibatch: the master competes against n_sps - 1 frozen copies
// of the previous policy; only the master's trajectories are returned.
std::vector<Trajectory> virtual_rollout(const PolicyParams& master_params,
                                        const PolicyParams& frozen_params,
                                        const ScenarioConfig& env, std::size_t mini_batch,
                                        RngStream& env_rng, RngStream& master_rng,
                                        std::vector<RngStream>& virtual_rngs);

// Clipped trajectory-likelihood ratio between the two parameter sets.
double importance_weight(const Trajectory& traj, const PolicyParams& theta_m,
                         const PolicyParams& theta_re, RatioDirection direction, double clip);

// Variance-reduced master gradient: minibatch correction around the anchor.
GradientVector svrpg_step(const PolicyParams& theta_m, const PolicyParams& theta_re,
                          const GradientVector& mu, const std::vector<Trajectory>& minibatch,
                          const TrainConfig& cfg);

struct AdamState {
  GradientVector m, v;
  std::size_t t = 0;
};

// Ascent update, plain or Adam-style per config.
PolicyParams update(const PolicyParams& params, const GradientVector& direction,
                    const TrainConfig& cfg, AdamState& adam);

struct TrainResult {
  std::vector<EpochRecord> records;
  PolicyParams final_params;
  std::uint64_t gradient_messages = 0;  // local-to-master transmissions
};

using EpochCallback = std::function<void(const EpochRecord&, const PolicyParams&)>;

// The full training loop: broadcast, real auctions, filtering, aggregation,
// virtual auctions with variance-reduced updates, and the three baseline
// filter modes.
TrainResult train(const ScenarioConfig& scenario, const TrainConfig& cfg,
                  const EpochCallback& on_epoch = nullptr);

struct ValidationEpisode {
  double mean_neg_utility = 0.0;
  double min_neg_utility = 0.0;
  double max_neg_utility = 0.0;
};

// Frozen-policy self-play evaluation; per-episode negative utilities over
// the N SPs.
std::vector<ValidationEpisode> validate_policy(const ScenarioConfig& scenario,
                                               const PolicyParams& params, std::size_t episodes,
                                               std::uint64_t seed);

}  // namespace laesim
