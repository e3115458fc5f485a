#include "laesim/fedtrain.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace laesim {

namespace {

// Stream roles for deriving independent child rngs from the scenario seed.
enum Role : std::uint64_t {
  kRoleMaster = 1,
  kRoleRealEnv = 2,
  kRoleVirtualEnv = 3,
  kRoleNode = 4,
  kRoleVirtualNode = 5,
  kRoleMasterPolicy = 6,
  kRoleInit = 7,
  kRoleNodeVirtualEnv = 8,
};

struct Participant {
  const PolicyParams* params = nullptr;
  RngStream* rng = nullptr;
  std::vector<double> budget_compute;
  std::vector<double> budget_bandwidth;
};

std::vector<double> budget_row(const Grid2<double>& budgets, std::size_t sp) {
  std::vector<double> row(budgets.cols());
  for (std::size_t k = 0; k < budgets.cols(); ++k) row[k] = budgets.at(sp, k);
  return row;
}

// One joint episode: all participants bid into the same auctions each step.
std::vector<Trajectory> run_episode(const ScenarioConfig& env,
                                    const std::vector<Participant>& participants,
                                    RngStream& env_rng, std::vector<RolloutStepLog>* log) {
  const std::size_t n = participants.size();
  const std::size_t n_hotspots = env.n_hotspots;
  const std::size_t n_services = env.n_services;
  const ObservationScales scales = reference_scales(env);

  std::vector<Trajectory> trajs(n);
  std::vector<Grid2<std::uint8_t>> prev_wins(n, Grid2<std::uint8_t>(n_hotspots, n_services, 0));
  std::vector<BidMatrix> bids(n);

  for (std::size_t t = 0; t < env.horizon; ++t) {
    const std::vector<HotspotState> states = sample_hotspots(env, env_rng, t);
    const DemandSummary demand = aggregate_demand(states, n_services);

    std::vector<Observation> observations(n);
    std::vector<ActionFractions> actions(n);
    for (std::size_t i = 0; i < n; ++i) {
      observations[i] =
          encode_observation(states, prev_wins[i], t, env.horizon, n_services, scales);
      const std::vector<double> conc = forward(*participants[i].params, observations[i]);
      actions[i] = sample_action(conc, n_hotspots, n_services, *participants[i].rng);
      bids[i] = to_bid(actions[i], participants[i].budget_compute, participants[i].budget_bandwidth);
    }

    const AuctionResult result = run_auction(bids, demand, env.channel);
    for (std::size_t i = 0; i < n; ++i) {
      const double reward = sp_utility(result, i, env.utility);
      trajs[i].steps.push_back({std::move(observations[i]), std::move(actions[i]), reward});
      for (std::size_t h = 0; h < n_hotspots; ++h)
        for (std::size_t k = 0; k < n_services; ++k)
          prev_wins[i].at(h, k) = result.win.at(i, h, k);
    }
    if (log) log->push_back({demand, result});
  }
  return trajs;
}

double episode_total_reward(const Trajectory& traj) {
  double total = 0.0;
  for (const TrajectoryStep& step : traj.steps) total += step.reward;
  return total;
}

}  // namespace

void TrainConfig::validate(std::size_t n_sps) const {
  if (batch_lo < 1 || batch_hi < batch_lo)
    throw std::invalid_argument("TrainConfig: invalid batch range");
  if (mini_batch < 1 || mini_batch > batch_lo)
    throw std::invalid_argument("TrainConfig: mini batch must be in [1, batch_lo]");
  if (learning_rate <= 0.0) throw std::invalid_argument("TrainConfig: learning rate");
  if (weight_clip <= 0.0) throw std::invalid_argument("TrainConfig: weight clip");
  if (hidden_dim < 1) throw std::invalid_argument("TrainConfig: hidden dim");
  for (std::size_t id : byz_node_ids)
    if (id >= n_sps) throw std::invalid_argument("TrainConfig: byzantine id out of range");
  if (byz_noise_scale < 0.0) throw std::invalid_argument("TrainConfig: byzantine noise scale");
  estimator.validate();
  filter.validate();
}

std::vector<std::vector<Trajectory>> local_rollout(std::vector<NodeState>& nodes,
                                                   const ScenarioConfig& env,
                                                   std::size_t batch_size, RngStream& env_rng,
                                                   RolloutLog* log) {
  if (nodes.size() != env.n_sps)
    throw std::invalid_argument("local_rollout: node count must equal the SP count");
  std::vector<Participant> participants(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    participants[i].params = &nodes[i].params;
    participants[i].rng = &nodes[i].rng;
    participants[i].budget_compute = budget_row(env.budgets_compute_hz, i);
    participants[i].budget_bandwidth = budget_row(env.budgets_bandwidth_hz, i);
  }
  std::vector<std::vector<Trajectory>> out(nodes.size());
  for (std::size_t episode = 0; episode < batch_size; ++episode) {
    std::vector<RolloutStepLog>* episode_log = nullptr;
    if (log) {
      log->emplace_back();
      episode_log = &log->back();
    }
    std::vector<Trajectory> trajs = run_episode(env, participants, env_rng, episode_log);
    for (std::size_t i = 0; i < nodes.size(); ++i) out[i].push_back(std::move(trajs[i]));
  }
  return out;
}

GradientVector local_gradient(NodeState& node, const std::vector<Trajectory>& trajs,
                              const TrainConfig& cfg) {
  GradientVector grad = batch_gradient(trajs, node.params, cfg.estimator);
  if (node.kind == NodeKind::byzantine)
    grad = byz_corrupt(grad, cfg.byz_noise_scale, node.rng);
  return grad;
}

GradientVector byz_corrupt(const GradientVector& grad, double scale, RngStream& rng) {
  if (scale < 0.0) throw std::invalid_argument("byz_corrupt: negative scale");
  if (scale == 0.0) return grad;
  const double sigma = scale * vector_norm(grad) / std::sqrt(static_cast<double>(grad.size()));
  GradientVector out = grad;
  for (double& v : out) v += rng.normal(0.0, sigma);
  return out;
}

GradientVector aggregate(const std::vector<GradientVector>& good_grads) {
  if (good_grads.empty()) throw std::invalid_argument("aggregate: empty gradient set");
  GradientVector mean(good_grads.front().size(), 0.0);
  for (const GradientVector& g : good_grads) vector_add_scaled(mean, g, 1.0);
  for (double& v : mean) v /= static_cast<double>(good_grads.size());
  return mean;
}

std::size_t sample_inner_steps(std::size_t batch, std::size_t mini_batch, RngStream& rng) {
  if (batch < 1 || mini_batch < 1) throw std::invalid_argument("sample_inner_steps: sizes");
  const double p = static_cast<double>(batch) / static_cast<double>(batch + mini_batch);
  return static_cast<std::size_t>(rng.geometric_from_one(p));
}

std::vector<Trajectory> virtual_rollout(const PolicyParams& master_params,
                                        const PolicyParams& frozen_params,
                                        const ScenarioConfig& env, std::size_t mini_batch,
                                        RngStream& env_rng, RngStream& master_rng,
                                        std::vector<RngStream>& virtual_rngs) {
  if (env.n_sps < 2) throw std::invalid_argument("virtual_rollout: need at least 2 SPs");
  if (virtual_rngs.size() != env.n_sps - 1)
    throw std::invalid_argument("virtual_rollout: need one rng per virtual node");
  // Slot j plays with SP j's budgets; the master occupies slot 0.
  std::vector<Participant> participants(env.n_sps);
  participants[0] = {&master_params, &master_rng, budget_row(env.budgets_compute_hz, 0),
                     budget_row(env.budgets_bandwidth_hz, 0)};
  for (std::size_t i = 1; i < env.n_sps; ++i)
    participants[i] = {&frozen_params, &virtual_rngs[i - 1], budget_row(env.budgets_compute_hz, i),
                       budget_row(env.budgets_bandwidth_hz, i)};

  std::vector<Trajectory> out;
  out.reserve(mini_batch);
  for (std::size_t episode = 0; episode < mini_batch; ++episode)
    out.push_back(std::move(run_episode(env, participants, env_rng, nullptr)[0]));
  return out;
}

double importance_weight(const Trajectory& traj, const PolicyParams& theta_m,
                         const PolicyParams& theta_re, RatioDirection direction, double clip) {
  if (clip <= 0.0) throw std::invalid_argument("importance_weight: clip");
  const PolicyParams& numerator = direction == RatioDirection::unbiased ? theta_re : theta_m;
  const PolicyParams& denominator = direction == RatioDirection::unbiased ? theta_m : theta_re;
  double log_ratio = 0.0;
  for (const TrajectoryStep& step : traj.steps) {
    log_ratio += log_prob(forward(numerator, step.obs), step.action);
    log_ratio -= log_prob(forward(denominator, step.obs), step.action);
  }
  if (std::isnan(log_ratio)) throw std::runtime_error("importance_weight: non-finite log ratio");
  return std::exp(std::min(log_ratio, std::log(clip)));
}

GradientVector svrpg_step(const PolicyParams& theta_m, const PolicyParams& theta_re,
                          const GradientVector& mu, const std::vector<Trajectory>& minibatch,
                          const TrainConfig& cfg) {
  if (minibatch.empty()) throw std::invalid_argument("svrpg_step: empty minibatch");
  GradientVector v(theta_m.param_count(), 0.0);
  for (const Trajectory& traj : minibatch) {
    const GradientVector g_current = trajectory_gradient(traj, theta_m, cfg.estimator);
    const GradientVector g_snapshot = trajectory_gradient(traj, theta_re, cfg.estimator);
    const double w = importance_weight(traj, theta_m, theta_re, cfg.ratio_direction, cfg.weight_clip);
    vector_add_scaled(v, g_current, 1.0);
    vector_add_scaled(v, g_snapshot, -w);
  }
  for (double& x : v) x /= static_cast<double>(minibatch.size());
  vector_add_scaled(v, mu, 1.0);
  return v;
}

PolicyParams update(const PolicyParams& params, const GradientVector& direction,
                    const TrainConfig& cfg, AdamState& adam) {
  if (direction.size() != params.param_count())
    throw std::invalid_argument("update: gradient dim mismatch");
  PolicyParams out = params;
  if (cfg.optimizer == OptimizerMode::plain) {
    out.add_scaled(direction, cfg.learning_rate);
  } else {
    constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    if (adam.m.empty()) {
      adam.m.assign(direction.size(), 0.0);
      adam.v.assign(direction.size(), 0.0);
    }
    ++adam.t;
    GradientVector step(direction.size(), 0.0);
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(adam.t));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(adam.t));
    for (std::size_t i = 0; i < direction.size(); ++i) {
      adam.m[i] = beta1 * adam.m[i] + (1.0 - beta1) * direction[i];
      adam.v[i] = beta2 * adam.v[i] + (1.0 - beta2) * direction[i] * direction[i];
      step[i] = (adam.m[i] / bc1) / (std::sqrt(adam.v[i] / bc2) + eps);
    }
    out.add_scaled(step, cfg.learning_rate);
  }
  for (double v : out.flatten())
    if (!std::isfinite(v)) throw std::runtime_error("update: non-finite parameter");
  return out;
}

namespace {

struct MasterLoopResult {
  PolicyParams params;
  std::size_t inner_steps = 0;
};

MasterLoopResult run_master_loop(const PolicyParams& theta_start, const PolicyParams& theta_re,
                                 const GradientVector& mu, const ScenarioConfig& env,
                                 const TrainConfig& cfg, std::size_t inner_steps,
                                 RngStream& env_rng, RngStream& policy_rng,
                                 std::vector<RngStream>& virtual_rngs, AdamState& adam) {
  MasterLoopResult out{theta_start, inner_steps};
  for (std::size_t m = 0; m < inner_steps; ++m) {
    const std::vector<Trajectory> minibatch = virtual_rollout(
        out.params, theta_re, env, cfg.mini_batch, env_rng, policy_rng, virtual_rngs);
    const GradientVector v = svrpg_step(out.params, theta_re, mu, minibatch, cfg);
    out.params = update(out.params, v, cfg, adam);
  }
  return out;
}

}  // namespace

TrainResult train(const ScenarioConfig& scenario, const TrainConfig& cfg,
                  const EpochCallback& on_epoch) {
  scenario.validate();
  cfg.validate(scenario.n_sps);

  const std::size_t n = scenario.n_sps;
  const std::size_t input_dim =
      3 * scenario.n_hotspots * scenario.n_services + scenario.n_hotspots + 1;
  const std::size_t output_dim = 2 * scenario.n_services * scenario.n_hotspots;

  const PolicyParams theta0 =
      PolicyParams::init(input_dim, cfg.hidden_dim, output_dim, scenario.seed + kRoleInit);

  RngStream master_rng = RngStream::derive(scenario.seed, kRoleMaster);
  RngStream real_env_rng = RngStream::derive(scenario.seed, kRoleRealEnv);
  RngStream virtual_env_rng = RngStream::derive(scenario.seed, kRoleVirtualEnv);
  RngStream master_policy_rng = RngStream::derive(scenario.seed, kRoleMasterPolicy);
  std::vector<RngStream> virtual_rngs;
  for (std::size_t i = 0; i + 1 < n; ++i)
    virtual_rngs.push_back(RngStream::derive(scenario.seed, kRoleVirtualNode, i));

  std::vector<NodeState> nodes;
  for (std::size_t i = 0; i < n; ++i) {
    const bool byz = std::find(cfg.byz_node_ids.begin(), cfg.byz_node_ids.end(), i) !=
                     cfg.byz_node_ids.end();
    nodes.push_back(
        {i, byz ? NodeKind::byzantine : NodeKind::honest, theta0,
         RngStream::derive(scenario.seed, kRoleNode, i)});
  }

  TrainResult result;
  result.final_params = theta0;

  PolicyParams theta_master = theta0;
  AdamState master_adam;
  GradientVector fallback_mu(theta0.param_count(), 0.0);
  double static_epsilon = -1.0;

  // no-fed: per-node persistent optimizer state and virtual-env streams
  std::vector<AdamState> node_adams(n);
  std::vector<RngStream> node_virtual_env;
  std::vector<std::vector<RngStream>> node_virtual_rngs;
  if (cfg.filter_mode == FilterMode::no_fed) {
    for (std::size_t i = 0; i < n; ++i) {
      node_virtual_env.push_back(RngStream::derive(scenario.seed, kRoleNodeVirtualEnv, i));
      std::vector<RngStream> streams;
      for (std::size_t j = 0; j + 1 < n; ++j)
        streams.push_back(RngStream::derive(scenario.seed, kRoleVirtualNode, i * n + j + 1000));
      node_virtual_rngs.push_back(std::move(streams));
    }
  }

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    // broadcast: honest locals and the snapshot start from the master params
    if (cfg.filter_mode != FilterMode::no_fed)
      for (NodeState& node : nodes) node.params = theta_master;

    const std::size_t batch = static_cast<std::size_t>(master_rng.uniform_int(
        static_cast<std::int64_t>(cfg.batch_lo), static_cast<std::int64_t>(cfg.batch_hi)));

    const std::vector<std::vector<Trajectory>> trajs =
        local_rollout(nodes, scenario, batch, real_env_rng);

    // honest batch gradients; transmissions (corrupted for Byzantine nodes)
    // only exist in the aggregating modes
    std::vector<GradientVector> honest_grads(n);
    std::vector<GradientVector> grads(n);
    double loss_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      honest_grads[i] = batch_gradient(trajs[i], nodes[i].params, cfg.estimator);
      if (cfg.filter_mode != FilterMode::no_fed && nodes[i].kind == NodeKind::byzantine)
        grads[i] = byz_corrupt(honest_grads[i], cfg.byz_noise_scale, nodes[i].rng);
      else
        grads[i] = honest_grads[i];
      loss_sum += surrogate_loss(trajs[i], nodes[i].params, cfg.estimator);
    }

    EpochRecord record;
    record.epoch = epoch;
    record.loss = loss_sum / static_cast<double>(n);
    record.total_reward_per_sp.resize(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (const Trajectory& traj : trajs[i])
        record.total_reward_per_sp[i] += episode_total_reward(traj);
      record.total_reward_per_sp[i] /= static_cast<double>(batch);
    }
    {
      const std::vector<double> dists = pairwise_distances(grads);
      double mean = 0.0;
      for (double d : dists) mean += d;
      record.mean_pairwise_grad_distance = mean / static_cast<double>(dists.size());
    }

    if (cfg.filter_mode == FilterMode::no_fed) {
      // isolated learners: no transmissions, no aggregation
      record.good_count = n;
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t steps = sample_inner_steps(batch, cfg.mini_batch, nodes[i].rng);
        const MasterLoopResult loop =
            run_master_loop(nodes[i].params, nodes[i].params, honest_grads[i], scenario, cfg, steps,
                            node_virtual_env[i], nodes[i].rng, node_virtual_rngs[i], node_adams[i]);
        nodes[i].params = loop.params;
        if (i == 0) record.inner_steps = loop.inner_steps;
      }
      result.final_params = nodes[0].params;
    } else {
      result.gradient_messages += n;

      std::vector<std::size_t> good;
      if (cfg.filter_mode == FilterMode::none) {
        for (std::size_t i = 0; i < n; ++i) good.push_back(i);
        record.good_count = n;
      } else {
        FilterReport report;
        if (cfg.filter_mode == FilterMode::dtbf) {
          report = dtbf(grads, batch, cfg.filter);
        } else {
          if (static_epsilon < 0.0) static_epsilon = dynamic_bound(grads, cfg.filter.omega_eps);
          report = dtbf_with_epsilon(grads, batch, cfg.filter, static_epsilon);
        }
        good = report.good_set;
        record.epsilon = report.epsilon;
        record.threshold = report.threshold_used;
        record.good_count = report.good_set.size();
        record.filter_stage = report.stage;
      }

      GradientVector mu;
      if (good.empty()) {
        mu = fallback_mu;  // reuse the previous anchor; zero at the start
      } else {
        std::vector<GradientVector> accepted;
        for (std::size_t i : good) accepted.push_back(grads[i]);
        mu = aggregate(accepted);
      }
      fallback_mu = mu;

      const std::size_t steps = sample_inner_steps(batch, cfg.mini_batch, master_rng);
      const MasterLoopResult loop =
          run_master_loop(theta_master, theta_master, mu, scenario, cfg, steps, virtual_env_rng,
                          master_policy_rng, virtual_rngs, master_adam);
      theta_master = loop.params;
      record.inner_steps = loop.inner_steps;
      result.final_params = theta_master;
    }

    result.records.push_back(record);
    if (on_epoch) on_epoch(result.records.back(), result.final_params);
  }
  return result;
}

std::vector<ValidationEpisode> validate_policy(const ScenarioConfig& scenario,
                                               const PolicyParams& params, std::size_t episodes,
                                               std::uint64_t seed) {
  scenario.validate();
  RngStream env_rng = RngStream::derive(seed, 0xA11);
  std::vector<RngStream> policy_rngs;
  for (std::size_t i = 0; i < scenario.n_sps; ++i)
    policy_rngs.push_back(RngStream::derive(seed, 0xA12, i));

  std::vector<Participant> participants(scenario.n_sps);
  for (std::size_t i = 0; i < scenario.n_sps; ++i)
    participants[i] = {&params, &policy_rngs[i], budget_row(scenario.budgets_compute_hz, i),
                       budget_row(scenario.budgets_bandwidth_hz, i)};

  std::vector<ValidationEpisode> out;
  for (std::size_t e = 0; e < episodes; ++e) {
    const std::vector<Trajectory> trajs = run_episode(scenario, participants, env_rng, nullptr);
    ValidationEpisode ep;
    double sum = 0.0;
    for (std::size_t i = 0; i < trajs.size(); ++i) {
      const double neg = -episode_total_reward(trajs[i]);
      sum += neg;
      if (i == 0) {
        ep.min_neg_utility = ep.max_neg_utility = neg;
      } else {
        ep.min_neg_utility = std::min(ep.min_neg_utility, neg);
        ep.max_neg_utility = std::max(ep.max_neg_utility, neg);
      }
    }
    ep.mean_neg_utility = sum / static_cast<double>(trajs.size());
    out.push_back(ep);
  }
  return out;
}

}  // namespace laesim
