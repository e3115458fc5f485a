#include "laesim/presets.hpp"

#include <cstdio>
#include <stdexcept>

namespace laesim {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Base configuration: 5 SPs, 6 hotspots, 4 services, 2 Byzantine nodes.
// Roughly 15000 trajectories at the mean epoch cost of B + M*b.
KvMap base_kv() {
  KvMap kv;
  kv["n_sps"] = "5";
  kv["n_hotspots"] = "6";
  kv["n_services"] = "4";
  kv["horizon"] = "30";
  kv["seed"] = "1";
  kv["budget_compute_hz"] = "8e11";
  kv["budget_bandwidth_hz"] = "8e8";
  kv["utility.unit_cost_w"] = "381";
  kv["utility.winner_bonus_j"] = "3000";
  kv["user_count_choices"] = "20,30,40,50";
  kv["data_size_choices_bits"] = "2e7,2.4e7,2.8e7,3.2e7,3.6e7,4e7";
  kv["cycles_per_bit_choices"] = "1000,1200,1400,1600";
  kv["train.epochs"] = "68";
  kv["train.batch_lo"] = "120";
  kv["train.batch_hi"] = "130";
  kv["train.mini_batch"] = "64";
  kv["train.learning_rate"] = "9e-5";
  kv["train.optimizer"] = "adam";
  kv["train.discount"] = "0.9";
  kv["train.byz_node_ids"] = "3,4";
  kv["train.byz_noise_scale"] = "10";
  kv["train.filter_mode"] = "dtbf";
  kv["filter.alpha_b"] = "0.4";
  kv["filter.delta"] = "0.5";
  kv["filter.omega_eps"] = "1";
  return kv;
}

KvMap desk_base_kv() {
  KvMap kv = base_kv();
  kv["n_hotspots"] = "2";
  kv["n_services"] = "2";
  kv["horizon"] = "10";
  kv["train.epochs"] = "100";
  kv["train.learning_rate"] = "0.02";
  return kv;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"table1-suburban", "5sp-2byz", "5sp-1byz", "5sp-0byz", "6sp-2byz",
          "7sp-2byz",        "5sp-6svc", "5sp-8svc", "5sp-8hot", "5sp-10hot",
          "desk-3sp",        "desk-5sp-2byz"};
}

bool is_preset(const std::string& name) {
  for (const std::string& p : preset_names())
    if (p == name) return true;
  return false;
}

KvMap preset_kv(const std::string& name) {
  if (name == "table1-suburban" || name == "5sp-2byz") return base_kv();
  if (name == "5sp-1byz") {
    KvMap kv = base_kv();
    kv["train.byz_node_ids"] = "4";
    kv["filter.alpha_b"] = "0.2";
    return kv;
  }
  if (name == "5sp-0byz") {
    KvMap kv = base_kv();
    kv["train.byz_node_ids"] = "";
    kv["filter.alpha_b"] = "0";
    return kv;
  }
  if (name == "6sp-2byz") {
    KvMap kv = base_kv();
    kv["n_sps"] = "6";
    kv["train.byz_node_ids"] = "4,5";
    kv["filter.alpha_b"] = fmt(1.0 / 3.0);
    return kv;
  }
  if (name == "7sp-2byz") {
    KvMap kv = base_kv();
    kv["n_sps"] = "7";
    kv["train.byz_node_ids"] = "5,6";
    kv["filter.alpha_b"] = fmt(2.0 / 7.0);
    return kv;
  }
  if (name == "5sp-6svc") {
    KvMap kv = base_kv();
    kv["n_services"] = "6";
    return kv;
  }
  if (name == "5sp-8svc") {
    KvMap kv = base_kv();
    kv["n_services"] = "8";
    return kv;
  }
  if (name == "5sp-8hot") {
    KvMap kv = base_kv();
    kv["n_hotspots"] = "8";
    return kv;
  }
  if (name == "5sp-10hot") {
    KvMap kv = base_kv();
    kv["n_hotspots"] = "10";
    return kv;
  }
  if (name == "desk-3sp") {
    KvMap kv = desk_base_kv();
    kv["n_sps"] = "3";
    kv["train.batch_lo"] = "16";
    kv["train.batch_hi"] = "16";
    kv["train.mini_batch"] = "8";
    kv["train.byz_node_ids"] = "";
    return kv;
  }
  if (name == "desk-5sp-2byz") {
    KvMap kv = desk_base_kv();
    kv["train.batch_lo"] = "64";
    kv["train.batch_hi"] = "64";
    kv["train.mini_batch"] = "32";
    return kv;
  }
  throw std::invalid_argument("unknown preset: " + name);
}

TrainConfig train_config_from_kv(const KvMap& kv) {
  TrainConfig cfg;
  cfg.epochs = static_cast<std::size_t>(kv_get_int(kv, "train.epochs", 100));
  cfg.batch_lo = static_cast<std::size_t>(kv_get_int(kv, "train.batch_lo", 16));
  cfg.batch_hi = static_cast<std::size_t>(kv_get_int(kv, "train.batch_hi", cfg.batch_lo));
  cfg.mini_batch = static_cast<std::size_t>(kv_get_int(kv, "train.mini_batch", 8));
  cfg.learning_rate = kv_get_double(kv, "train.learning_rate", 9e-5);
  const std::string optimizer = kv_get_string(kv, "train.optimizer", "adam");
  if (optimizer == "adam")
    cfg.optimizer = OptimizerMode::adam;
  else if (optimizer == "plain")
    cfg.optimizer = OptimizerMode::plain;
  else
    throw std::invalid_argument("train.optimizer: expected adam|plain, got " + optimizer);
  cfg.byz_node_ids.clear();
  for (std::int64_t id : kv_get_int_list(kv, "train.byz_node_ids", {}))
    cfg.byz_node_ids.push_back(static_cast<std::size_t>(id));
  cfg.byz_noise_scale = kv_get_double(kv, "train.byz_noise_scale", 10.0);
  const std::string mode = kv_get_string(kv, "train.filter_mode", "dtbf");
  if (mode == "dtbf")
    cfg.filter_mode = FilterMode::dtbf;
  else if (mode == "static")
    cfg.filter_mode = FilterMode::static_bound;
  else if (mode == "none")
    cfg.filter_mode = FilterMode::none;
  else if (mode == "no-fed")
    cfg.filter_mode = FilterMode::no_fed;
  else
    throw std::invalid_argument("train.filter_mode: expected dtbf|static|none|no-fed, got " + mode);
  const std::string direction = kv_get_string(kv, "train.ratio_direction", "unbiased");
  if (direction == "unbiased")
    cfg.ratio_direction = RatioDirection::unbiased;
  else if (direction == "paper-literal")
    cfg.ratio_direction = RatioDirection::paper_literal;
  else
    throw std::invalid_argument("train.ratio_direction: expected unbiased|paper-literal, got " +
                                direction);
  cfg.weight_clip = kv_get_double(kv, "train.weight_clip", 10.0);
  cfg.hidden_dim = static_cast<std::size_t>(kv_get_int(kv, "train.hidden_dim", 64));
  cfg.snapshot_interval = static_cast<std::size_t>(kv_get_int(kv, "train.snapshot_interval", 0));
  cfg.estimator.discount = kv_get_double(kv, "train.discount", 0.9);
  cfg.estimator.advantage_eps = kv_get_double(kv, "train.advantage_eps", 1e-8);
  cfg.filter.delta = kv_get_double(kv, "filter.delta", 0.5);
  cfg.filter.omega_eps = kv_get_double(kv, "filter.omega_eps", 1.0);
  cfg.filter.byz_fraction_bound = kv_get_double(kv, "filter.alpha_b", 0.4);
  return cfg;
}

KvMap train_config_to_kv(const TrainConfig& cfg) {
  KvMap kv;
  kv["train.epochs"] = std::to_string(cfg.epochs);
  kv["train.batch_lo"] = std::to_string(cfg.batch_lo);
  kv["train.batch_hi"] = std::to_string(cfg.batch_hi);
  kv["train.mini_batch"] = std::to_string(cfg.mini_batch);
  kv["train.learning_rate"] = fmt(cfg.learning_rate);
  kv["train.optimizer"] = cfg.optimizer == OptimizerMode::adam ? "adam" : "plain";
  std::string ids;
  for (std::size_t id : cfg.byz_node_ids) {
    if (!ids.empty()) ids += ",";
    ids += std::to_string(id);
  }
  kv["train.byz_node_ids"] = ids;
  kv["train.byz_noise_scale"] = fmt(cfg.byz_noise_scale);
  switch (cfg.filter_mode) {
    case FilterMode::dtbf: kv["train.filter_mode"] = "dtbf"; break;
    case FilterMode::static_bound: kv["train.filter_mode"] = "static"; break;
    case FilterMode::none: kv["train.filter_mode"] = "none"; break;
    case FilterMode::no_fed: kv["train.filter_mode"] = "no-fed"; break;
  }
  kv["train.ratio_direction"] =
      cfg.ratio_direction == RatioDirection::unbiased ? "unbiased" : "paper-literal";
  kv["train.weight_clip"] = fmt(cfg.weight_clip);
  kv["train.hidden_dim"] = std::to_string(cfg.hidden_dim);
  kv["train.snapshot_interval"] = std::to_string(cfg.snapshot_interval);
  kv["train.discount"] = fmt(cfg.estimator.discount);
  kv["train.advantage_eps"] = fmt(cfg.estimator.advantage_eps);
  kv["filter.delta"] = fmt(cfg.filter.delta);
  kv["filter.omega_eps"] = fmt(cfg.filter.omega_eps);
  kv["filter.alpha_b"] = fmt(cfg.filter.byz_fraction_bound);
  return kv;
}

}  // namespace laesim
