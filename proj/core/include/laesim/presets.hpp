#pragma once

#include <string>
#include <vector>

#include "laesim/fedtrain.hpp"
#include "laesim/kvconfig.hpp"
#include "laesim/scenario.hpp"

namespace laesim {

// Named experiment configurations: the base suburban setup plus the
// Byzantine-state and scale variants, and two small desk-scale setups for
// quick runs.
std::vector<std::string> preset_names();
bool is_preset(const std::string& name);
KvMap preset_kv(const std::string& name);

TrainConfig train_config_from_kv(const KvMap& kv);
KvMap train_config_to_kv(const TrainConfig& cfg);

}  // namespace laesim
