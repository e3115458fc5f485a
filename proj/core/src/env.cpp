#include "laesim/env.hpp"

#include <stdexcept>

namespace laesim {

void TaskSpec::validate(std::size_t n_services) const {
  if (data_bits <= 0.0) throw std::invalid_argument("TaskSpec: data_bits must be positive");
  if (cycles_per_bit <= 0.0) throw std::invalid_argument("TaskSpec: cycles_per_bit must be positive");
  if (service_type >= n_services) throw std::invalid_argument("TaskSpec: service_type out of range");
}

double comp_delay_s(double required_cycles, double alloc_compute_hz) {
  if (required_cycles < 0.0) throw std::invalid_argument("comp_delay_s: negative demand");
  if (required_cycles == 0.0) return 0.0;
  if (alloc_compute_hz <= 0.0)
    throw std::domain_error("comp_delay_s: zero allocation against positive demand");
  return required_cycles / alloc_compute_hz;
}

double comm_delay_s(double total_bits, double rate_bps) {
  if (total_bits < 0.0) throw std::invalid_argument("comm_delay_s: negative demand");
  if (total_bits == 0.0) return 0.0;
  if (rate_bps <= 0.0) throw std::domain_error("comm_delay_s: zero rate against positive demand");
  return total_bits / rate_bps;
}

DemandSummary aggregate_demand(const HotspotState& state, std::size_t n_services) {
  DemandSummary out;
  out.required_cycles = Grid2<double>(1, n_services);
  out.total_bits = Grid2<double>(1, n_services);
  out.user_counts = {static_cast<double>(state.tasks.size())};
  for (const TaskSpec& task : state.tasks) {
    task.validate(n_services);
    out.required_cycles.at(0, task.service_type) += task.data_bits * task.cycles_per_bit;
    out.total_bits.at(0, task.service_type) += task.data_bits;
  }
  return out;
}

DemandSummary aggregate_demand(const std::vector<HotspotState>& states, std::size_t n_services) {
  DemandSummary out;
  out.required_cycles = Grid2<double>(states.size(), n_services);
  out.total_bits = Grid2<double>(states.size(), n_services);
  out.user_counts.resize(states.size(), 0.0);
  for (std::size_t h = 0; h < states.size(); ++h) {
    DemandSummary row = aggregate_demand(states[h], n_services);
    out.user_counts[h] = row.user_counts[0];
    for (std::size_t k = 0; k < n_services; ++k) {
      out.required_cycles.at(h, k) = row.required_cycles.at(0, k);
      out.total_bits.at(h, k) = row.total_bits.at(0, k);
    }
  }
  return out;
}

}  // namespace laesim
