#pragma once

#include <cstddef>
#include <vector>

#include "laesim/grid.hpp"

namespace laesim {

// One ground user's task: size, compute intensity, and the single service
// type it requests (one-hot preference).
struct TaskSpec {
  double data_bits = 0.0;
  double cycles_per_bit = 0.0;
  std::size_t service_type = 0;

  void validate(std::size_t n_services) const;
};

// Tasks active in one hotspot at one time step.
struct HotspotState {
  std::size_t hotspot_id = 0;
  std::size_t time_index = 0;
  std::vector<TaskSpec> tasks;
};

// Per-(hotspot, service) aggregate load for one time step.
struct DemandSummary {
  Grid2<double> required_cycles;  // H x K
  Grid2<double> total_bits;       // H x K
  std::vector<double> user_counts;

  std::size_t n_hotspots() const { return required_cycles.rows(); }
  std::size_t n_services() const { return required_cycles.cols(); }
};

// Processing delay of `required_cycles` at compute rate `alloc_compute_hz`.
// Zero demand yields zero delay regardless of the allocation.
double comp_delay_s(double required_cycles, double alloc_compute_hz);

// Transmission delay of `total_bits` at `rate_bps`; mirrors comp_delay_s.
double comm_delay_s(double total_bits, double rate_bps);

// Sums one hotspot's tasks into a (cycles, bits) row over service types.
// Returns a DemandSummary with a single row (row index 0).
DemandSummary aggregate_demand(const HotspotState& state, std::size_t n_services);

// Aggregates multiple hotspots into a full H x K summary.
DemandSummary aggregate_demand(const std::vector<HotspotState>& states, std::size_t n_services);

}  // namespace laesim
