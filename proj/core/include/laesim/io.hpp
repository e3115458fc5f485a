#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "laesim/fedtrain.hpp"
#include "laesim/policy.hpp"

namespace laesim {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kMetricsSchema = "laesim-metrics-v1";
inline constexpr const char* kValidationSchema = "laesim-validation-v1";

// Binary policy snapshot: "LAEP" magic, format version, layer dims, the run
// seed, then the flat parameter vector as little-endian doubles.
struct Snapshot {
  PolicyParams params;
  std::uint64_t seed = 0;
};

void save_params(const PolicyParams& params, std::uint64_t seed, const std::string& path);
Snapshot load_params(const std::string& path);

std::string metrics_csv_header(std::size_t n_sps);
std::string metrics_csv_row(const EpochRecord& record);
void write_metrics_csv(const std::vector<EpochRecord>& records, std::size_t n_sps,
                       const std::string& path);

std::string validation_csv_header();
void write_validation_csv(const std::vector<ValidationEpisode>& episodes, const std::string& path);

}  // namespace laesim
