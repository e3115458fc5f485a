#include "laesim/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace laesim {

namespace {

constexpr char kMagic[4] = {'L', 'A', 'E', 'P'};
constexpr std::uint32_t kSnapshotVersion = 1;

template <typename T>
void write_pod(std::ofstream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::ifstream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw std::runtime_error("snapshot: truncated file");
  return value;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void save_params(const PolicyParams& params, std::uint64_t seed, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("snapshot: cannot write " + path);
  out.write(kMagic, sizeof(kMagic));
  write_pod(out, kSnapshotVersion);
  write_pod(out, static_cast<std::uint64_t>(params.input_dim));
  write_pod(out, static_cast<std::uint64_t>(params.hidden_dim));
  write_pod(out, static_cast<std::uint64_t>(params.output_dim));
  write_pod(out, seed);
  const GradientVector flat = params.flatten();
  write_pod(out, static_cast<std::uint64_t>(flat.size()));
  out.write(reinterpret_cast<const char*>(flat.data()),
            static_cast<std::streamsize>(flat.size() * sizeof(double)));
  if (!out) throw std::runtime_error("snapshot: short write to " + path);
}

Snapshot load_params(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("snapshot: cannot open " + path);
  char magic[4];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("snapshot: bad magic in " + path);
  const auto version = read_pod<std::uint32_t>(in);
  if (version != kSnapshotVersion)
    throw std::runtime_error("snapshot: version mismatch in " + path + " (got " +
                             std::to_string(version) + ", expected " +
                             std::to_string(kSnapshotVersion) + ")");
  const auto input_dim = static_cast<std::size_t>(read_pod<std::uint64_t>(in));
  const auto hidden_dim = static_cast<std::size_t>(read_pod<std::uint64_t>(in));
  const auto output_dim = static_cast<std::size_t>(read_pod<std::uint64_t>(in));
  const auto seed = read_pod<std::uint64_t>(in);
  const auto count = static_cast<std::size_t>(read_pod<std::uint64_t>(in));
  GradientVector flat(count);
  in.read(reinterpret_cast<char*>(flat.data()),
          static_cast<std::streamsize>(count * sizeof(double)));
  if (!in) throw std::runtime_error("snapshot: truncated parameters in " + path);
  return {PolicyParams::unflatten(input_dim, hidden_dim, output_dim, flat), seed};
}

std::string metrics_csv_header(std::size_t n_sps) {
  std::string header =
      "epoch,loss,mean_grad_distance,epsilon,threshold,good_count,filter_stage,inner_steps";
  for (std::size_t i = 0; i < n_sps; ++i) header += ",reward_sp" + std::to_string(i);
  header += "\n";
  return header;
}

std::string metrics_csv_row(const EpochRecord& record) {
  std::string row = std::to_string(record.epoch);
  row += "," + fmt(record.loss);
  row += "," + fmt(record.mean_pairwise_grad_distance);
  row += "," + fmt(record.epsilon);
  row += "," + fmt(record.threshold);
  row += "," + std::to_string(record.good_count);
  row += "," + std::to_string(record.filter_stage);
  row += "," + std::to_string(record.inner_steps);
  for (double r : record.total_reward_per_sp) row += "," + fmt(r);
  row += "\n";
  return row;
}

void write_metrics_csv(const std::vector<EpochRecord>& records, std::size_t n_sps,
                       const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary: byte-stable newlines
  if (!out) throw std::runtime_error("metrics: cannot write " + path);
  out << metrics_csv_header(n_sps);
  for (const EpochRecord& record : records) out << metrics_csv_row(record);
}

std::string validation_csv_header() {
  return "episode,mean_neg_utility,min_neg_utility,max_neg_utility\n";
}

void write_validation_csv(const std::vector<ValidationEpisode>& episodes,
                          const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("validation: cannot write " + path);
  out << validation_csv_header();
  for (std::size_t i = 0; i < episodes.size(); ++i) {
    out << i << "," << fmt(episodes[i].mean_neg_utility) << ","
        << fmt(episodes[i].min_neg_utility) << "," << fmt(episodes[i].max_neg_utility) << "\n";
  }
}

}  // namespace laesim
