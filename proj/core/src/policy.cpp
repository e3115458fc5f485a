#include "laesim/policy.hpp"

#include <boost/math/special_functions/digamma.hpp>

#include <cmath>
#include <stdexcept>

namespace laesim {

namespace {

double softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

void check_finite(const std::vector<double>& v, const char* what) {
  for (double x : v)
    if (!std::isfinite(x)) throw std::runtime_error(std::string(what) + ": non-finite value");
}

struct ForwardTrace {
  std::vector<double> x, h1, h2, z3, conc;
};

void forward_traced(const PolicyParams& p, const std::vector<double>& features, ForwardTrace& t) {
  if (features.size() != p.input_dim) throw std::invalid_argument("forward: input dim mismatch");
  t.x = features;
  t.h1.assign(p.hidden_dim, 0.0);
  for (std::size_t i = 0; i < p.hidden_dim; ++i) {
    double z = p.b1[i];
    for (std::size_t j = 0; j < p.input_dim; ++j) z += p.w1.at(i, j) * t.x[j];
    t.h1[i] = std::tanh(z);
  }
  t.h2.assign(p.hidden_dim, 0.0);
  for (std::size_t i = 0; i < p.hidden_dim; ++i) {
    double z = p.b2[i];
    for (std::size_t j = 0; j < p.hidden_dim; ++j) z += p.w2.at(i, j) * t.h1[j];
    t.h2[i] = std::tanh(z);
  }
  t.z3.assign(p.output_dim, 0.0);
  t.conc.assign(p.output_dim, 0.0);
  for (std::size_t i = 0; i < p.output_dim; ++i) {
    double z = p.b3[i];
    for (std::size_t j = 0; j < p.hidden_dim; ++j) z += p.w3.at(i, j) * t.h2[j];
    t.z3[i] = z;
    t.conc[i] = softplus(z) + kConcentrationFloor;
  }
  check_finite(t.conc, "forward");
}

}  // namespace

std::vector<double> Observation::flatten() const {
  std::vector<double> out;
  out.reserve(dim());
  for (std::size_t h = 0; h < demand_cycles.rows(); ++h) {
    for (std::size_t k = 0; k < demand_cycles.cols(); ++k) {
      out.push_back(demand_cycles.at(h, k));
      out.push_back(demand_bits.at(h, k));
    }
  }
  for (std::size_t h = 0; h < prev_wins.rows(); ++h)
    for (std::size_t k = 0; k < prev_wins.cols(); ++k) out.push_back(prev_wins.at(h, k));
  out.insert(out.end(), user_counts.begin(), user_counts.end());
  out.push_back(time_frac);
  return out;
}

Observation encode_observation(const std::vector<HotspotState>& hotspots,
                               const Grid2<std::uint8_t>& prev_wins, std::size_t t,
                               std::size_t horizon, std::size_t n_services,
                               const ObservationScales& scales) {
  const std::size_t n_hotspots = prev_wins.rows();
  if (prev_wins.cols() != n_services)
    throw std::invalid_argument("encode_observation: prev_wins shape mismatch");
  if (!hotspots.empty() && hotspots.size() != n_hotspots)
    throw std::invalid_argument("encode_observation: hotspot count mismatch");

  Observation obs;
  obs.demand_cycles = Grid2<double>(n_hotspots, n_services);
  obs.demand_bits = Grid2<double>(n_hotspots, n_services);
  obs.prev_wins = Grid2<double>(n_hotspots, n_services);
  obs.user_counts.assign(n_hotspots, 0.0);
  if (!hotspots.empty()) {
    const DemandSummary demand = aggregate_demand(hotspots, n_services);
    for (std::size_t h = 0; h < n_hotspots; ++h) {
      obs.user_counts[h] = demand.user_counts[h] / scales.users_scale;
      for (std::size_t k = 0; k < n_services; ++k) {
        obs.demand_cycles.at(h, k) = demand.required_cycles.at(h, k) / scales.cycles_scale;
        obs.demand_bits.at(h, k) = demand.total_bits.at(h, k) / scales.bits_scale;
      }
    }
  }
  for (std::size_t h = 0; h < n_hotspots; ++h)
    for (std::size_t k = 0; k < n_services; ++k)
      obs.prev_wins.at(h, k) = static_cast<double>(prev_wins.at(h, k));
  obs.time_frac = horizon == 0 ? 0.0 : static_cast<double>(t) / static_cast<double>(horizon);
  return obs;
}

PolicyParams PolicyParams::init(std::size_t input_dim, std::size_t hidden_dim,
                                std::size_t output_dim, std::uint64_t seed) {
  PolicyParams p;
  p.input_dim = input_dim;
  p.hidden_dim = hidden_dim;
  p.output_dim = output_dim;
  p.w1 = Grid2<double>(hidden_dim, input_dim);
  p.w2 = Grid2<double>(hidden_dim, hidden_dim);
  p.w3 = Grid2<double>(output_dim, hidden_dim);
  p.b1.assign(hidden_dim, 0.0);
  p.b2.assign(hidden_dim, 0.0);
  p.b3.assign(output_dim, 0.0);
  RngStream rng = RngStream::derive(seed, /*role=*/0x7001);
  auto fill = [&rng](Grid2<double>& w, std::size_t fan_in) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (double& v : w.data()) v = rng.uniform(-bound, bound);
  };
  fill(p.w1, input_dim);
  fill(p.w2, hidden_dim);
  fill(p.w3, hidden_dim);
  return p;
}

std::size_t PolicyParams::param_count() const {
  return w1.size() + b1.size() + w2.size() + b2.size() + w3.size() + b3.size();
}

GradientVector PolicyParams::flatten() const {
  GradientVector out;
  out.reserve(param_count());
  auto append = [&out](const std::vector<double>& v) { out.insert(out.end(), v.begin(), v.end()); };
  append(w1.data());
  append(b1);
  append(w2.data());
  append(b2);
  append(w3.data());
  append(b3);
  return out;
}

PolicyParams PolicyParams::unflatten(std::size_t input_dim, std::size_t hidden_dim,
                                     std::size_t output_dim, const GradientVector& flat) {
  PolicyParams p;
  p.input_dim = input_dim;
  p.hidden_dim = hidden_dim;
  p.output_dim = output_dim;
  p.w1 = Grid2<double>(hidden_dim, input_dim);
  p.w2 = Grid2<double>(hidden_dim, hidden_dim);
  p.w3 = Grid2<double>(output_dim, hidden_dim);
  p.b1.assign(hidden_dim, 0.0);
  p.b2.assign(hidden_dim, 0.0);
  p.b3.assign(output_dim, 0.0);
  if (flat.size() != p.param_count()) throw std::invalid_argument("unflatten: size mismatch");
  std::size_t pos = 0;
  auto take = [&flat, &pos](std::vector<double>& v) {
    std::copy(flat.begin() + static_cast<std::ptrdiff_t>(pos),
              flat.begin() + static_cast<std::ptrdiff_t>(pos + v.size()), v.begin());
    pos += v.size();
  };
  take(p.w1.data());
  take(p.b1);
  take(p.w2.data());
  take(p.b2);
  take(p.w3.data());
  take(p.b3);
  return p;
}

void PolicyParams::add_scaled(const GradientVector& direction, double scale) {
  if (direction.size() != param_count()) throw std::invalid_argument("add_scaled: size mismatch");
  std::size_t pos = 0;
  auto apply = [&direction, &pos, scale](std::vector<double>& v) {
    for (double& x : v) x += scale * direction[pos++];
  };
  apply(w1.data());
  apply(b1);
  apply(w2.data());
  apply(b2);
  apply(w3.data());
  apply(b3);
}

std::vector<double> forward(const PolicyParams& params, const Observation& obs) {
  ForwardTrace trace;
  forward_traced(params, obs.flatten(), trace);
  return trace.conc;
}

ActionFractions sample_action(const std::vector<double>& concentrations, std::size_t n_hotspots,
                              std::size_t n_services, RngStream& rng) {
  if (concentrations.size() != 2 * n_services * n_hotspots)
    throw std::invalid_argument("sample_action: concentration size mismatch");
  ActionFractions out;
  out.n_hotspots = n_hotspots;
  out.n_services = n_services;
  out.values.assign(concentrations.size(), 0.0);
  for (std::size_t block = 0; block < 2 * n_services; ++block) {
    const std::size_t base = block * n_hotspots;
    double sum = 0.0;
    for (std::size_t h = 0; h < n_hotspots; ++h) {
      const double a = concentrations[base + h];
      if (a <= 0.0) throw std::invalid_argument("sample_action: non-positive concentration");
      const double draw = n_hotspots == 1 ? 1.0 : rng.gamma(a);
      out.values[base + h] = draw;
      sum += draw;
    }
    // gamma draws can collectively underflow; fall back to uniform
    if (sum <= 0.0) {
      for (std::size_t h = 0; h < n_hotspots; ++h) out.values[base + h] = 1.0;
      sum = static_cast<double>(n_hotspots);
    }
    double clamped_sum = 0.0;
    for (std::size_t h = 0; h < n_hotspots; ++h) {
      out.values[base + h] = std::max(out.values[base + h] / sum, kFractionFloor);
      clamped_sum += out.values[base + h];
    }
    for (std::size_t h = 0; h < n_hotspots; ++h) out.values[base + h] /= clamped_sum;
  }
  return out;
}

BidMatrix to_bid(const ActionFractions& fractions, const std::vector<double>& budget_compute_hz,
                 const std::vector<double>& budget_bandwidth_hz) {
  if (budget_compute_hz.size() != fractions.n_services ||
      budget_bandwidth_hz.size() != fractions.n_services)
    throw std::invalid_argument("to_bid: budget vector length mismatch");
  BidMatrix bid(fractions.n_hotspots, fractions.n_services);
  for (std::size_t k = 0; k < fractions.n_services; ++k) {
    for (std::size_t h = 0; h < fractions.n_hotspots; ++h) {
      bid.compute_hz.at(h, k) = budget_compute_hz[k] * fractions.at(k, 0, h);
      bid.bandwidth_hz.at(h, k) = budget_bandwidth_hz[k] * fractions.at(k, 1, h);
    }
  }
  return bid;
}

double log_prob(const std::vector<double>& concentrations, const ActionFractions& fractions) {
  if (concentrations.size() != fractions.values.size())
    throw std::invalid_argument("log_prob: size mismatch");
  const std::size_t n_hotspots = fractions.n_hotspots;
  double total = 0.0;
  for (std::size_t block = 0; block < 2 * fractions.n_services; ++block) {
    const std::size_t base = block * n_hotspots;
    double alpha_sum = 0.0;
    double term = 0.0;
    for (std::size_t h = 0; h < n_hotspots; ++h) {
      const double a = concentrations[base + h];
      const double x = fractions.values[base + h];
      if (a <= 0.0 || x <= 0.0) throw std::invalid_argument("log_prob: invalid inputs");
      alpha_sum += a;
      term += -std::lgamma(a) + (a - 1.0) * std::log(x);
    }
    total += std::lgamma(alpha_sum) + term;
  }
  if (!std::isfinite(total)) throw std::runtime_error("log_prob: non-finite result");
  return total;
}

GradientVector grad_log_prob(const PolicyParams& params, const Observation& obs,
                             const ActionFractions& fractions) {
  ForwardTrace t;
  forward_traced(params, obs.flatten(), t);
  if (t.conc.size() != fractions.values.size())
    throw std::invalid_argument("grad_log_prob: action dim mismatch");

  const std::size_t n_hotspots = fractions.n_hotspots;
  // d log p / d z3 through the Dirichlet score and the softplus
  std::vector<double> dz3(params.output_dim, 0.0);
  for (std::size_t block = 0; block < 2 * fractions.n_services; ++block) {
    const std::size_t base = block * n_hotspots;
    double alpha_sum = 0.0;
    for (std::size_t h = 0; h < n_hotspots; ++h) alpha_sum += t.conc[base + h];
    const double psi_sum = boost::math::digamma(alpha_sum);
    for (std::size_t h = 0; h < n_hotspots; ++h) {
      const std::size_t i = base + h;
      const double dalpha =
          psi_sum - boost::math::digamma(t.conc[i]) + std::log(fractions.values[i]);
      dz3[i] = dalpha * sigmoid(t.z3[i]);
    }
  }

  std::vector<double> dh2(params.hidden_dim, 0.0);
  for (std::size_t j = 0; j < params.hidden_dim; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < params.output_dim; ++i) acc += params.w3.at(i, j) * dz3[i];
    dh2[j] = acc;
  }
  std::vector<double> dz2(params.hidden_dim, 0.0);
  for (std::size_t j = 0; j < params.hidden_dim; ++j)
    dz2[j] = dh2[j] * (1.0 - t.h2[j] * t.h2[j]);

  std::vector<double> dh1(params.hidden_dim, 0.0);
  for (std::size_t j = 0; j < params.hidden_dim; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < params.hidden_dim; ++i) acc += params.w2.at(i, j) * dz2[i];
    dh1[j] = acc;
  }
  std::vector<double> dz1(params.hidden_dim, 0.0);
  for (std::size_t j = 0; j < params.hidden_dim; ++j)
    dz1[j] = dh1[j] * (1.0 - t.h1[j] * t.h1[j]);

  GradientVector grad(params.param_count(), 0.0);
  std::size_t pos = 0;
  for (std::size_t i = 0; i < params.hidden_dim; ++i)
    for (std::size_t j = 0; j < params.input_dim; ++j) grad[pos++] = dz1[i] * t.x[j];
  for (std::size_t i = 0; i < params.hidden_dim; ++i) grad[pos++] = dz1[i];
  for (std::size_t i = 0; i < params.hidden_dim; ++i)
    for (std::size_t j = 0; j < params.hidden_dim; ++j) grad[pos++] = dz2[i] * t.h1[j];
  for (std::size_t i = 0; i < params.hidden_dim; ++i) grad[pos++] = dz2[i];
  for (std::size_t i = 0; i < params.output_dim; ++i)
    for (std::size_t j = 0; j < params.hidden_dim; ++j) grad[pos++] = dz3[i] * t.h2[j];
  for (std::size_t i = 0; i < params.output_dim; ++i) grad[pos++] = dz3[i];

  for (double g : grad)
    if (!std::isfinite(g)) throw std::runtime_error("grad_log_prob: non-finite gradient");
  return grad;
}

}  // namespace laesim
