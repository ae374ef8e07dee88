#include "wslice/traffic.hpp"

#include <cmath>
#include <stdexcept>

namespace wslice {

std::vector<double> init_rates(const NetworkRealization& r, Rng& rng) {
  std::vector<double> mu(r.flows.size());
  for (std::size_t i = 0; i < r.flows.size(); ++i) {
    const auto range = r.config.initial_rate[index_of(r.flows[i].sla)];
    mu[i] = std::uniform_real_distribution<double>(range.lo, range.hi)(rng);
  }
  return mu;
}

double evolve_rate(double mu_prev, double noise, Interval bounds) noexcept {
  return bounds.clamp(mu_prev + noise);
}

std::vector<double> evolve_rates(std::span<const double> mu_prev, std::span<const Interval> bounds,
                                 double noise_std, Rng& rng) {
  if (bounds.size() != mu_prev.size()) throw std::invalid_argument("bounds/rates size mismatch");
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<double> out(mu_prev.size());
  for (std::size_t i = 0; i < mu_prev.size(); ++i) {
    if (mu_prev[i] < 0.0) throw std::invalid_argument("negative mean rate");
    out[i] = evolve_rate(mu_prev[i], noise_std * noise(rng), bounds[i]);
  }
  return out;
}

std::vector<Interval> rate_bounds_for(const NetworkRealization& r) {
  std::vector<Interval> out;
  out.reserve(r.flows.size());
  for (const auto& f : r.flows) out.push_back(r.config.rate_bounds[index_of(f.sla)]);
  return out;
}

int packets_per_window(double mu, const NetworkConfig& c) {
  return static_cast<int>(std::lround(mu * c.bandwidth_hz * c.window_duration / c.packet_size_bits));
}

ArrivalTrace generate_arrivals(std::span<const double> mu, const NetworkConfig& c, Rng& rng) {
  ArrivalTrace trace;
  trace.mu.assign(mu.begin(), mu.end());
  trace.timestamps.resize(mu.size());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (!(mu[i] > 0.0)) throw std::invalid_argument("CBR arrivals need a positive mean rate");
    // Draw the phase even for empty windows so the stream stays aligned across flows.
    const double u = unit(rng);
    const int n = packets_per_window(mu[i], c);
    if (n <= 0) continue;
    const double spacing = c.window_duration / n;
    const double phase = u * spacing;
    auto& ts = trace.timestamps[i];
    ts.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) ts[static_cast<std::size_t>(k)] = phase + k * spacing;
  }
  return trace;
}

std::vector<std::vector<double>> rate_schedule(const NetworkRealization& r) {
  const auto bounds = rate_bounds_for(r);
  std::vector<std::vector<double>> schedule;
  schedule.reserve(static_cast<std::size_t>(r.config.num_windows));
  std::vector<double> mu(r.flows.size());
  for (std::size_t i = 0; i < r.flows.size(); ++i) mu[i] = r.flows[i].mu_init;
  schedule.push_back(mu);
  for (int t = 1; t < r.config.num_windows; ++t) {
    auto rng = make_rng(r.traffic_seed, SeedTag::kWindow, static_cast<std::uint64_t>(t));
    mu = evolve_rates(mu, bounds, r.config.rate_walk_std, rng);
    schedule.push_back(mu);
  }
  return schedule;
}

ArrivalTrace generate_arrivals(const NetworkRealization& r, int window_index, std::span<const double> mu) {
  auto rng = make_rng(r.traffic_seed, SeedTag::kArrivalPhase, static_cast<std::uint64_t>(window_index));
  auto trace = generate_arrivals(mu, r.config, rng);
  trace.window = window_index;
  return trace;
}

}  // namespace wslice
