#pragma once

#include <span>
#include <vector>

#include "wslice/domain.hpp"
#include "wslice/rng.hpp"

namespace wslice {

/// Constant-bit-rate arrivals for one slicing window. Timestamps are seconds
/// from the window start, sorted, in [0, window_duration).
struct ArrivalTrace {
  int window = 0;
  std::vector<double> mu;                      ///< mean rate used per flow, bps/Hz
  std::vector<std::vector<double>> timestamps; ///< per flow
};

/// Initial mean rates drawn from each flow's SLA range in `config.initial_rate`.
std::vector<double> init_rates(const NetworkRealization& realization, Rng& rng);

/// One random-walk step with an explicit noise draw: clamp(mu + noise, bounds).
double evolve_rate(double mu_prev, double noise, Interval bounds) noexcept;

/// mu_next_i = clamp(mu_prev_i + N(0, std^2), bounds_i).
std::vector<double> evolve_rates(std::span<const double> mu_prev, std::span<const Interval> bounds,
                                 double noise_std, Rng& rng);

/// Per-flow clamp bounds taken from the flow's SLA.
std::vector<Interval> rate_bounds_for(const NetworkRealization& realization);

/// Packets per window for mean rate `mu`: round(mu * W * tau_max / P).
int packets_per_window(double mu, const NetworkConfig& config);

/// Equally spaced CBR arrivals with a uniform random phase in [0, tau_max / N) per flow.
ArrivalTrace generate_arrivals(std::span<const double> mu, const NetworkConfig& config, Rng& rng);

/// Mean rate of every flow at every window: row t holds mu^t. Row 0 is the
/// flows' mu_init; later rows follow the clamped random walk seeded from
/// (traffic_seed, t).
std::vector<std::vector<double>> rate_schedule(const NetworkRealization& realization);

/// Arrivals for window t using the RNG derived from (traffic_seed, t).
ArrivalTrace generate_arrivals(const NetworkRealization& realization, int window_index,
                               std::span<const double> mu);

}  // namespace wslice
