#pragma once

#include <vector>

#include "wslice/domain.hpp"
#include "wslice/rng.hpp"

namespace wslice {

/// Per-flow channel gain for one slicing window. Fading is block-constant, so a
/// single gain per flow covers every slot of the window. Gains are expressed
/// as SNR against unit noise power.
struct ChannelTrace {
  int window = 0;
  int num_slots = 0;
  std::vector<double> gain;

  [[nodiscard]] double at(std::size_t flow, int /*slot*/) const { return gain.at(flow); }
};

/// Uniform draw of a mean SNR (dB) from `range_db`.
double sample_mean_snr(Rng& rng, Interval range_db);

/// One mean SNR per flow.
std::vector<double> sample_mean_snrs(std::size_t num_flows, Rng& rng, Interval range_db);

/// Rayleigh block fading: h_i = 10^(snr_db_i / 10) * e_i with e_i ~ Exp(1),
/// one draw per flow for the whole window.
ChannelTrace sample_fading(const NetworkRealization& realization, int window_index, Rng& rng);

/// Same draw as above with the RNG derived from (channel_seed, window_index).
ChannelTrace sample_fading(const NetworkRealization& realization, int window_index);

/// Spectral efficiency g(h) = log(1 + h / sigma2) in bps/Hz (base 2) or nats/s/Hz (base e).
double shannon_rate(double h, double sigma2, LogBase base = LogBase::Two);

}  // namespace wslice
