#include "wslice/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace wslice {

double sample_mean_snr(Rng& rng, Interval range_db) {
  std::uniform_real_distribution<double> dist(range_db.lo, range_db.hi);
  return dist(rng);
}

std::vector<double> sample_mean_snrs(std::size_t num_flows, Rng& rng, Interval range_db) {
  std::vector<double> out(num_flows);
  for (auto& v : out) v = sample_mean_snr(rng, range_db);
  return out;
}

ChannelTrace sample_fading(const NetworkRealization& r, int window_index, Rng& rng) {
  if (window_index < 0 || window_index >= r.config.num_windows)
    throw std::out_of_range("window index outside [0, T)");
  ChannelTrace trace;
  trace.window = window_index;
  trace.num_slots = r.config.slots_per_window();
  trace.gain.resize(r.flows.size());
  std::exponential_distribution<double> fade(1.0);
  for (std::size_t i = 0; i < r.flows.size(); ++i) {
    const double snr_linear = std::pow(10.0, r.flows[i].mean_snr_db / 10.0);
    trace.gain[i] = snr_linear * fade(rng);
  }
  return trace;
}

ChannelTrace sample_fading(const NetworkRealization& r, int window_index) {
  auto rng = make_rng(r.channel_seed, SeedTag::kWindow, static_cast<std::uint64_t>(window_index));
  return sample_fading(r, window_index, rng);
}

double shannon_rate(double h, double sigma2, LogBase base) {
  if (h < 0.0) throw std::invalid_argument("negative channel gain");
  if (!(sigma2 > 0.0)) throw std::invalid_argument("noise power must be positive");
  const double x = h / sigma2;
  return base == LogBase::Two ? std::log2(1.0 + x) : std::log1p(x);
}

}  // namespace wslice
