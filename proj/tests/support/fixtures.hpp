#pragma once

// Hand-built realizations and traces for tests.

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "wslice/channel.hpp"
#include "wslice/domain.hpp"
#include "wslice/simulator.hpp"
#include "wslice/traffic.hpp"

namespace wslice::testing {

/// Flows ordered H..., L..., B... with ids 0..n-1.
inline NetworkRealization make_realization(std::array<int, kNumSlices> counts, double mu = 1.0,
                                           double snr_db = 15.0, std::uint64_t seed = 1,
                                           NetworkConfig config = {}) {
  NetworkRealization r;
  config.num_flows = counts[0] + counts[1] + counts[2];
  r.config = config;
  int id = 0;
  for (std::size_t k = 0; k < kNumSlices; ++k) {
    for (int j = 0; j < counts[k]; ++j) r.flows.push_back({id++, kAllSlas[k], mu, snr_db});
  }
  r.traffic_seed = seed;
  r.channel_seed = seed + 1000;
  return r;
}

inline ArrivalTrace no_arrivals(const NetworkRealization& r, int window = 0) {
  ArrivalTrace a;
  a.window = window;
  a.mu.assign(r.flows.size(), 0.0);
  a.timestamps.resize(r.flows.size());
  return a;
}

inline ChannelTrace constant_channel(const NetworkRealization& r, double gain, int window = 0) {
  return {window, r.config.slots_per_window(), std::vector<double>(r.flows.size(), gain)};
}

/// Gain whose base-2 spectral efficiency is `g` at unit noise.
inline double gain_for_rate(double g) { return std::exp2(g) - 1.0; }

/// Fills every queue in `flows` to capacity with packets that arrived at `t`.
inline void saturate(WorldState& world, const std::vector<int>& flows, double t = 0.0) {
  for (int f : flows) {
    auto& q = world.queues[static_cast<std::size_t>(f)];
    while (q.size() < q.capacity()) q.push(t);
  }
}

inline std::vector<int> all_flows(const NetworkRealization& r) {
  std::vector<int> ids(r.flows.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
  return ids;
}

}  // namespace wslice::testing
