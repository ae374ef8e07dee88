#include "wslice/episode.hpp"

#include <utility>

namespace wslice {

Episode::Episode(NetworkRealization realization) : realization_(std::move(realization)) {
  check_realization(realization_);
  schedule_ = rate_schedule(realization_);
}

ArrivalTrace Episode::arrivals(int window) const {
  return generate_arrivals(realization_, window, mean_rates(window));
}

ChannelTrace Episode::channel(int window) const { return sample_fading(realization_, window); }

}  // namespace wslice
