#pragma once

#include <span>
#include <vector>

#include "wslice/channel.hpp"
#include "wslice/domain.hpp"
#include "wslice/simulator.hpp"
#include "wslice/traffic.hpp"

namespace wslice {

/// The exogenous part of a T-window run: mean-rate schedule plus on-demand
/// arrival and channel traces, all reproducible from the realization's seeds.
/// Policies never influence anything held here.
class Episode {
 public:
  explicit Episode(NetworkRealization realization);

  [[nodiscard]] const NetworkRealization& realization() const noexcept { return realization_; }
  [[nodiscard]] const NetworkConfig& config() const noexcept { return realization_.config; }
  [[nodiscard]] int num_windows() const noexcept { return realization_.config.num_windows; }

  /// mu^t for every flow.
  [[nodiscard]] std::span<const double> mean_rates(int window) const { return schedule_.at(static_cast<std::size_t>(window)); }

  [[nodiscard]] ArrivalTrace arrivals(int window) const;
  [[nodiscard]] ChannelTrace channel(int window) const;
  [[nodiscard]] WorldState initial_world() const { return WorldState::empty_for(realization_); }

 private:
  NetworkRealization realization_;
  std::vector<std::vector<double>> schedule_;
};

}  // namespace wslice
