#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "wslice/channel.hpp"
#include "wslice/domain.hpp"
#include "wslice/traffic.hpp"

namespace wslice {

/// Bounded FIFO of packets for one flow. Only the head packet can be partially
/// transmitted, so the queue stores arrival times plus the head's remaining bits.
/// Arrival times are relative to the start of the current window and may be
/// negative for packets carried over from earlier windows.
class FlowQueue {
 public:
  FlowQueue() = default;
  FlowQueue(std::size_t capacity, double packet_bits);

  [[nodiscard]] std::size_t size() const noexcept { return size_; }
  [[nodiscard]] bool empty() const noexcept { return size_ == 0; }
  [[nodiscard]] std::size_t capacity() const noexcept { return arrivals_.size(); }
  [[nodiscard]] long long drops() const noexcept { return drops_; }

  /// Tail-drop enqueue; returns false (and counts a drop) when full.
  bool push(double arrival_time);

  [[nodiscard]] double head_arrival() const { return arrivals_[head_]; }
  [[nodiscard]] double head_remaining_bits() const noexcept { return head_remaining_; }
  [[nodiscard]] double arrival_at(std::size_t k) const { return arrivals_[(head_ + k) % arrivals_.size()]; }

  /// Removes `bits` from the head packet, which must hold at least that many.
  void consume_head(double bits) noexcept { head_remaining_ -= bits; }
  /// Removes the head packet.
  void pop();

  /// Shifts every stored arrival time by `-dt` (window rollover).
  void rebase(double dt) noexcept;

 private:
  std::vector<double> arrivals_;
  std::size_t head_ = 0;
  std::size_t size_ = 0;
  double packet_bits_ = 0.0;
  double head_remaining_ = 0.0;
  long long drops_ = 0;
};

/// Round-robin cursor per slice: position (within the slice's member list) of
/// the next flow to consider.
struct SliceSchedulerState {
  std::array<std::size_t, kNumSlices> cursor{};
};

/// Everything the simulator carries from one window to the next.
struct WorldState {
  std::vector<FlowQueue> queues;
  SliceSchedulerState scheduler;

  static WorldState empty_for(const NetworkRealization& realization);
};

/// One row of the optional per-slot debug log.
struct SlotEvent {
  int slot = 0;
  SlaCategory slice = SlaCategory::BestEffort;
  int flow = -1;  ///< -1 when the slice idled
  double bits_served = 0.0;
  std::size_t queue_len = 0;
};

/// Rate available to `flow` in bps/Hz: x_i * g(h).
double instantaneous_rate(const SliceAllocation& allocation, const FlowSpec& flow, double h,
                          double sigma2 = 1.0, LogBase base = LogBase::Two);

/// Packet latency in ms. `tx_time` is the effective transmission start, i.e. the
/// completion time minus the packet's airtime at rate `rate` (bps/Hz).
/// Conventional: (tx - arrival) + P / (r W). Literal: (tx - arrival) / P + 1 / (r P).
double packet_latency(double arrival_time, double tx_time, double rate, const NetworkConfig& config);

/// Simulates one slicing window in place on `world`. Each slice runs its own
/// round-robin over flows with backlog at slot granularity; the selected flow
/// owns the slice's whole subband for the slot.
WindowMetrics simulate_window(const NetworkRealization& realization, int window_index,
                              const SliceAllocation& allocation, WorldState& world,
                              const ArrivalTrace& arrivals, const ChannelTrace& channel,
                              std::vector<SlotEvent>* slot_log = nullptr);

}  // namespace wslice
