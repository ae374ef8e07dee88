#include "wslice/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wslice {

FlowQueue::FlowQueue(std::size_t capacity, double packet_bits)
    : arrivals_(capacity, 0.0), packet_bits_(packet_bits) {
  if (capacity == 0) throw std::invalid_argument("queue capacity must be positive");
}

bool FlowQueue::push(double arrival_time) {
  if (size_ == arrivals_.size()) {
    ++drops_;
    return false;
  }
  arrivals_[(head_ + size_) % arrivals_.size()] = arrival_time;
  if (size_ == 0) head_remaining_ = packet_bits_;
  ++size_;
  return true;
}

void FlowQueue::pop() {
  if (size_ == 0) throw std::logic_error("pop from empty flow queue");
  head_ = (head_ + 1) % arrivals_.size();
  --size_;
  head_remaining_ = size_ > 0 ? packet_bits_ : 0.0;
}

void FlowQueue::rebase(double dt) noexcept {
  for (std::size_t k = 0; k < size_; ++k) arrivals_[(head_ + k) % arrivals_.size()] -= dt;
}

WorldState WorldState::empty_for(const NetworkRealization& r) {
  WorldState w;
  w.queues.assign(r.flows.size(), FlowQueue(static_cast<std::size_t>(r.config.queue_capacity_packets),
                                            r.config.packet_size_bits));
  return w;
}

double instantaneous_rate(const SliceAllocation& allocation, const FlowSpec& flow, double h, double sigma2,
                          LogBase base) {
  return allocation.share(flow.sla) * shannon_rate(h, sigma2, base);
}

double packet_latency(double arrival_time, double tx_time, double rate, const NetworkConfig& c) {
  if (!(rate > 0.0)) throw std::invalid_argument("packet latency needs a positive rate");
  if (tx_time < arrival_time - 1e-12) throw std::invalid_argument("packet transmitted before arrival");
  const double wait = std::max(0.0, tx_time - arrival_time);
  if (c.latency_mode == LatencyMode::Literal) {
    return wait / c.packet_size_bits + 1.0 / (rate * c.packet_size_bits);
  }
  return 1e3 * (wait + c.packet_size_bits / (rate * c.bandwidth_hz));
}

namespace {

struct FlowAccumulator {
  double bits = 0.0;
  double max_latency = -1.0;
};

}  // namespace

WindowMetrics simulate_window(const NetworkRealization& r, int window_index, const SliceAllocation& allocation,
                              WorldState& world, const ArrivalTrace& arrivals, const ChannelTrace& channel,
                              std::vector<SlotEvent>* slot_log) {
  const auto& c = r.config;
  const std::size_t n = r.flows.size();
  if (window_index < 0 || window_index >= c.num_windows) throw std::out_of_range("window index outside [0, T)");
  if (arrivals.window != window_index || channel.window != window_index)
    throw std::invalid_argument("trace window does not match simulated window");
  if (arrivals.timestamps.size() != n || channel.gain.size() != n || world.queues.size() != n)
    throw std::invalid_argument("trace/queue size does not match flow count");
  if (!allocation.is_valid(1e-6)) throw std::invalid_argument("allocation is not on the simplex");

  WindowMetrics m(n, window_index);
  std::vector<FlowAccumulator> acc(n);
  std::vector<std::size_t> next_arrival(n, 0);
  std::vector<double> rate(n);  // bps/Hz while scheduled
  for (std::size_t i = 0; i < n; ++i) {
    m.queued_start[i] = static_cast<int>(world.queues[i].size());
    m.generated[i] = static_cast<int>(arrivals.timestamps[i].size());
    rate[i] = instantaneous_rate(allocation, r.flows[i], channel.gain[i], c.noise_power, c.log_base);
  }
  std::array<std::vector<int>, kNumSlices> members;
  for (auto sla : kAllSlas) members[index_of(sla)] = r.members(sla);

  const int slots = c.slots_per_window();
  const double delta = c.slot_duration;
  const double bits_per_rate_second = c.bandwidth_hz;  // bps per (bps/Hz)

  for (int s = 0; s < slots; ++s) {
    const double t0 = s * delta;
    const double t1 = (s + 1 == slots) ? c.window_duration : t0 + delta;

    for (std::size_t i = 0; i < n; ++i) {
      const auto& ts = arrivals.timestamps[i];
      auto& k = next_arrival[i];
      while (k < ts.size() && ts[k] < t1) {
        if (!world.queues[i].push(ts[k])) ++m.dropped[i];
        ++k;
      }
    }

    for (std::size_t slice = 0; slice < kNumSlices; ++slice) {
      const auto& flows = members[slice];
      if (flows.empty()) continue;
      auto& cursor = world.scheduler.cursor[slice];
      if (cursor >= flows.size()) cursor = 0;

      int chosen = -1;
      for (std::size_t step = 0; step < flows.size(); ++step) {
        const std::size_t pos = (cursor + step) % flows.size();
        if (!world.queues[static_cast<std::size_t>(flows[pos])].empty()) {
          chosen = flows[pos];
          cursor = (pos + 1) % flows.size();
          break;
        }
      }
      if (chosen < 0) {
        if (slot_log) slot_log->push_back({s, kAllSlas[slice], -1, 0.0, 0});
        continue;
      }

      const auto fi = static_cast<std::size_t>(chosen);
      auto& q = world.queues[fi];
      const double bps = rate[fi] * bits_per_rate_second;
      double served = 0.0;
      if (bps > 0.0) {
        double t = t0;
        while (!q.empty()) {
          const double start = std::max(t, q.head_arrival());
          if (start >= t1) break;
          const double need = q.head_remaining_bits();
          const double finish = start + need / bps;
          if (finish <= t1) {
            const double airtime = c.packet_size_bits / bps;
            // Partial service in an earlier window may have run at another rate.
            const double tx_time = std::max(finish - airtime, q.head_arrival());
            const double latency = packet_latency(q.head_arrival(), tx_time, rate[fi], c);
            acc[fi].max_latency = std::max(acc[fi].max_latency, latency);
            served += need;
            q.pop();
            ++m.transmitted[fi];
            t = finish;
          } else {
            const double part = (t1 - start) * bps;
            q.consume_head(part);
            served += part;
            break;
          }
        }
      }
      acc[fi].bits += served;
      if (slot_log) slot_log->push_back({s, kAllSlas[slice], chosen, served, q.size()});
    }
  }

  const double norm = c.bandwidth_hz * c.window_duration;
  for (std::size_t i = 0; i < n; ++i) {
    auto& q = world.queues[i];
    m.throughput[i] = acc[i].bits / norm;
    if (acc[i].max_latency >= 0.0) {
      m.latency_ms[i] = acc[i].max_latency;
    } else if (!q.empty()) {
      const double age = c.window_duration - q.head_arrival();
      m.latency_ms[i] = c.latency_mode == LatencyMode::Literal ? age / c.packet_size_bits : 1e3 * age;
    }
    m.queued_end[i] = static_cast<int>(q.size());
    q.rebase(c.window_duration);
  }
  return m;
}

}  // namespace wslice
