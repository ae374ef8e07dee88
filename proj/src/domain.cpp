#include "wslice/domain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace wslice {

std::string_view to_string(SlaCategory sla) noexcept {
  switch (sla) {
    case SlaCategory::HighThroughput:
      return "H";
    case SlaCategory::LowLatency:
      return "L";
    case SlaCategory::BestEffort:
      return "B";
  }
  return "?";
}

std::optional<SlaCategory> parse_sla(std::string_view text) noexcept {
  if (text == "H" || text == "high_throughput") return SlaCategory::HighThroughput;
  if (text == "L" || text == "low_latency") return SlaCategory::LowLatency;
  if (text == "B" || text == "best_effort") return SlaCategory::BestEffort;
  return std::nullopt;
}

int NetworkConfig::slots_per_window() const {
  return static_cast<int>(std::lround(window_duration / slot_duration));
}

std::vector<std::string> validate_config(const NetworkConfig& c) {
  std::vector<std::string> errors;
  auto fail = [&errors](std::string msg) { errors.push_back(std::move(msg)); };

  if (!(c.bandwidth_hz > 0.0)) fail("bandwidth_hz must be positive");
  if (c.num_flows < 3) fail("num_flows must be at least 3 (one flow per SLA category)");
  if (c.num_windows < 1) fail("num_windows must be positive");
  if (c.dual_period < 1) {
    fail("dual_period must be positive");
  } else if (c.num_windows >= 1 && c.num_windows % c.dual_period != 0) {
    fail("T0 must divide T");
  }
  if (!(c.window_duration > 0.0)) fail("window_duration must be positive");
  if (!(c.slot_duration > 0.0)) {
    fail("slot_duration must be positive");
  } else if (c.window_duration > 0.0) {
    const double ratio = c.window_duration / c.slot_duration;
    if (ratio < 1.0 || std::abs(ratio - std::round(ratio)) > 1e-6 * ratio)
      fail("window_duration must be an integer multiple of slot_duration");
  }
  if (!(c.packet_size_bits > 0.0)) fail("packet_size_bits must be positive");
  if (c.queue_capacity_packets < 1) fail("queue_capacity_packets must be at least 1");
  if (!(c.noise_power > 0.0)) fail("noise_power must be positive");
  if (!(c.qos.r_min > 0.0)) fail("qos.r_min must be positive");
  if (!(c.qos.ell_max > 0.0)) fail("qos.ell_max must be positive");
  if (c.mean_snr_db.lo > c.mean_snr_db.hi) fail("mean_snr_db range is empty");
  if (!(c.rate_walk_std >= 0.0)) fail("rate_walk_std must be nonnegative");
  for (std::size_t k = 0; k < kNumSlices; ++k) {
    const auto name = std::string(to_string(kAllSlas[k]));
    if (!(c.initial_rate[k].lo > 0.0) || c.initial_rate[k].lo > c.initial_rate[k].hi)
      fail("initial_rate[" + name + "] must be a nonempty positive range");
    if (!(c.rate_bounds[k].lo > 0.0) || c.rate_bounds[k].lo > c.rate_bounds[k].hi)
      fail("rate_bounds[" + name + "] must be a nonempty positive range");
  }
  return errors;
}

void require_valid(const NetworkConfig& config) {
  const auto errors = validate_config(config);
  if (errors.empty()) return;
  std::ostringstream os;
  os << "invalid network config:";
  for (const auto& e : errors) os << "\n  - " << e;
  throw ConfigError(os.str());
}

std::array<int, kNumSlices> NetworkRealization::category_counts() const {
  std::array<int, kNumSlices> counts{};
  for (const auto& f : flows) ++counts[index_of(f.sla)];
  return counts;
}

std::vector<int> NetworkRealization::members(SlaCategory sla) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < flows.size(); ++i)
    if (flows[i].sla == sla) out.push_back(static_cast<int>(i));
  return out;
}

void check_realization(const NetworkRealization& r) {
  require_valid(r.config);
  if (r.flows.empty()) throw ConfigError("realization has no flows");
  const auto counts = r.category_counts();
  for (std::size_t k = 0; k < kNumSlices; ++k) {
    if (counts[k] == 0)
      throw ConfigError("realization needs at least one flow in SLA category " +
                        std::string(to_string(kAllSlas[k])));
  }
  std::set<int> ids;
  for (const auto& f : r.flows) {
    if (!ids.insert(f.id).second) throw ConfigError("duplicate flow id " + std::to_string(f.id));
    if (!(f.mu_init > 0.0)) throw ConfigError("flow " + std::to_string(f.id) + " has mu_init <= 0");
  }
}

NetworkRealization with_qos(NetworkRealization realization, QosSpec qos) {
  realization.config.qos = qos;
  return realization;
}

double SliceAllocation::share(SlaCategory sla) const noexcept {
  switch (sla) {
    case SlaCategory::HighThroughput:
      return p_h;
    case SlaCategory::LowLatency:
      return p_l;
    case SlaCategory::BestEffort:
      return p_b;
  }
  return 0.0;
}

bool SliceAllocation::is_valid(double tol) const noexcept {
  return p_h >= 0.0 && p_l >= 0.0 && p_b >= 0.0 && std::abs(p_h + p_l + p_b - 1.0) <= tol;
}

SliceAllocation SliceAllocation::from_weights(double w_h, double w_l, double w_b) {
  if (w_h < 0.0 || w_l < 0.0 || w_b < 0.0) throw std::invalid_argument("negative slice weight");
  const double total = w_h + w_l + w_b;
  if (!(total > 0.0)) throw std::invalid_argument("slice weights sum to zero");
  return {w_h / total, w_l / total, w_b / total};
}

WindowMetrics::WindowMetrics(std::size_t n, int window_index)
    : window(window_index),
      throughput(n, 0.0),
      latency_ms(n),
      generated(n, 0),
      transmitted(n, 0),
      dropped(n, 0),
      queued_start(n, 0),
      queued_end(n, 0) {}

bool WindowMetrics::conserves_packets() const noexcept {
  for (std::size_t i = 0; i < throughput.size(); ++i) {
    if (queued_start[i] + generated[i] != transmitted[i] + queued_end[i] + dropped[i]) return false;
  }
  return true;
}

std::vector<double> WindowMetrics::arrival_rates(const NetworkConfig& config) const {
  const double scale = config.packet_size_bits / (config.bandwidth_hz * config.window_duration);
  std::vector<double> out(generated.size());
  std::transform(generated.begin(), generated.end(), out.begin(),
                 [scale](int n) { return n * scale; });
  return out;
}

NetworkStateVector build_state_vector(const NetworkRealization& r,
                                      std::span<const double> arrival_estimates) {
  if (r.flows.empty()) throw ConfigError("cannot build a state vector for an empty flow list");
  if (arrival_estimates.size() != r.flows.size())
    throw std::invalid_argument("arrival estimate count does not match flow count");

  NetworkStateVector s;
  std::array<double, kNumSlices> totals{};
  const auto counts = r.category_counts();
  for (std::size_t i = 0; i < r.flows.size(); ++i) {
    if (arrival_estimates[i] < 0.0) throw std::invalid_argument("negative arrival estimate");
    totals[index_of(r.flows[i].sla)] += arrival_estimates[i];
  }
  const double n = static_cast<double>(r.flows.size());
  for (std::size_t k = 0; k < kNumSlices; ++k) {
    s.values[k] = counts[k] / n;
    s.values[3 + k] = counts[k] > 0 ? totals[k] / counts[k] / kStateRateNormalizer : 0.0;
    s.values[6 + k] = totals[k] / kStateRateNormalizer / n;
  }
  return s;
}

NetworkStateVector build_state_vector(const NetworkRealization& r, const WindowMetrics* prev_window) {
  if (prev_window != nullptr) return build_state_vector(r, prev_window->arrival_rates(r.config));
  std::vector<double> mu(r.flows.size());
  std::transform(r.flows.begin(), r.flows.end(), mu.begin(), [](const FlowSpec& f) { return f.mu_init; });
  return build_state_vector(r, mu);
}

}  // namespace wslice
