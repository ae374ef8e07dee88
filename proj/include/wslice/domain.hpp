#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wslice {

/// Raised for invalid configuration files, flags or realizations.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a required artifact (checkpoint, trace) is missing.
class MissingArtifactError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SlaCategory : std::uint8_t { HighThroughput = 0, LowLatency = 1, BestEffort = 2 };

inline constexpr std::size_t kNumSlices = 3;
inline constexpr std::array<SlaCategory, kNumSlices> kAllSlas{
    SlaCategory::HighThroughput, SlaCategory::LowLatency, SlaCategory::BestEffort};

constexpr std::size_t index_of(SlaCategory sla) noexcept { return static_cast<std::size_t>(sla); }

std::string_view to_string(SlaCategory sla) noexcept;
std::optional<SlaCategory> parse_sla(std::string_view text) noexcept;

enum class LogBase : std::uint8_t { Two, E };
enum class LatencyMode : std::uint8_t { Conventional, Literal };

struct QosSpec {
  double r_min = 1.0;    ///< bps/Hz
  double ell_max = 10.0; ///< ms
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  [[nodiscard]] double clamp(double v) const noexcept { return v < lo ? lo : (v > hi ? hi : v); }
  [[nodiscard]] bool contains(double v) const noexcept { return v >= lo && v <= hi; }
};

/// Static description of the slicing experiment. Units: seconds, bits, Hz.
struct NetworkConfig {
  double bandwidth_hz = 20e6;
  int num_flows = 20;
  int num_windows = 50;
  int dual_period = 2;
  double window_duration = 0.05;
  double slot_duration = 0.5e-3;
  double packet_size_bits = 1e4;
  int queue_capacity_packets = 500;
  double noise_power = 1.0;
  QosSpec qos{};
  std::uint64_t rng_seed = 0;

  LogBase log_base = LogBase::Two;
  LatencyMode latency_mode = LatencyMode::Conventional;

  /// Range of the per-flow large-scale mean SNR draw (dB).
  Interval mean_snr_db{82.0, 92.0};
  /// Random-walk noise std of the per-window mean arrival rate (bps/Hz).
  double rate_walk_std = 0.5;
  /// Initial mean-rate sampling range per SLA (H, L, B), bps/Hz.
  std::array<Interval, kNumSlices> initial_rate{{{1.0, 5.0}, {0.5, 1.5}, {1.0, 5.0}}};
  /// Random-walk clamp per SLA (H, L, B), bps/Hz.
  std::array<Interval, kNumSlices> rate_bounds{{{1.0, 5.0}, {0.5, 1.5}, {1.0, 5.0}}};

  [[nodiscard]] int slots_per_window() const;
};

/// All violated invariants; empty when the config is usable.
std::vector<std::string> validate_config(const NetworkConfig& config);

/// Throws ConfigError listing every problem found by validate_config.
void require_valid(const NetworkConfig& config);

struct FlowSpec {
  int id = 0;
  SlaCategory sla = SlaCategory::BestEffort;
  double mu_init = 1.0;      ///< mean arrival rate, bps/Hz
  double mean_snr_db = 15.0; ///< large-scale SNR, dB
};

/// One sampled network: SLA assignment, rates, SNRs and the seeds that drive
/// its traffic and channel traces.
struct NetworkRealization {
  NetworkConfig config;
  std::vector<FlowSpec> flows;
  std::uint64_t traffic_seed = 0;
  std::uint64_t channel_seed = 0;

  [[nodiscard]] std::array<int, kNumSlices> category_counts() const;
  [[nodiscard]] std::vector<int> members(SlaCategory sla) const;
  [[nodiscard]] std::size_t num_flows() const noexcept { return flows.size(); }
};

/// Throws ConfigError unless the realization has >= 1 flow per SLA, unique ids,
/// positive rates and a valid config.
void check_realization(const NetworkRealization& realization);

/// Copy of `realization` measured against different QoS targets.
NetworkRealization with_qos(NetworkRealization realization, QosSpec qos);

/// Fraction of the total bandwidth per SLA category. Lives on the 3-simplex.
struct SliceAllocation {
  double p_h = 1.0 / 3.0;
  double p_l = 1.0 / 3.0;
  double p_b = 1.0 / 3.0;

  [[nodiscard]] double share(SlaCategory sla) const noexcept;
  [[nodiscard]] bool is_valid(double tol = 1e-9) const noexcept;

  /// Normalizes nonnegative weights; throws std::invalid_argument on a zero or
  /// negative total.
  static SliceAllocation from_weights(double w_h, double w_l, double w_b);
  static SliceAllocation uniform() noexcept { return {}; }
};

struct DualMultipliers {
  double lambda_h = 0.0;
  double lambda_l = 0.0;

  [[nodiscard]] bool is_nonnegative() const noexcept { return lambda_h >= 0.0 && lambda_l >= 0.0; }
  friend bool operator==(const DualMultipliers&, const DualMultipliers&) = default;
};

/// Network summary fed to the slicing policy:
/// (frac_H, frac_L, frac_B, avg_rate_H, avg_rate_L, avg_rate_B, tot_rate_H, tot_rate_L, tot_rate_B).
struct NetworkStateVector {
  static constexpr std::size_t kSize = 9;
  std::array<double, kSize> values{};

  [[nodiscard]] double fraction(SlaCategory sla) const noexcept { return values[index_of(sla)]; }
  [[nodiscard]] double avg_rate(SlaCategory sla) const noexcept { return values[3 + index_of(sla)]; }
  [[nodiscard]] double total_rate(SlaCategory sla) const noexcept { return values[6 + index_of(sla)]; }
};

/// Rates in the state vector are divided by this (bps/Hz) before entering the policy.
inline constexpr double kStateRateNormalizer = 5.0;

/// QoS outcome of one slicing window. Per-flow vectors are indexed like
/// NetworkRealization::flows.
struct WindowMetrics {
  int window = 0;
  std::vector<double> throughput;                ///< r_i(t), bps/Hz
  std::vector<std::optional<double>> latency_ms; ///< l_i(t); empty when idle all window
  std::vector<int> generated;
  std::vector<int> transmitted;
  std::vector<int> dropped;
  std::vector<int> queued_start;
  std::vector<int> queued_end;

  explicit WindowMetrics(std::size_t num_flows = 0, int window_index = 0);

  /// queued_start + generated == transmitted + queued_end + dropped, per flow.
  [[nodiscard]] bool conserves_packets() const noexcept;

  /// Empirical arrival rate of each flow over the window (bps/Hz).
  [[nodiscard]] std::vector<double> arrival_rates(const NetworkConfig& config) const;
};

/// State vector at a window. `arrival_estimates` holds per-flow rates (bps/Hz)
/// measured over the previous window; pass the flows' mu_init for window 0.
NetworkStateVector build_state_vector(const NetworkRealization& realization,
                                      std::span<const double> arrival_estimates);

/// Convenience overload: uses `prev_window` arrival rates when present, mu_init otherwise.
NetworkStateVector build_state_vector(const NetworkRealization& realization,
                                      const WindowMetrics* prev_window);

}  // namespace wslice
