#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wslice/domain.hpp"
#include "wslice/execution.hpp"
#include "wslice/policy.hpp"
#include "wslice/training.hpp"

namespace wslice {

/// Violation percentages in [0, 100].
///  - instantaneous: share of (flow, window) pairs of the SLA missing the per-window target;
///  - ergodic: share of flows whose T-window average misses the target.
struct ViolationRates {
  double h_inst = 0.0;
  double h_erg = 0.0;
  double l_inst = 0.0;
  double l_erg = 0.0;
};

ViolationRates violation_rates(std::span<const Trajectory> trajectories, const QosSpec& qos);

/// Linear-interpolation percentile with plotting positions p * (n + 1), clamped
/// to the sample range. `q` in [0, 1]. Throws on an empty sample.
double percentile(std::vector<double> values, double q);

struct CurvePoint {
  double mean = 0.0;
  double p99 = 0.0;
};

/// Per-window mean and 99th percentile across realizations.
struct Curves {
  std::vector<CurvePoint> f_h;
  std::vector<CurvePoint> f_l;
  std::vector<CurvePoint> objective;
};

Curves aggregate_curves(std::span<const Trajectory> trajectories);

enum class MethodKind { StateAugmented, PrimalDual, Baseline };

/// A slicing method as used by evaluation and sweeps.
struct Method {
  std::string name;
  MethodKind kind = MethodKind::Baseline;
  BaselineKind baseline = BaselineKind::Uniform;
  std::optional<PolicyParams> params;  ///< learned methods only
  DualMultipliers lambda;              ///< PD execution multiplier
};

/// Runs `method` on every realization (online duals for SA-PD).
std::vector<Trajectory> evaluate_method(const Method& method, std::span<const NetworkRealization> test_set,
                                        double eta_lambda, int threads = 1);

struct SweepRow {
  std::string method;
  QosSpec qos;
  ViolationRates rates;
};

/// Violation matrix over methods x QoS points. Learned methods reuse one
/// checkpoint for every point; only the online dual dynamics are rerun.
std::vector<SweepRow> sweep_table(std::span<const Method> methods, std::span<const QosSpec> qos_grid,
                                  std::span<const NetworkRealization> test_set, double eta_lambda, int threads = 1);

/// Parses "0.7:5,0.9:10" into QoS points; throws ConfigError when malformed.
std::vector<QosSpec> parse_qos_grid(const std::string& spec);

void write_table_csv(std::ostream& os, std::span<const SweepRow> rows);
void write_curves_csv(std::ostream& os, const std::string& method, const Curves& curves, bool header = true);
void write_trajectory_jsonl(std::ostream& os, std::span<const Trajectory> trajectories);
void write_epochs_csv(std::ostream& os, std::span<const EpochLog> log, bool include_wall_time);
void write_slot_log_csv(std::ostream& os, std::span<const SlotEvent> events);

}  // namespace wslice
