#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "wslice/domain.hpp"
#include "wslice/episode.hpp"
#include "wslice/policy.hpp"
#include "wslice/qos.hpp"
#include "wslice/simulator.hpp"

namespace wslice {

/// What the controller sees at the start of window t.
struct DecisionContext {
  int window = 0;
  const NetworkRealization& realization;
  const NetworkStateVector& state;
  std::span<const double> mean_rates;  ///< current mu^t per flow
};

/// Produces one slice allocation per window and optionally tracks multipliers.
class Controller {
 public:
  virtual ~Controller() = default;
  virtual SliceAllocation decide(const DecisionContext& ctx) = 0;
  /// Multipliers in force for the window being decided.
  [[nodiscard]] virtual DualMultipliers multipliers() const { return {}; }
  /// Called once per window after simulation.
  virtual void observe(int /*window*/, const WindowEvaluation& /*eval*/) {}
};

struct WindowRecord {
  int t = 0;
  SliceAllocation allocation;
  DualMultipliers lambda;
  WindowEvaluation eval;
};

/// Everything recorded while executing a controller on one realization.
struct Trajectory {
  std::vector<SlaCategory> flow_sla;
  QosSpec qos;
  std::vector<WindowRecord> records;
  std::vector<WindowMetrics> windows;
  /// Dual iterates lambda_0, lambda_1, ... (one per completed update plus the initial value).
  std::vector<DualMultipliers> dual_iterates;
};

/// Simulates every window of `episode` under `controller`. The state vector at
/// window t uses arrival rates measured during window t-1 (mu_init at t = 0).
Trajectory rollout(const Episode& episode, Controller& controller, std::vector<SlotEvent>* slot_log = nullptr);

/// [lambda + (eta / T0) sum_t f(t)]_+ over one dual period of per-window constraint values.
DualMultipliers dual_update(const DualMultipliers& lambda, std::span<const ConstraintValue> period, double eta);

/// Frozen policy augmented with multipliers that follow the online dual dynamics.
class StateAugmentedController final : public Controller {
 public:
  StateAugmentedController(const PolicyParams& params, int dual_period, double eta_lambda,
                           DualMultipliers initial = {});
  SliceAllocation decide(const DecisionContext& ctx) override;
  [[nodiscard]] DualMultipliers multipliers() const override { return lambda_; }
  void observe(int window, const WindowEvaluation& eval) override;
  [[nodiscard]] const std::vector<DualMultipliers>& iterates() const noexcept { return iterates_; }

 private:
  const PolicyParams& params_;
  int dual_period_;
  double eta_;
  DualMultipliers lambda_;
  std::vector<ConstraintValue> pending_;
  std::vector<DualMultipliers> iterates_;
};

/// Frozen policy fed a constant multiplier input (vanilla primal-dual execution).
class FixedMultiplierController final : public Controller {
 public:
  FixedMultiplierController(const PolicyParams& params, DualMultipliers lambda) : params_(params), lambda_(lambda) {}
  SliceAllocation decide(const DecisionContext& ctx) override;
  [[nodiscard]] DualMultipliers multipliers() const override { return lambda_; }

 private:
  const PolicyParams& params_;
  DualMultipliers lambda_;
};

enum class BaselineKind { Uniform, Proportional, TrafficWeighted };

std::optional<BaselineKind> parse_baseline(std::string_view name) noexcept;
std::string_view to_string(BaselineKind kind) noexcept;

/// Classical allocators: equal split, split by flow counts, or split by the
/// per-slice sum of current demand (falls back to flow counts when the demand is zero).
SliceAllocation baseline_allocation(BaselineKind kind, const NetworkRealization& realization,
                                    std::span<const double> demand);

class BaselineController final : public Controller {
 public:
  explicit BaselineController(BaselineKind kind) : kind_(kind) {}
  SliceAllocation decide(const DecisionContext& ctx) override;

 private:
  BaselineKind kind_;
};

/// Online execution with lambda_0 = 0 over T windows, updating the duals every T0 windows.
Trajectory run_online(const PolicyParams& params, const NetworkRealization& realization, int num_windows,
                      int dual_period, double eta_lambda);
Trajectory run_online(const PolicyParams& params, const Episode& episode, double eta_lambda);

Trajectory run_fixed_multipliers(const PolicyParams& params, const Episode& episode, DualMultipliers lambda);
Trajectory run_baseline(BaselineKind kind, const Episode& episode);

/// Largest multiplier components seen anywhere in the trajectory's dual iterates.
DualMultipliers max_dual(const Trajectory& trajectory) noexcept;

/// Trajectory-averaged objective and constraints.
WindowEvaluation mean_evaluation(const Trajectory& trajectory);

}  // namespace wslice
