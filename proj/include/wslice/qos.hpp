#pragma once

#include <span>

#include "wslice/domain.hpp"

namespace wslice {

/// Constraint values in minimization form: <= 0 means satisfied.
struct ConstraintValue {
  double f_h = 0.0;
  double f_l = 0.0;
};

/// Objective and constraints measured on one window.
struct WindowEvaluation {
  double objective = 0.0;  ///< mean best-effort throughput, to be maximized
  ConstraintValue constraints;
};

/// max over H flows of (1 - r_i(t) / r_min).
double throughput_constraint(const WindowMetrics& window, const QosSpec& qos, std::span<const FlowSpec> flows);

/// max over L flows of (l_i(t) / l_max - 1); an absent latency counts as 0 ms.
double latency_constraint(const WindowMetrics& window, const QosSpec& qos, std::span<const FlowSpec> flows);

/// Mean throughput of the B flows.
double objective(const WindowMetrics& window, std::span<const FlowSpec> flows);

WindowEvaluation evaluate_window(const WindowMetrics& window, const QosSpec& qos, std::span<const FlowSpec> flows);

/// Per-window Lagrangian integrand: -objective + lambda . f.
double lagrangian_term(const WindowEvaluation& eval, const DualMultipliers& lambda) noexcept;

/// (1/T) sum_t [ -objective(t) + lambda_h f_h(t) + lambda_l f_l(t) ].
double lagrangian(std::span<const WindowMetrics> trajectory, const DualMultipliers& lambda, const QosSpec& qos,
                  std::span<const FlowSpec> flows);

}  // namespace wslice
