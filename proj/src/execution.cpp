#include "wslice/execution.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace wslice {

Trajectory rollout(const Episode& episode, Controller& controller, std::vector<SlotEvent>* slot_log) {
  const auto& r = episode.realization();
  Trajectory traj;
  traj.qos = r.config.qos;
  traj.flow_sla.reserve(r.flows.size());
  for (const auto& f : r.flows) traj.flow_sla.push_back(f.sla);
  traj.records.reserve(static_cast<std::size_t>(episode.num_windows()));
  traj.windows.reserve(static_cast<std::size_t>(episode.num_windows()));

  WorldState world = episode.initial_world();
  for (int t = 0; t < episode.num_windows(); ++t) {
    const NetworkStateVector state = build_state_vector(r, t == 0 ? nullptr : &traj.windows.back());
    const DecisionContext ctx{t, r, state, episode.mean_rates(t)};
    const DualMultipliers lambda = controller.multipliers();
    const SliceAllocation alloc = controller.decide(ctx);
    const std::size_t logged = slot_log ? slot_log->size() : 0;
    WindowMetrics metrics =
        simulate_window(r, t, alloc, world, episode.arrivals(t), episode.channel(t), slot_log);
    if (slot_log) {
      // Number slots across the whole run rather than per window.
      const int offset = t * r.config.slots_per_window();
      for (std::size_t k = logged; k < slot_log->size(); ++k) (*slot_log)[k].slot += offset;
    }
    const WindowEvaluation eval = evaluate_window(metrics, r.config.qos, r.flows);
    controller.observe(t, eval);
    traj.records.push_back({t, alloc, lambda, eval});
    traj.windows.push_back(std::move(metrics));
  }
  return traj;
}

DualMultipliers dual_update(const DualMultipliers& lambda, std::span<const ConstraintValue> period, double eta) {
  if (period.empty()) throw std::invalid_argument("dual update over an empty period");
  double sum_h = 0.0;
  double sum_l = 0.0;
  for (const auto& f : period) {
    sum_h += f.f_h;
    sum_l += f.f_l;
  }
  const double step = eta / static_cast<double>(period.size());
  return {std::max(0.0, lambda.lambda_h + step * sum_h), std::max(0.0, lambda.lambda_l + step * sum_l)};
}

StateAugmentedController::StateAugmentedController(const PolicyParams& params, int dual_period, double eta_lambda,
                                                   DualMultipliers initial)
    : params_(params), dual_period_(dual_period), eta_(eta_lambda), lambda_(initial), iterates_{initial} {
  if (dual_period < 1) throw std::invalid_argument("dual period must be positive");
  if (!(eta_lambda >= 0.0)) throw std::invalid_argument("dual step size must be nonnegative");
  if (!initial.is_nonnegative()) throw std::invalid_argument("initial multipliers must be nonnegative");
  pending_.reserve(static_cast<std::size_t>(dual_period));
}

SliceAllocation StateAugmentedController::decide(const DecisionContext& ctx) {
  return forward(params_, make_policy_input(ctx.state, lambda_)).allocation;
}

void StateAugmentedController::observe(int /*window*/, const WindowEvaluation& eval) {
  pending_.push_back(eval.constraints);
  if (static_cast<int>(pending_.size()) == dual_period_) {
    lambda_ = dual_update(lambda_, pending_, eta_);
    iterates_.push_back(lambda_);
    pending_.clear();
  }
}

SliceAllocation FixedMultiplierController::decide(const DecisionContext& ctx) {
  return forward(params_, make_policy_input(ctx.state, lambda_)).allocation;
}

std::optional<BaselineKind> parse_baseline(std::string_view name) noexcept {
  if (name == "uniform") return BaselineKind::Uniform;
  if (name == "proportional") return BaselineKind::Proportional;
  if (name == "tw" || name == "traffic_weighted") return BaselineKind::TrafficWeighted;
  return std::nullopt;
}

std::string_view to_string(BaselineKind kind) noexcept {
  switch (kind) {
    case BaselineKind::Uniform:
      return "uniform";
    case BaselineKind::Proportional:
      return "proportional";
    case BaselineKind::TrafficWeighted:
      return "tw";
  }
  return "?";
}

SliceAllocation baseline_allocation(BaselineKind kind, const NetworkRealization& r, std::span<const double> demand) {
  const auto counts = r.category_counts();
  for (int c : counts)
    if (c < 1) throw std::invalid_argument("baseline allocation needs at least one flow per slice");
  switch (kind) {
    case BaselineKind::Uniform:
      return SliceAllocation::uniform();
    case BaselineKind::Proportional:
      return SliceAllocation::from_weights(counts[0], counts[1], counts[2]);
    case BaselineKind::TrafficWeighted: {
      if (demand.size() != r.flows.size()) throw std::invalid_argument("demand vector does not match flows");
      std::array<double, kNumSlices> sums{};
      for (std::size_t i = 0; i < r.flows.size(); ++i) sums[index_of(r.flows[i].sla)] += std::max(0.0, demand[i]);
      if (!(sums[0] + sums[1] + sums[2] > 0.0))
        return SliceAllocation::from_weights(counts[0], counts[1], counts[2]);
      return SliceAllocation::from_weights(sums[0], sums[1], sums[2]);
    }
  }
  throw std::invalid_argument("unknown baseline kind");
}

SliceAllocation BaselineController::decide(const DecisionContext& ctx) {
  return baseline_allocation(kind_, ctx.realization, ctx.mean_rates);
}

Trajectory run_online(const PolicyParams& params, const NetworkRealization& realization, int num_windows,
                      int dual_period, double eta_lambda) {
  if (dual_period < 1 || num_windows % dual_period != 0) throw std::invalid_argument("T0 must divide T");
  if (!(eta_lambda > 0.0)) throw std::invalid_argument("online dual step size must be positive");
  NetworkRealization r = realization;
  r.config.num_windows = num_windows;
  r.config.dual_period = dual_period;
  return run_online(params, Episode(std::move(r)), eta_lambda);
}

Trajectory run_online(const PolicyParams& params, const Episode& episode, double eta_lambda) {
  if (!params.has_expected_shapes()) throw std::invalid_argument("checkpoint does not match the policy shapes");
  StateAugmentedController controller(params, episode.config().dual_period, eta_lambda);
  Trajectory traj = rollout(episode, controller);
  traj.dual_iterates = controller.iterates();
  return traj;
}

Trajectory run_fixed_multipliers(const PolicyParams& params, const Episode& episode, DualMultipliers lambda) {
  if (!params.has_expected_shapes()) throw std::invalid_argument("checkpoint does not match the policy shapes");
  FixedMultiplierController controller(params, lambda);
  Trajectory traj = rollout(episode, controller);
  traj.dual_iterates = {lambda};
  return traj;
}

Trajectory run_baseline(BaselineKind kind, const Episode& episode) {
  BaselineController controller(kind);
  Trajectory traj = rollout(episode, controller);
  traj.dual_iterates = {DualMultipliers{}};
  return traj;
}

DualMultipliers max_dual(const Trajectory& trajectory) noexcept {
  DualMultipliers m;
  for (const auto& d : trajectory.dual_iterates) {
    m.lambda_h = std::max(m.lambda_h, d.lambda_h);
    m.lambda_l = std::max(m.lambda_l, d.lambda_l);
  }
  return m;
}

WindowEvaluation mean_evaluation(const Trajectory& trajectory) {
  WindowEvaluation mean;
  if (trajectory.records.empty()) return mean;
  for (const auto& rec : trajectory.records) {
    mean.objective += rec.eval.objective;
    mean.constraints.f_h += rec.eval.constraints.f_h;
    mean.constraints.f_l += rec.eval.constraints.f_l;
  }
  const double n = static_cast<double>(trajectory.records.size());
  mean.objective /= n;
  mean.constraints.f_h /= n;
  mean.constraints.f_l /= n;
  return mean;
}

}  // namespace wslice
