#include "wslice/qos.hpp"

#include <limits>
#include <stdexcept>
#include <string>

namespace wslice {

namespace {

void check_sizes(const WindowMetrics& w, std::span<const FlowSpec> flows) {
  if (w.throughput.size() != flows.size() || w.latency_ms.size() != flows.size())
    throw std::invalid_argument("window metrics do not match the flow list");
}

[[noreturn]] void no_flows(SlaCategory sla) {
  throw std::invalid_argument("no flows in SLA category " + std::string(to_string(sla)));
}

}  // namespace

double throughput_constraint(const WindowMetrics& w, const QosSpec& qos, std::span<const FlowSpec> flows) {
  check_sizes(w, flows);
  double worst = -std::numeric_limits<double>::infinity();
  bool any = false;
  for (std::size_t i = 0; i < flows.size(); ++i) {
    if (flows[i].sla != SlaCategory::HighThroughput) continue;
    any = true;
    worst = std::max(worst, 1.0 - w.throughput[i] / qos.r_min);
  }
  if (!any) no_flows(SlaCategory::HighThroughput);
  return worst;
}

double latency_constraint(const WindowMetrics& w, const QosSpec& qos, std::span<const FlowSpec> flows) {
  check_sizes(w, flows);
  double worst = -std::numeric_limits<double>::infinity();
  bool any = false;
  for (std::size_t i = 0; i < flows.size(); ++i) {
    if (flows[i].sla != SlaCategory::LowLatency) continue;
    any = true;
    worst = std::max(worst, w.latency_ms[i].value_or(0.0) / qos.ell_max - 1.0);
  }
  if (!any) no_flows(SlaCategory::LowLatency);
  return worst;
}

double objective(const WindowMetrics& w, std::span<const FlowSpec> flows) {
  check_sizes(w, flows);
  double sum = 0.0;
  int count = 0;
  for (std::size_t i = 0; i < flows.size(); ++i) {
    if (flows[i].sla != SlaCategory::BestEffort) continue;
    sum += w.throughput[i];
    ++count;
  }
  if (count == 0) no_flows(SlaCategory::BestEffort);
  return sum / count;
}

WindowEvaluation evaluate_window(const WindowMetrics& w, const QosSpec& qos, std::span<const FlowSpec> flows) {
  return {objective(w, flows), {throughput_constraint(w, qos, flows), latency_constraint(w, qos, flows)}};
}

double lagrangian_term(const WindowEvaluation& e, const DualMultipliers& lambda) noexcept {
  return -e.objective + lambda.lambda_h * e.constraints.f_h + lambda.lambda_l * e.constraints.f_l;
}

double lagrangian(std::span<const WindowMetrics> trajectory, const DualMultipliers& lambda, const QosSpec& qos,
                  std::span<const FlowSpec> flows) {
  if (trajectory.empty()) throw std::invalid_argument("lagrangian of an empty trajectory");
  double sum = 0.0;
  for (const auto& w : trajectory) sum += lagrangian_term(evaluate_window(w, qos, flows), lambda);
  return sum / static_cast<double>(trajectory.size());
}

}  // namespace wslice
