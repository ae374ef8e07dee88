#include "wslice/report.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "wslice/parallel.hpp"

namespace wslice {

ViolationRates violation_rates(std::span<const Trajectory> trajectories, const QosSpec& qos) {
  long long h_pairs = 0, h_pair_viol = 0, h_flows = 0, h_flow_viol = 0;
  long long l_pairs = 0, l_pair_viol = 0, l_flows = 0, l_flow_viol = 0;

  for (const auto& traj : trajectories) {
    const std::size_t n = traj.flow_sla.size();
    const auto windows = static_cast<double>(traj.windows.size());
    if (traj.windows.empty()) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const SlaCategory sla = traj.flow_sla[i];
      if (sla == SlaCategory::BestEffort) continue;
      double sum = 0.0;
      for (const auto& w : traj.windows) {
        if (sla == SlaCategory::HighThroughput) {
          const double r = w.throughput[i];
          sum += r;
          ++h_pairs;
          if (r < qos.r_min) ++h_pair_viol;
        } else {
          const double l = w.latency_ms[i].value_or(0.0);
          sum += l;
          ++l_pairs;
          if (l > qos.ell_max) ++l_pair_viol;
        }
      }
      const double avg = sum / windows;
      if (sla == SlaCategory::HighThroughput) {
        ++h_flows;
        if (avg < qos.r_min) ++h_flow_viol;
      } else {
        ++l_flows;
        if (avg > qos.ell_max) ++l_flow_viol;
      }
    }
  }
  auto pct = [](long long num, long long den) { return den > 0 ? 100.0 * num / den : 0.0; };
  return {pct(h_pair_viol, h_pairs), pct(h_flow_viol, h_flows), pct(l_pair_viol, l_pairs),
          pct(l_flow_viol, l_flows)};
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("percentile of an empty sample");
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("percentile level outside [0, 1]");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  const double rank = std::clamp(q * (n + 1.0), 1.0, n);  // 1-based
  const auto lo = static_cast<std::size_t>(std::floor(rank)) - 1;
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = rank - std::floor(rank);
  return values[lo] + frac * (values[hi] - values[lo]);
}

Curves aggregate_curves(std::span<const Trajectory> trajectories) {
  if (trajectories.size() < 2) throw std::invalid_argument("curves need at least two realizations");
  std::size_t horizon = trajectories.front().records.size();
  for (const auto& t : trajectories) horizon = std::min(horizon, t.records.size());

  Curves out;
  std::vector<double> fh, fl, obj;
  for (std::size_t t = 0; t < horizon; ++t) {
    fh.clear();
    fl.clear();
    obj.clear();
    for (const auto& traj : trajectories) {
      const auto& e = traj.records[t].eval;
      fh.push_back(e.constraints.f_h);
      fl.push_back(e.constraints.f_l);
      obj.push_back(e.objective);
    }
    auto point = [](const std::vector<double>& v) {
      double mean = 0.0;
      for (double x : v) mean += x;
      return CurvePoint{mean / static_cast<double>(v.size()), percentile(v, 0.99)};
    };
    out.f_h.push_back(point(fh));
    out.f_l.push_back(point(fl));
    out.objective.push_back(point(obj));
  }
  return out;
}

std::vector<Trajectory> evaluate_method(const Method& method, std::span<const NetworkRealization> test_set,
                                        double eta_lambda, int threads) {
  if (method.kind != MethodKind::Baseline && !method.params)
    throw MissingArtifactError("method '" + method.name + "' needs a checkpoint");
  std::vector<Trajectory> out(test_set.size());
  parallel_for(test_set.size(), threads, [&](std::size_t i) {
    const Episode episode(test_set[i]);
    switch (method.kind) {
      case MethodKind::StateAugmented:
        out[i] = run_online(*method.params, episode, eta_lambda);
        break;
      case MethodKind::PrimalDual:
        out[i] = run_fixed_multipliers(*method.params, episode, method.lambda);
        break;
      case MethodKind::Baseline:
        out[i] = run_baseline(method.baseline, episode);
        break;
    }
  });
  return out;
}

std::vector<SweepRow> sweep_table(std::span<const Method> methods, std::span<const QosSpec> qos_grid,
                                  std::span<const NetworkRealization> test_set, double eta_lambda, int threads) {
  std::vector<SweepRow> rows;
  for (const auto& method : methods) {
    // Allocations of QoS-agnostic methods do not depend on the targets, so one run serves every grid point.
    std::optional<std::vector<Trajectory>> shared;
    for (const auto& qos : qos_grid) {
      if (method.kind == MethodKind::StateAugmented) {
        std::vector<NetworkRealization> retargeted;
        retargeted.reserve(test_set.size());
        for (const auto& r : test_set) retargeted.push_back(with_qos(r, qos));
        const auto runs = evaluate_method(method, retargeted, eta_lambda, threads);
        rows.push_back({method.name, qos, violation_rates(runs, qos)});
      } else {
        if (!shared) shared = evaluate_method(method, test_set, eta_lambda, threads);
        rows.push_back({method.name, qos, violation_rates(*shared, qos)});
      }
    }
  }
  return rows;
}

std::vector<QosSpec> parse_qos_grid(const std::string& spec) {
  std::vector<QosSpec> grid;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ConfigError("malformed grid entry '" + item + "' (expected r_min:ell_max)");
    try {
      std::size_t used_a = 0, used_b = 0;
      const std::string a = item.substr(0, colon);
      const std::string b = item.substr(colon + 1);
      QosSpec q{std::stod(a, &used_a), std::stod(b, &used_b)};
      if (used_a != a.size() || used_b != b.size() || !(q.r_min > 0.0) || !(q.ell_max > 0.0))
        throw ConfigError("bad grid entry");
      grid.push_back(q);
    } catch (const std::exception&) {
      throw ConfigError("malformed grid entry '" + item + "'");
    }
  }
  if (grid.empty()) throw ConfigError("empty QoS grid");
  return grid;
}

void write_table_csv(std::ostream& os, std::span<const SweepRow> rows) {
  os << "method,r_min,ell_max,h_inst,h_erg,l_inst,l_erg\n";
  os << std::setprecision(6);
  for (const auto& row : rows) {
    os << row.method << ',' << row.qos.r_min << ',' << row.qos.ell_max << ',' << row.rates.h_inst << ','
       << row.rates.h_erg << ',' << row.rates.l_inst << ',' << row.rates.l_erg << '\n';
  }
}

void write_curves_csv(std::ostream& os, const std::string& method, const Curves& curves, bool header) {
  if (header) os << "method,window,metric,mean,p99\n";
  os << std::setprecision(10);
  auto emit = [&](const char* metric, const std::vector<CurvePoint>& pts) {
    for (std::size_t t = 0; t < pts.size(); ++t)
      os << method << ',' << t << ',' << metric << ',' << pts[t].mean << ',' << pts[t].p99 << '\n';
  };
  emit("f_h", curves.f_h);
  emit("f_l", curves.f_l);
  emit("objective", curves.objective);
}

void write_trajectory_jsonl(std::ostream& os, std::span<const Trajectory> trajectories) {
  os << std::setprecision(12);
  for (std::size_t k = 0; k < trajectories.size(); ++k) {
    for (const auto& rec : trajectories[k].records) {
      os << "{\"realization\":" << k << ",\"t\":" << rec.t << ",\"p_h\":" << rec.allocation.p_h
         << ",\"p_l\":" << rec.allocation.p_l << ",\"p_b\":" << rec.allocation.p_b
         << ",\"lambda_h\":" << rec.lambda.lambda_h << ",\"lambda_l\":" << rec.lambda.lambda_l
         << ",\"f_h\":" << rec.eval.constraints.f_h << ",\"f_l\":" << rec.eval.constraints.f_l
         << ",\"objective\":" << rec.eval.objective << "}\n";
    }
  }
}

void write_epochs_csv(std::ostream& os, std::span<const EpochLog> log, bool include_wall_time) {
  os << "epoch,val_objective,val_f_h,val_f_l,lambda_max_h,lambda_max_l,wall_time\n";
  os << std::setprecision(10);
  for (const auto& e : log) {
    os << e.epoch << ',' << e.val_objective << ',' << e.val_f_h << ',' << e.val_f_l << ',' << e.lambda_max.lambda_h
       << ',' << e.lambda_max.lambda_l << ',' << (include_wall_time ? e.wall_time : 0.0) << '\n';
  }
}

void write_slot_log_csv(std::ostream& os, std::span<const SlotEvent> events) {
  os << "slot,slice,flow,bits_served,queue_len\n";
  os << std::setprecision(10);
  for (const auto& e : events)
    os << e.slot << ',' << to_string(e.slice) << ',' << e.flow << ',' << e.bits_served << ',' << e.queue_len << '\n';
}

}  // namespace wslice
