#include "doctest.h"
#include "fixtures.hpp"
#include "wslice/qos.hpp"

using namespace wslice;
using wslice::testing::make_realization;

namespace {

WindowMetrics metrics(std::vector<double> r, std::vector<std::optional<double>> l) {
  WindowMetrics m(r.size());
  m.throughput = std::move(r);
  m.latency_ms = std::move(l);
  return m;
}

}  // namespace

TEST_SUITE("qos") {
  const QosSpec qos{1.0, 10.0};

  TEST_CASE("throughput constraint is the worst H shortfall") {
    const auto r = make_realization({2, 1, 1});
    CHECK(throughput_constraint(metrics({1.0, 1.0, 0, 0}, {{}, {}, {}, {}}), qos, r.flows) == 0.0);
    CHECK(throughput_constraint(metrics({0.5, 1.2, 0, 0}, {{}, {}, {}, {}}), qos, r.flows) ==
          doctest::Approx(0.5));
    const auto one = make_realization({1, 1, 1});
    CHECK(throughput_constraint(metrics({2.0, 0, 0}, {{}, {}, {}}), qos, one.flows) == doctest::Approx(-1.0));
  }

  TEST_CASE("latency constraint is the worst L excess") {
    const auto r = make_realization({1, 2, 1});
    CHECK(latency_constraint(metrics({0, 0, 0, 0}, {{}, 10.0, 10.0, {}}), qos, r.flows) == 0.0);
    CHECK(latency_constraint(metrics({0, 0, 0, 0}, {{}, 5.0, 12.0, {}}), qos, r.flows) == doctest::Approx(0.2));
    CHECK(latency_constraint(metrics({0, 0, 0, 0}, {{}, {}, {}, {}}), qos, r.flows) == -1.0);
  }

  TEST_CASE("objective is the mean B throughput") {
    const auto one = make_realization({1, 1, 1});
    CHECK(objective(metrics({0, 0, 1.5}, {{}, {}, {}}), one.flows) == 1.5);
    const auto three = make_realization({1, 1, 3});
    CHECK(objective(metrics({9, 9, 1, 2, 3}, {{}, {}, {}, {}, {}}), three.flows) == doctest::Approx(2.0));
    CHECK(objective(metrics({9, 9, 0, 0, 0}, {{}, {}, {}, {}, {}}), three.flows) == 0.0);
  }

  TEST_CASE("missing categories are errors") {
    auto r = make_realization({1, 1, 1});
    r.flows[0].sla = SlaCategory::BestEffort;
    const auto m = metrics({1, 1, 1}, {{}, {}, {}});
    CHECK_THROWS(throughput_constraint(m, qos, r.flows));
    r.flows[1].sla = SlaCategory::HighThroughput;
    CHECK_THROWS(latency_constraint(m, qos, r.flows));
    r.flows = {r.flows[0]};
    r.flows[0].sla = SlaCategory::HighThroughput;
    CHECK_THROWS(objective(metrics({1}, {{}}), r.flows));
  }

  TEST_CASE("Lagrangian") {
    const auto r = make_realization({1, 1, 1});
    // Objective 2, f = (0.5, -0.2).
    const auto m = metrics({0.5, 0, 2.0}, {{}, 8.0, {}});
    const std::vector<WindowMetrics> traj{m};
    CHECK(lagrangian(traj, {1.0, 1.0}, qos, r.flows) == doctest::Approx(-1.7));
    CHECK(lagrangian(traj, {0.0, 0.0}, qos, r.flows) == doctest::Approx(-2.0));
    const double base = lagrangian(traj, {0.0, 0.0}, qos, r.flows);
    const double one = lagrangian(traj, {1.0, 0.0}, qos, r.flows) - base;
    const double two = lagrangian(traj, {2.0, 0.0}, qos, r.flows) - base;
    CHECK(two == doctest::Approx(2.0 * one));
    const std::vector<WindowMetrics> pair{m, metrics({1.0, 0, 4.0}, {{}, 10.0, {}})};
    // Mean of (-2 + 0.5 - 0.2) and (-4 + 0 + 0).
    CHECK(lagrangian(pair, {1.0, 1.0}, qos, r.flows) == doctest::Approx((-1.7 - 4.0) / 2));
  }

  TEST_CASE("constraints are invariant to permuting flows within a category") {
    const auto r = make_realization({3, 1, 1});
    const auto a = evaluate_window(metrics({0.3, 0.9, 1.4, 0, 2}, {{}, {}, {}, 4.0, {}}), qos, r.flows);
    const auto b = evaluate_window(metrics({1.4, 0.3, 0.9, 0, 2}, {{}, {}, {}, 4.0, {}}), qos, r.flows);
    CHECK(a.constraints.f_h == b.constraints.f_h);
    CHECK(a.objective == b.objective);
  }
}
