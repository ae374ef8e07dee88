#include <sstream>

#include "doctest.h"
#include "micro.hpp"
#include "wslice/report.hpp"
#include "wslice/rng.hpp"
#include "wslice/training.hpp"

using namespace wslice;
using namespace wslice::testing;

namespace {

std::vector<Trajectory> random_trajectories(std::uint64_t seed) {
  auto rng = make_rng(seed, SeedTag::kTestSet);
  std::uniform_real_distribution<double> rate(0.0, 3.0);
  std::uniform_real_distribution<double> lat(0.0, 30.0);
  std::bernoulli_distribution idle(0.1);
  std::vector<Trajectory> out;
  for (int n = 0; n < 3; ++n) {
    const std::vector<SlaCategory> sla{SlaCategory::HighThroughput, SlaCategory::HighThroughput,
                                       SlaCategory::LowLatency, SlaCategory::LowLatency, SlaCategory::BestEffort};
    std::vector<std::vector<double>> r(sla.size());
    std::vector<std::vector<std::optional<double>>> l(sla.size());
    for (std::size_t i = 0; i < sla.size(); ++i) {
      for (int w = 0; w < 6; ++w) {
        r[i].push_back(rate(rng));
        l[i].push_back(idle(rng) ? std::optional<double>{} : lat(rng));
      }
    }
    out.push_back(micro_trajectory(sla, r, l));
  }
  return out;
}

}  // namespace

TEST_SUITE("report") {
  TEST_CASE("hand-counted violation rates") {
    for (const auto& c : micro_cases()) {
      CAPTURE(c.name);
      CHECK(rates_equal(violation_rates(c.trajectories, {1.0, 10.0}), c.expected));
    }
  }

  TEST_CASE("all-feasible trajectories have no violations") {
    const auto t = micro_trajectory({SlaCategory::HighThroughput, SlaCategory::LowLatency, SlaCategory::BestEffort},
                                    {{2, 2}, {0, 0}, {1, 1}}, {{{}, {}}, {1.0, 2.0}, {{}, {}}});
    const auto v = violation_rates(std::vector<Trajectory>{t}, {1.0, 10.0});
    CHECK(v.h_inst == 0.0);
    CHECK(v.h_erg == 0.0);
    CHECK(v.l_inst == 0.0);
    CHECK(v.l_erg == 0.0);
  }

  TEST_CASE("threshold monotonicity") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const auto t = random_trajectories(seed);
      const auto strict = violation_rates(t, {1.5, 10.0});
      const auto loose = violation_rates(t, {1.0, 20.0});
      CHECK(loose.h_inst <= strict.h_inst);
      CHECK(loose.h_erg <= strict.h_erg);
      CHECK(loose.l_inst <= strict.l_inst);
      CHECK(loose.l_erg <= strict.l_erg);
      const auto v = violation_rates(t, {1.0, 10.0});
      for (double x : {v.h_inst, v.h_erg, v.l_inst, v.l_erg}) {
        CHECK(x >= 0.0);
        CHECK(x <= 100.0);
      }
    }
  }

  TEST_CASE("percentile") {
    CHECK(percentile({3.0}, 0.99) == 3.0);
    CHECK(percentile({1.0, 5.0}, 0.99) == 5.0);
    CHECK(percentile({1.0, 2.0, 3.0}, 0.5) == 2.0);
    // Rank 0.25 * 4 = 1 on three sorted values.
    CHECK(percentile({3.0, 1.0, 2.0}, 0.25) == 1.0);
    CHECK(percentile({1.0, 2.0, 3.0, 4.0}, 0.5) == doctest::Approx(2.5));
    CHECK_THROWS(percentile({}, 0.5));
    CHECK_THROWS(percentile({1.0}, 1.5));
  }

  TEST_CASE("curves") {
    const auto base = micro_cases()[1].trajectories.front();
    Trajectory t = base;
    t.records.resize(t.windows.size());
    for (std::size_t w = 0; w < t.records.size(); ++w) {
      t.records[w].t = static_cast<int>(w);
      t.records[w].eval = {1.0 + w, {0.5, -0.25}};
    }
    const std::vector<Trajectory> same{t, t};
    const auto c = aggregate_curves(same);
    REQUIRE(c.objective.size() == 3);
    for (const auto& p : c.objective) CHECK(p.mean == p.p99);
    for (const auto& p : c.f_h) {
      CHECK(p.mean == 0.5);
      CHECK(p.p99 == 0.5);
    }
    Trajectory worse = t;
    for (auto& rec : worse.records) rec.eval.constraints.f_l = 0.75;
    const auto d = aggregate_curves(std::vector<Trajectory>{t, worse});
    for (const auto& p : d.f_l) {
      CHECK(p.p99 == 0.75);
      CHECK(p.mean == doctest::Approx(0.25));
    }
  }

  TEST_CASE("QoS grid parsing") {
    const auto g = parse_qos_grid("0.7:5,0.9:10,0.9:20,1.0:10");
    REQUIRE(g.size() == 4);
    CHECK(g[0].r_min == 0.7);
    CHECK(g[2].ell_max == 20.0);
    CHECK_THROWS_AS(parse_qos_grid(""), ConfigError);
    CHECK_THROWS_AS(parse_qos_grid("1.0"), ConfigError);
    CHECK_THROWS_AS(parse_qos_grid("1.0:x"), ConfigError);
    CHECK_THROWS_AS(parse_qos_grid("-1:10"), ConfigError);
  }

  TEST_CASE("sweep reuses trajectories for baselines across the grid") {
    NetworkConfig n;
    n.num_windows = 4;
    const auto test = make_test_set(1, n, 3);
    Method uniform;
    uniform.name = "uniform";
    const std::vector<Method> methods{uniform};
    const auto rows = sweep_table(methods, parse_qos_grid("0.9:10,0.9:20,1.0:10"), test, 1.0);
    REQUIRE(rows.size() == 3);
    CHECK(rows[1].rates.l_inst <= rows[0].rates.l_inst);
    CHECK(rows[1].rates.l_erg <= rows[0].rates.l_erg);
    CHECK(rows[1].rates.h_inst == rows[0].rates.h_inst);
    CHECK(rows[2].rates.h_inst >= rows[0].rates.h_inst);
    const auto single = sweep_table(methods, parse_qos_grid("1.0:10"), test, 1.0);
    CHECK(single.size() == 1);
    CHECK(rates_equal(single[0].rates, rows[2].rates));
  }

  TEST_CASE("table and epoch CSV layout") {
    std::ostringstream os;
    const SweepRow row{"uniform", {1.0, 10.0}, {1.0, 2.0, 3.0, 4.0}};
    write_table_csv(os, std::span(&row, 1));
    CHECK(os.str() == "method,r_min,ell_max,h_inst,h_erg,l_inst,l_erg\nuniform,1,10,1,2,3,4\n");

    std::ostringstream ep;
    const EpochLog log{0, 1.5, 0.25, -0.5, {1.0, 2.0}, 3.0};
    write_epochs_csv(ep, std::span(&log, 1), false);
    CHECK(ep.str() == "epoch,val_objective,val_f_h,val_f_l,lambda_max_h,lambda_max_l,wall_time\n"
                      "0,1.5,0.25,-0.5,1,2,0\n");
  }
}
