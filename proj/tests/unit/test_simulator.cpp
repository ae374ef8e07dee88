#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "properties.hpp"
#include "wslice/simulator.hpp"

using namespace wslice;
using namespace wslice::testing;

TEST_SUITE("simulator") {
  TEST_CASE("instantaneous rate is share times spectral efficiency") {
    const SliceAllocation p{0.5, 1.0 / 3.0, 1.0 / 6.0};
    const FlowSpec h{0, SlaCategory::HighThroughput, 1.0, 10.0};
    CHECK(instantaneous_rate(p, h, gain_for_rate(2.0)) == doctest::Approx(1.0));
    CHECK(instantaneous_rate({0.0, 0.5, 0.5}, h, 100.0) == 0.0);
    CHECK(instantaneous_rate(p, h, 0.0) == 0.0);
  }

  TEST_CASE("packet latency formulas") {
    NetworkConfig c;
    // P / (r W) = 1e4 / (5 * 20e6) s = 0.1 ms.
    CHECK(packet_latency(0.0, 0.0, 5.0, c) == doctest::Approx(0.1));
    CHECK(packet_latency(0.0, 0.005, 5.0, c) == doctest::Approx(5.1));
    c.latency_mode = LatencyMode::Literal;
    CHECK(packet_latency(0.0, 0.0, 10.0 / c.packet_size_bits, c) == doctest::Approx(0.1));
    CHECK_THROWS(packet_latency(0.0, 0.0, 0.0, c));
    CHECK_THROWS(packet_latency(1.0, 0.5, 1.0, c));
  }

  TEST_CASE("single saturated flow gets share times spectral efficiency") {
    const auto r = make_realization({1, 1, 1});
    auto world = WorldState::empty_for(r);
    saturate(world, {0});
    const auto m = simulate_window(r, 0, {0.5, 0.25, 0.25}, world, no_arrivals(r),
                                   constant_channel(r, gain_for_rate(2.0)));
    CHECK(m.throughput[0] == doctest::Approx(1.0));
    CHECK(m.transmitted[0] == 100);
    CHECK(m.conserves_packets());
  }

  TEST_CASE("two symmetric saturated flows split the slice") {
    const auto r = make_realization({2, 1, 1});
    auto world = WorldState::empty_for(r);
    saturate(world, {0, 1});
    const SliceAllocation p{0.6, 0.2, 0.2};
    const double g = 1.7;
    const auto m = simulate_window(r, 0, p, world, no_arrivals(r), constant_channel(r, gain_for_rate(g)));
    const double slot_share = p.p_h * g * r.config.slot_duration / r.config.window_duration;
    CHECK(std::abs(m.throughput[0] - p.p_h * g / 2) <= slot_share + 1e-12);
    CHECK(std::abs(m.throughput[1] - p.p_h * g / 2) <= slot_share + 1e-12);
    CHECK(m.throughput[0] + m.throughput[1] == doctest::Approx(p.p_h * g));
  }

  TEST_CASE("round robin gives each saturated flow an equal number of slots") {
    // One packet per slot: x * g * W * delta = 1e4 bits.
    const auto r = make_realization({1, 4, 1});
    auto world = WorldState::empty_for(r);
    const auto l = r.members(SlaCategory::LowLatency);
    saturate(world, l);
    const auto m = simulate_window(r, 0, {0.25, 0.5, 0.25}, world, no_arrivals(r),
                                   constant_channel(r, gain_for_rate(2.0)));
    for (int f : l) CHECK(m.transmitted[static_cast<std::size_t>(f)] == 25);
  }

  TEST_CASE("idle network") {
    const auto r = make_realization({2, 2, 2});
    auto world = WorldState::empty_for(r);
    std::vector<SlotEvent> log;
    const auto m = simulate_window(r, 0, {}, world, no_arrivals(r), constant_channel(r, 10.0), &log);
    for (std::size_t i = 0; i < r.flows.size(); ++i) {
      CHECK(m.throughput[i] == 0.0);
      CHECK_FALSE(m.latency_ms[i].has_value());
      CHECK(m.dropped[i] == 0);
    }
    CHECK(log.size() == 3u * 100u);
    for (const auto& e : log) CHECK(e.flow == -1);
  }

  TEST_CASE("single packet latency is its airtime") {
    const auto r = make_realization({1, 1, 1});
    auto world = WorldState::empty_for(r);
    auto a = no_arrivals(r);
    a.timestamps[1] = {0.0};
    const auto m = simulate_window(r, 0, {0.25, 0.5, 0.25}, world, a, constant_channel(r, gain_for_rate(2.0)));
    // Rate 1 bps/Hz: 1e4 bits take 0.5 ms.
    REQUIRE(m.latency_ms[1].has_value());
    CHECK(*m.latency_ms[1] == doctest::Approx(0.5));
    CHECK(m.throughput[1] == doctest::Approx(1e4 / (20e6 * 0.05)));
  }

  TEST_CASE("full queues tail-drop arrivals") {
    NetworkConfig c;
    c.queue_capacity_packets = 5;
    const auto r = make_realization({1, 1, 1}, 1.0, 15.0, 1, c);
    auto world = WorldState::empty_for(r);
    auto a = no_arrivals(r);
    for (int k = 0; k < 20; ++k) a.timestamps[0].push_back(k * 1e-5);
    const auto m = simulate_window(r, 0, {1e-9, 0.5, 0.5 - 1e-9}, world, a, constant_channel(r, 1.0));
    CHECK(m.dropped[0] == 15);
    CHECK(m.queued_end[0] == 5);
    CHECK(m.conserves_packets());
    REQUIRE(m.latency_ms[0].has_value());
    CHECK(*m.latency_ms[0] == doctest::Approx(50.0).epsilon(1e-3));
  }

  TEST_CASE("backlog carries over with rebased arrival times") {
    const auto r = make_realization({1, 1, 1});
    auto world = WorldState::empty_for(r);
    saturate(world, {0});
    simulate_window(r, 0, {0.01, 0.495, 0.495}, world, no_arrivals(r), constant_channel(r, 1.0));
    CHECK(world.queues[0].size() > 0);
    CHECK(world.queues[0].head_arrival() == doctest::Approx(-0.05));
  }

  TEST_CASE("invalid inputs are rejected") {
    const auto r = make_realization({1, 1, 1});
    auto world = WorldState::empty_for(r);
    CHECK_THROWS(simulate_window(r, 0, {0.5, 0.5, 0.5}, world, no_arrivals(r), constant_channel(r, 1.0)));
    CHECK_THROWS(simulate_window(r, 1, {}, world, no_arrivals(r), constant_channel(r, 1.0)));
    CHECK_THROWS(simulate_window(r, 50, {}, world, no_arrivals(r, 50), constant_channel(r, 1.0, 50)));
  }

  TEST_CASE("randomized invariants") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      CHECK(check_packet_conservation(seed) == "");
      CHECK(check_work_conservation(seed) == "");
      CHECK(check_round_robin_fairness(seed) == "");
      CHECK(check_throughput_monotonicity(seed) == "");
      CHECK(check_determinism(seed) == "");
    }
  }
}
